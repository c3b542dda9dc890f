#include "synth.h"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace daat::synth {

namespace {

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

char32_t pick_char(const std::u32string& s, Rng& rng) { return s[pick(rng, 0, s.size() - 1)]; }

// `n` distinct characters of `pool` in random order.
std::u32string distinct(const std::u32string& pool, std::size_t n, Rng& rng) {
  if (n > pool.size()) throw std::invalid_argument("synth: neighbour pool too small");
  std::u32string s = pool;
  std::shuffle(s.begin(), s.end(), rng);
  s.resize(n);
  return s;
}

void append_base(SegmentedSentence& out, const BaseLanguage& lang, std::size_t n, Rng& rng) {
  for (std::size_t i = 0; i < n; ++i) out.push_back(lang.sample(rng));
}

}  // namespace

std::u32string Alphabet::take(std::size_t n) {
  std::u32string s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(next_++);
  return s;
}

BaseLanguage BaseLanguage::make(Alphabet& alphabet, const BaseSpec& spec, Rng& rng) {
  const std::u32string b = alphabet.take(spec.b_chars), m = alphabet.take(spec.m_chars),
                       e = alphabet.take(spec.e_chars), s = alphabet.take(spec.s_chars);
  std::set<Word> words;
  // Every S-char is a word, and every B/E-char opens / closes at least one.
  for (char32_t c : s) words.insert(Word(1, c));
  for (char32_t c : b) words.insert(Word{c, pick_char(e, rng)});
  for (char32_t c : e) words.insert(Word{pick_char(b, rng), c});
  for (char32_t c : m) words.insert(Word{pick_char(b, rng), c, pick_char(e, rng)});

  const std::size_t singles = static_cast<std::size_t>(spec.single_share * spec.words);
  const std::size_t triples = static_cast<std::size_t>(spec.triple_share * spec.words);
  std::size_t n_triples = 0;
  for (const auto& w : words) n_triples += w.size() == 3;
  while (n_triples < triples) {
    n_triples += words.insert(Word{pick_char(b, rng), pick_char(m, rng), pick_char(e, rng)}).second;
  }
  while (words.size() < std::max(spec.words, singles)) {
    words.insert(Word{pick_char(b, rng), pick_char(e, rng)});
  }

  BaseLanguage lang;
  lang.words_.assign(words.begin(), words.end());
  for (std::size_t i = 0; i < lang.words_.size(); ++i) {
    lang.by_first_[lang.words_[i].front()].push_back(i);
    lang.by_last_[lang.words_[i].back()].push_back(i);
  }
  lang.b_ = b;
  lang.m_ = m;
  lang.e_ = e;
  lang.left_chars_ = e + s;
  lang.right_chars_ = b + s;
  return lang;
}

const Word& BaseLanguage::sample(Rng& rng) const { return words_[pick(rng, 0, words_.size() - 1)]; }

const Word& BaseLanguage::ending_in(char32_t c, Rng& rng) const {
  const auto& idx = by_last_.at(c);
  return words_[idx[pick(rng, 0, idx.size() - 1)]];
}

const Word& BaseLanguage::starting_with(char32_t c, Rng& rng) const {
  const auto& idx = by_first_.at(c);
  return words_[idx[pick(rng, 0, idx.size() - 1)]];
}

SegmentedSentence base_sentence(const BaseLanguage& lang, const Shape& shape, Rng& rng) {
  SegmentedSentence out;
  append_base(out, lang, pick(rng, shape.min_tokens, shape.max_tokens), rng);
  return out;
}

SegmentedSentence embed_word(const BaseLanguage& lang, const Word& w, char32_t left,
                             char32_t right, const Shape& shape, Rng& rng) {
  // The word plus its two flanking base words are three of the tokens.
  const std::size_t total = pick(rng, std::max<std::size_t>(shape.min_tokens, 3),
                                 std::max<std::size_t>(shape.max_tokens, 3));
  const std::size_t prefix = pick(rng, 0, total - 3);
  SegmentedSentence out;
  append_base(out, lang, prefix, rng);
  out.push_back(lang.ending_in(left, rng));
  out.push_back(w);
  out.push_back(lang.starting_with(right, rng));
  append_base(out, lang, total - 3 - prefix, rng);
  return out;
}

std::vector<Sentence> raw(const std::vector<SegmentedSentence>& corpus) {
  std::vector<Sentence> out;
  out.reserve(corpus.size());
  for (const auto& s : corpus) out.push_back(join(s));
  return out;
}

MinerCorpus make_miner_corpus(const MinerSpec& spec) {
  if (spec.injected * spec.occurrences > spec.sentences)
    throw std::invalid_argument("synth: more injected occurrences than sentences");
  Rng rng(spec.seed);
  Alphabet alphabet;
  const BaseLanguage lang = BaseLanguage::make(alphabet, spec.base, rng);

  MinerCorpus c;
  for (std::size_t i = 0; i < spec.injected; ++i) c.injected.push_back(alphabet.take(spec.word_len));

  for (const Word& w : c.injected) {
    const auto lefts = distinct(lang.left_chars(), spec.occurrences, rng);
    const auto rights = distinct(lang.right_chars(), spec.occurrences, rng);
    for (std::size_t k = 0; k < spec.occurrences; ++k)
      c.target.push_back(embed_word(lang, w, lefts[k], rights[k], spec.shape, rng));
  }
  while (c.target.size() < spec.sentences) c.target.push_back(base_sentence(lang, spec.shape, rng));
  std::shuffle(c.target.begin(), c.target.end(), rng);

  for (std::size_t i = 0; i < spec.test_sentences; ++i) {
    const Word& w = c.injected[i % c.injected.size()];
    c.test.push_back(embed_word(lang, w, pick_char(lang.left_chars(), rng),
                                pick_char(lang.right_chars(), rng), spec.shape, rng));
  }
  for (std::size_t i = 0; i < spec.source_sentences; ++i)
    c.source.push_back(base_sentence(lang, spec.shape, rng));
  return c;
}

DomainCorpus make_domain_corpus(const DomainSpec& spec) {
  Rng rng(spec.seed);
  Alphabet alphabet;
  const BaseLanguage lang = BaseLanguage::make(alphabet, spec.base, rng);
  const std::u32string tb = alphabet.take(15), tm = alphabet.take(15), te = alphabet.take(15);

  DomainCorpus c;
  // Word (col, row) is tb[col] tm[col + 5 row] te[col + 9 row] (mod 15).
  // Rows 0-1 are frequent, row 2 rare: every character appears in two
  // frequent words and one rare word, and no adjacent character pair is
  // shared between words, so all frequent words have identical n-gram
  // statistics.
  for (std::size_t row = 0; row < 3; ++row) {
    for (std::size_t col = 0; col < 15; ++col) {
      const std::size_t mid = (col + 5 * row) % 15;
      const std::size_t end = (mid + 4 * row) % 15;
      Word w{tb[col], tm[mid], te[end]};
      (row < 2 ? c.frequent : c.rare).push_back(w);
    }
  }

  std::vector<Word> source_only;
  {
    std::set<Word> known(lang.words().begin(), lang.words().end());
    while (source_only.size() < spec.source_words) {
      // B+M+E combination outside the shared lexicon, shaped like a target word.
      Word w{pick_char(lang.b_chars(), rng), pick_char(lang.m_chars(), rng),
             pick_char(lang.e_chars(), rng)};
      if (known.insert(w).second) source_only.push_back(w);
    }
  }

  const auto add_occurrences = [&](const Word& w, std::size_t n,
                                   std::vector<SegmentedSentence>& out) {
    const auto lefts = distinct(lang.left_chars(), n, rng);
    const auto rights = distinct(lang.right_chars(), n, rng);
    for (std::size_t k = 0; k < n; ++k)
      out.push_back(embed_word(lang, w, lefts[k], rights[k], spec.shape, rng));
  };

  for (const Word& w : c.frequent) add_occurrences(w, spec.frequent_occurrences, c.target);
  for (const Word& w : c.rare) add_occurrences(w, spec.rare_occurrences, c.target);
  for (std::size_t i = 0; i < spec.extra_target_sentences; ++i)
    c.target.push_back(base_sentence(lang, spec.shape, rng));
  std::shuffle(c.target.begin(), c.target.end(), rng);

  for (std::size_t i = 0; i < spec.source_sentences; ++i) {
    c.source.push_back(embed_word(lang, source_only[i % source_only.size()],
                                  pick_char(lang.left_chars(), rng),
                                  pick_char(lang.right_chars(), rng), spec.shape, rng));
  }
  std::shuffle(c.source.begin(), c.source.end(), rng);

  for (std::size_t i = 0; i < spec.test_sentences; ++i) {
    const Word& w = i % 2 == 0 ? c.frequent[(i / 2) % c.frequent.size()]
                               : c.rare[(i / 2) % c.rare.size()];
    c.target_test.push_back(embed_word(lang, w, pick_char(lang.left_chars(), rng),
                                       pick_char(lang.right_chars(), rng), spec.shape, rng));
    c.source_test.push_back(embed_word(lang, source_only[i % source_only.size()],
                                       pick_char(lang.left_chars(), rng),
                                       pick_char(lang.right_chars(), rng), spec.shape, rng));
  }
  return c;
}

}  // namespace daat::synth
