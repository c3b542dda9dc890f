// Synthetic corpora for the end-to-end experiments.
//
// The base language is a character-class grammar: every character belongs
// to exactly one of four classes and only ever takes the matching BMES tag
// (B-chars open words, E-chars close them, M-chars sit inside 3-char words,
// S-chars are single-character words). A segmenter trained on it only needs
// character identities, which keeps training cheap; characters it has never
// seen are what make a new domain hard.

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "daat/corpus.h"

namespace daat::synth {

using Rng = std::mt19937_64;

// Hands out fresh CJK ideographs, never repeating one.
class Alphabet {
 public:
  explicit Alphabet(char32_t first = 0x4E00) : next_(first) {}
  std::u32string take(std::size_t n);

 private:
  char32_t next_;
};

struct BaseSpec {
  std::size_t b_chars = 60;
  std::size_t m_chars = 30;
  std::size_t e_chars = 60;
  std::size_t s_chars = 150;
  std::size_t words = 1500;
  double single_share = 0.25;
  double triple_share = 0.15;
};

class BaseLanguage {
 public:
  static BaseLanguage make(Alphabet& alphabet, const BaseSpec& spec, Rng& rng);

  const std::vector<Word>& words() const { return words_; }
  const Word& sample(Rng& rng) const;
  const Word& ending_in(char32_t c, Rng& rng) const;
  const Word& starting_with(char32_t c, Rng& rng) const;
  // Characters that can precede / follow an embedded word.
  const std::u32string& left_chars() const { return left_chars_; }
  const std::u32string& right_chars() const { return right_chars_; }
  const std::u32string& b_chars() const { return b_; }
  const std::u32string& m_chars() const { return m_; }
  const std::u32string& e_chars() const { return e_; }

 private:
  std::vector<Word> words_;
  std::unordered_map<char32_t, std::vector<std::size_t>> by_last_, by_first_;
  std::u32string b_, m_, e_, left_chars_, right_chars_;
};

struct Shape {
  std::size_t min_tokens = 4;
  std::size_t max_tokens = 10;
};

SegmentedSentence base_sentence(const BaseLanguage& lang, const Shape& shape, Rng& rng);
// Base words around `w`, with `left` / `right` as the characters touching it.
SegmentedSentence embed_word(const BaseLanguage& lang, const Word& w, char32_t left,
                             char32_t right, const Shape& shape, Rng& rng);

std::vector<Sentence> raw(const std::vector<SegmentedSentence>& corpus);

// Target corpus with injected domain words for the miner and OOV experiments.
struct MinerSpec {
  std::size_t sentences = 5000;
  std::size_t injected = 30;
  std::size_t word_len = 3;
  std::size_t occurrences = 100;
  std::size_t test_sentences = 400;
  std::size_t source_sentences = 1500;
  Shape shape;
  BaseSpec base;
  std::uint64_t seed = 7;
};

struct MinerCorpus {
  std::vector<Word> injected;
  std::vector<SegmentedSentence> target;  // gold view of the raw target text
  std::vector<SegmentedSentence> test;    // held out, same generator
  std::vector<SegmentedSentence> source;  // base language only
};

// Every injected word gets its own characters, occurs `occurrences` times,
// at most once per sentence, with a distinct left and right neighbour
// character on every occurrence.
MinerCorpus make_miner_corpus(const MinerSpec& spec);

// Two domains over one base language. Target-only words are built from
// target-only B/M/E character classes; the frequent ones clear the miner's
// thresholds, the rare ones occur too seldom to be mined.
struct DomainSpec {
  std::size_t source_sentences = 1200;
  std::size_t frequent_occurrences = 40;
  std::size_t rare_occurrences = 5;
  std::size_t extra_target_sentences = 300;  // base-only target sentences
  std::size_t source_words = 30;  // source-only B+M+E words, one per source sentence
  std::size_t test_sentences = 300;
  Shape shape;
  BaseSpec base;
  std::uint64_t seed = 11;
};

struct DomainCorpus {
  std::vector<Word> frequent;  // 30 words
  std::vector<Word> rare;      // 15 words
  std::vector<SegmentedSentence> source;
  std::vector<SegmentedSentence> target;  // gold view; used raw by the pipeline
  std::vector<SegmentedSentence> source_test;
  std::vector<SegmentedSentence> target_test;
};

DomainCorpus make_domain_corpus(const DomainSpec& spec);

}  // namespace daat::synth
