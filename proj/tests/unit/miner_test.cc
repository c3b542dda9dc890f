#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "daat/errors.h"
#include "daat/miner.h"
#include "doctest.h"
#include "oracles.h"
#include "synth.h"

using namespace daat;
using namespace daat::miner;

namespace {

std::vector<Sentence> repeat(const Sentence& s, std::size_t n) { return std::vector<Sentence>(n, s); }

// Sentences over a tiny alphabet with the odd comma, about 6 kB in UTF-8.
std::vector<Sentence> small_corpus(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::u32string alphabet = U"甲乙丙丁戊己庚辛";
  std::vector<Sentence> out;
  for (int i = 0; i < 150; ++i) {
    Sentence s;
    const int n = 4 + rng() % 12;
    for (int k = 0; k < n; ++k) s.push_back(rng() % 13 == 0 ? U'，' : alphabet[rng() % alphabet.size()]);
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("collect_stats examples") {
  MinerConfig cfg;
  cfg.n_max = 2;
  const auto st = collect_stats(repeat(U"xy", 10), cfg);
  CHECK(st.count(U"xy") == 10);
  CHECK(st.total_per_length(2) == 10);
  CHECK(st.count(U"x") == 10);
  CHECK(st.total_per_length(1) == 20);

  const auto comma = collect_stats({U"a,b"}, cfg);
  CHECK(comma.total_per_length(2) == 0);

  const auto ctx = collect_stats({U"axyb", U"cxyd"}, cfg);
  const auto* e = ctx.find(U"xy");
  REQUIRE(e);
  CHECK(e->left.get(U'a') == 1);
  CHECK(e->left.get(U'c') == 1);
  CHECK(e->left.total() == 2);
}

TEST_CASE("MIS examples") {
  MinerConfig cfg;
  CHECK(mutual_information_score(U"xy", collect_stats(repeat(U"xy", 10), cfg)) == 4.0);
  std::vector<Sentence> c = repeat(U"xy", 5);
  for (int i = 0; i < 5; ++i) c.push_back(U"xz");
  const auto st = collect_stats(c, cfg);
  CHECK(mutual_information_score(U"xy", st) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK_THROWS_AS(mutual_information_score(U"qq", st), UndefinedProbability);
}

TEST_CASE("ES examples") {
  MinerConfig cfg;
  cfg.n_max = 2;
  const auto st = collect_stats({U"axyb", U"cxyd"}, cfg);
  CHECK(entropy_score(U"xy", st) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  const auto four = collect_stats({U"axyx", U"bxyy", U"cxyx", U"dxyy"}, cfg);
  CHECK(entropy_score(U"xy", four) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  const auto one = collect_stats({U"axyb", U"axyd"}, cfg);
  CHECK(entropy_score(U"xy", one) == 0.0);
}

TEST_CASE("tfidf examples") {
  MinerConfig cfg;
  CHECK(tfidf_score(U"xy", collect_stats(repeat(U"xy", 4), cfg)) == 0.0);
  // 10 docs, "ab" once among 50 bigram occurrences: tf 0.02, idf ln 10.
  std::vector<Sentence> c{U"abcdef"};
  for (int i = 0; i < 9; ++i) c.push_back(U"uvwxyz");
  const auto st = collect_stats(c, cfg);
  REQUIRE(st.total_per_length(2) == 50);
  CHECK(tfidf_score(U"ab", st) == doctest::Approx(0.02 * std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("p_val bounds and two-candidate example") {
  CHECK(combine_scores(1, 1, 1) == doctest::Approx(0.9525741268224334).epsilon(1e-15));
  CHECK(combine_scores(0, 0, 0) == 0.5);
  CHECK(ScoreRange{2.0, 2.0}.normalize(2.0) == 0.0);

  MinerConfig cfg;
  cfg.min_frequency = 0;
  cfg.n_max = 2;
  std::vector<Sentence> c;
  for (int i = 0; i < 4; ++i) c.push_back(U"xy");
  c.push_back(U"axyb");
  c.push_back(U"cxyd");
  c.push_back(U"pq");
  const auto scored = score_candidates(collect_stats(c, cfg), cfg);
  const auto oracle = oracle::score_all(oracle::substring_stats(c, cfg), cfg);
  REQUIRE(scored.size() == oracle.size());
  for (const auto& s : scored) {
    const auto& o = oracle.at(s.text);
    int maxima = 0;
    auto is_max = [&](double oracle::OracleScore::*f) {
      for (const auto& kv : oracle)
        if (kv.second.*f > o.*f) return false;
      return true;
    };
    auto is_min = [&](double oracle::OracleScore::*f) {
      for (const auto& kv : oracle)
        if (kv.second.*f < o.*f) return false;
      return true;
    };
    // Scores are either extreme or in between; the all-extreme case is exact.
    const auto fields = {&oracle::OracleScore::mis, &oracle::OracleScore::es,
                         &oracle::OracleScore::tfidf};
    bool extreme = true;
    for (auto f : fields) {
      maxima += is_max(f);
      extreme = extreme && (is_max(f) || is_min(f));
    }
    if (extreme) CHECK(s.p_val == doctest::Approx(sigmoid(maxima)).epsilon(1e-12));
    CHECK(s.p_val >= 0.5);
    CHECK(s.p_val <= sigmoid(3.0) + 1e-15);
  }
}

TEST_CASE("scores agree with the substring-enumeration oracle") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    MinerConfig cfg;
    cfg.n_max = 4;
    cfg.min_frequency = 2;
    const auto corpus = small_corpus(seed);
    const auto st = collect_stats(corpus, cfg);
    const auto ost = oracle::substring_stats(corpus, cfg);
    for (const auto& [t, n] : ost.count) {
      CHECK(st.count(t) == n);
      CHECK(st.doc_freq(t) == ost.docs.at(t).size());
    }
    CHECK(st.entries().size() == ost.count.size());
    for (std::size_t len = 1; len <= 4; ++len)
      CHECK(st.total_per_length(len) == ost.total_per_length.at(len));

    const auto scored = score_candidates(st, cfg);
    const auto expect = oracle::score_all(ost, cfg);
    REQUIRE(scored.size() == expect.size());
    for (const auto& s : scored) {
      const auto& o = expect.at(s.text);
      CHECK(std::abs(s.mis - o.mis) <= 1e-9 * std::max(1.0, std::abs(o.mis)));
      CHECK(std::abs(s.es - o.es) <= 1e-9);
      CHECK(std::abs(s.tfidf - o.tfidf) <= 1e-9);
      CHECK(std::abs(s.p_val - o.p_val) <= 1e-9);
      CHECK(s.es >= 0.0);
      CHECK(s.frequency >= 1);
    }
  }
}

TEST_CASE("stats invariants and permutation invariance") {
  MinerConfig cfg;
  cfg.min_frequency = 3;
  auto corpus = small_corpus(9);
  const auto st = collect_stats(corpus, cfg);
  for (const auto& [t, e] : st.entries()) {
    CHECK(t.size() >= 1);
    CHECK(t.size() <= cfg.n_max);
    CHECK(e.left.total() <= e.count);
    CHECK(e.right.total() <= e.count);
    CHECK(e.doc_freq <= st.num_docs());
  }
  const auto before = mine(corpus, cfg);
  std::mt19937_64 rng(4);
  std::shuffle(corpus.begin(), corpus.end(), rng);
  const auto after = mine(corpus, cfg);
  CHECK(collect_stats(corpus, cfg) == st);
  CHECK(format_lexicon(after) == format_lexicon(before));
}

TEST_CASE("parallel and serial collection agree") {
  MinerConfig cfg;
  const auto corpus = small_corpus(11);
  CHECK(collect_stats(corpus, cfg) == collect_stats_serial(corpus, cfg));
  const auto st = collect_stats(corpus, cfg);
  cfg.min_frequency = 2;
  const auto a = score_candidates(st, cfg), b = score_candidates_serial(st, cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].text == b[i].text);
    CHECK(a[i].p_val == b[i].p_val);
  }
}

TEST_CASE("select_words filters and ordering") {
  MinerConfig cfg;
  // Every bigram occurs at most 10 times.
  CHECK(mine(repeat(U"abcdef", 10), cfg).empty());

  synth::Rng rng(1);
  synth::Alphabet alphabet;
  const auto lang = synth::BaseLanguage::make(alphabet, {}, rng);
  const Word w = U"qzj";
  std::vector<Sentence> c;
  for (int i = 0; i < 200; ++i) {
    c.push_back(join(synth::embed_word(lang, w, lang.left_chars()[i % lang.left_chars().size()],
                                       lang.right_chars()[(i * 7) % lang.right_chars().size()],
                                       {}, rng)));
  }
  // A word in every document has idf 0, so it needs base-only company.
  for (int i = 0; i < 200; ++i) c.push_back(join(synth::base_sentence(lang, {}, rng)));
  const auto found = mine(c, cfg);
  CHECK(found.contains(w));
  std::size_t longest = 0;
  for (const auto& [t, s] : found.entries()) {
    CHECK(s.p_val >= cfg.p_val_threshold);
    CHECK(s.frequency > cfg.min_frequency);
    longest = std::max(longest, t.size());
  }
  CHECK(found.max_word_len() == longest);
  const auto sorted = found.sorted();
  for (std::size_t i = 1; i < sorted.size(); ++i) CHECK(sorted[i - 1]->p_val >= sorted[i]->p_val);
}

TEST_CASE("config validation and lexicon io") {
  MinerConfig cfg;
  cfg.n_min = 1;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg.n_min = 3;
  cfg.n_max = 2;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg = {};
  cfg.p_val_threshold = 1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);

  MinerConfig ok;
  ok.min_frequency = 2;
  const auto lex = mine(small_corpus(2), ok);
  std::istringstream in(format_lexicon(lex));
  const auto back = parse_lexicon(in);
  CHECK(back.size() == lex.size());
  for (const auto& [t, s] : lex.entries()) CHECK(back.contains(t));
  std::istringstream bad("abc\tnot-a-number\n");
  CHECK_THROWS_AS(parse_lexicon(bad), FormatError);
}

TEST_CASE("stopwords split runs") {
  MinerConfig cfg;
  cfg.stopwords = {U"的"};
  const auto runs = split_runs(U"ab的cd", cfg);
  REQUIRE(runs.size() == 2);
  CHECK(runs[0] == std::pair<std::size_t, std::size_t>{0, 2});
  CHECK(runs[1] == std::pair<std::size_t, std::size_t>{3, 5});
}
