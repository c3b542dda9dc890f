#include <filesystem>
#include <fstream>
#include <random>

#include "daat/corpus.h"
#include "daat/errors.h"
#include "daat/utf8.h"
#include "doctest.h"
#include "oracles.h"

using namespace daat;

namespace {

SegmentedSentence words(std::initializer_list<const char*> ws) {
  SegmentedSentence out;
  for (const char* w : ws) out.push_back(utf8::decode(w));
  return out;
}

TagSequence tags(const char* s) { return tags_from_string(s); }

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  auto p = std::filesystem::temp_directory_path() / ("daat_corpus_" + name);
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

}  // namespace

TEST_CASE("words_to_tags") {
  CHECK(tags_to_string(words_to_tags(words({"的", "科学", "研究"}))) == "SBEBE");
  CHECK(tags_to_string(words_to_tags(words({"溶酶菌"}))) == "BME");
  CHECK(tags_to_string(words_to_tags(words({"a"}))) == "S");
  CHECK_THROWS_AS(words_to_tags(SegmentedSentence{U"a", U""}), InvalidInput);
}

TEST_CASE("tags_to_words on well-formed and repaired input") {
  CHECK(tags_to_words(U"abcde", tags("SBEBE")) == SegmentedSentence{U"a", U"bc", U"de"});
  CHECK(tags_to_words(U"abc", tags("BME")) == SegmentedSentence{U"abc"});
  CHECK(tags_to_words(U"ab", tags("ME")) == oracle::repair(U"ab", tags("ME")));
  CHECK(tags_to_words(U"ab", tags("ME")) == SegmentedSentence{U"ab"});
  CHECK_THROWS_AS(tags_to_words(U"ab", tags("S")), InvalidInput);
}

TEST_CASE("is_well_formed") {
  CHECK(is_well_formed(tags("")));
  CHECK(is_well_formed(tags("SBMMESBE")));
  CHECK_FALSE(is_well_formed(tags("B")));
  CHECK_FALSE(is_well_formed(tags("ME")));
  CHECK_FALSE(is_well_formed(tags("BS")));
  CHECK_FALSE(is_well_formed(tags("SE")));
}

TEST_CASE("random segmentations roundtrip through tags") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    SegmentedSentence seg;
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    for (int i = 0; i < n; ++i) {
      Word w;
      const int len = std::uniform_int_distribution<int>(1, 4)(rng);
      for (int k = 0; k < len; ++k) w.push_back(0x4E00 + rng() % 50);
      seg.push_back(w);
    }
    const TagSequence t = words_to_tags(seg);
    REQUIRE(is_well_formed(t));
    CHECK(tags_to_words(join(seg), t) == seg);
  }
}

TEST_CASE("repair matches the state-machine oracle and preserves text") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng() % 10;
    Sentence s;
    TagSequence t;
    for (std::size_t i = 0; i < n; ++i) {
      s.push_back(U'a' + rng() % 26);
      t.push_back(static_cast<Tag>(rng() % 4));
    }
    const auto out = tags_to_words(s, t);
    CHECK(out == oracle::repair(s, t));
    CHECK(join(out) == s);
    CHECK(is_well_formed(words_to_tags(out)));
    if (is_well_formed(t)) CHECK(words_to_tags(out) == t);
  }
}

TEST_CASE("line parsing") {
  CHECK(parse_segmented_line("的 科学 研究", 1) == words({"的", "科学", "研究"}));
  CHECK(parse_segmented_line(" a  b ", 1) == SegmentedSentence{U"a", U"b"});
  CHECK(parse_segmented_line("", 1).empty());
  CHECK(parse_raw_line("a b\tc", 1) == U"abc");
  CHECK_THROWS_AS(parse_segmented_line("\xff", 7), DecodeError);
  try {
    parse_segmented_line("ok \xc3", 7);
    FAIL("expected DecodeError");
  } catch (const DecodeError& e) {
    CHECK(e.line() == 7);
  }
}

TEST_CASE("segmented files skip empty lines and roundtrip") {
  const auto p = temp_file("seg.txt", "的 科学 研究\n\n a  b \n");
  const auto corpus = load_segmented(p);
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[1] == SegmentedSentence{U"a", U"b"});
  const auto q = std::filesystem::temp_directory_path() / "daat_corpus_out.txt";
  write_segmented(q, corpus);
  CHECK(load_segmented(q) == corpus);
  CHECK_THROWS_AS(load_segmented("/nonexistent/daat/file"), IoError);
}

TEST_CASE("oov_rate") {
  Vocabulary v;
  v.insert(U"a");
  v.insert(U"bc");
  CHECK(oov_rate(v, {{U"a", U"bc", U"d"}}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(oov_rate(v, {{U"a", U"bc"}}) == 0.0);
  CHECK(oov_rate(Vocabulary{}, {{U"x", U"yz"}}) == 1.0);
  CHECK_THROWS_AS(oov_rate(v, {}), InvalidInput);
  CHECK_THROWS_AS(v.insert(U""), InvalidInput);
}

TEST_CASE("labeled dataset rejects length mismatch") {
  LabeledDataset ds(Domain::Source);
  CHECK_THROWS_AS(ds.add(U"abc", tags("BE"), Provenance::Gold), InvalidInput);
  ds.add(words({"ab", "c"}), Provenance::Gold);
  CHECK(ds.size() == 1);
  CHECK(tags_to_string(ds[0].tags) == "BES");
}

TEST_CASE("utf8 decoding") {
  CHECK(utf8::decode("a\xe4\xb8\x80") == U"a一");
  CHECK(utf8::encode(U"a一") == "a\xe4\xb8\x80");
  CHECK_THROWS_AS(utf8::decode("\xc0\x80"), DecodeError);
  CHECK_THROWS_AS(utf8::decode("\xed\xa0\x80"), DecodeError);
}
