// Sentences, the BMES tag scheme, datasets and OOV accounting.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace daat {

// A sentence is a sequence of unicode scalar values without whitespace.
using Sentence = std::u32string;
using Word = std::u32string;
using SegmentedSentence = std::vector<Word>;

enum class Tag : std::uint8_t { B = 0, M = 1, E = 2, S = 3 };
inline constexpr std::size_t kNumTags = 4;

using TagSequence = std::vector<Tag>;

char tag_char(Tag t);
Tag tag_from_char(char c);
std::string tags_to_string(const TagSequence& tags);
TagSequence tags_from_string(std::string_view s);

// Matches (S | B M* E)*.
bool is_well_formed(const TagSequence& tags);

TagSequence words_to_tags(const SegmentedSentence& words);

// Greedy repair for ill-formed input: a new word starts at every B or S and
// at any M/E that follows a closed word (E or S) or the sentence start.
SegmentedSentence tags_to_words(const Sentence& sentence, const TagSequence& tags);

Sentence join(const SegmentedSentence& words);

// Start offsets of each word plus the total length as the final element.
std::vector<std::size_t> word_boundaries(const SegmentedSentence& words);

enum class Domain { Source, Target };
enum class Provenance { Gold, Distant };

std::string_view domain_name(Domain d);

struct LabeledItem {
  Sentence sentence;
  TagSequence tags;
  Provenance provenance = Provenance::Gold;
};

class LabeledDataset {
 public:
  explicit LabeledDataset(Domain domain) : domain_(domain) {}

  // Throws InvalidInput when the tag count differs from the sentence length.
  void add(Sentence sentence, TagSequence tags, Provenance provenance);
  void add(const SegmentedSentence& words, Provenance provenance);

  Domain domain() const { return domain_; }
  const std::vector<LabeledItem>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const LabeledItem& operator[](std::size_t i) const { return items_[i]; }

  std::vector<SegmentedSentence> segmentations() const;

 private:
  Domain domain_;
  std::vector<LabeledItem> items_;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  static Vocabulary from_corpus(const std::vector<SegmentedSentence>& corpus);

  void insert(const Word& w);
  bool contains(const Word& w) const { return words_.count(w) != 0; }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<Word> words_;
};

// Token-level OOV rate. Throws InvalidInput on an empty test set.
double oov_rate(const Vocabulary& train, const std::vector<SegmentedSentence>& test);

// Sentences that taggers consume; anything else that needs per-character
// tags can implement this.
class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual TagSequence tag(const Sentence& sentence) const = 0;
};

// Line parsers, exposed for tests. `line_no` is 1-based and only used in
// error messages.
Sentence parse_raw_line(std::string_view line, std::size_t line_no);
SegmentedSentence parse_segmented_line(std::string_view line, std::size_t line_no);

std::vector<Sentence> load_raw(const std::filesystem::path& path);
std::vector<SegmentedSentence> load_segmented(const std::filesystem::path& path);

std::string format_segmented(const SegmentedSentence& words);
void write_segmented(const std::filesystem::path& path,
                     const std::vector<SegmentedSentence>& corpus);
void write_raw(const std::filesystem::path& path, const std::vector<Sentence>& corpus);

}  // namespace daat
