#include "daat/corpus.h"

#include <fstream>

#include "daat/errors.h"
#include "daat/utf8.h"

namespace daat {

char tag_char(Tag t) {
  switch (t) {
    case Tag::B: return 'B';
    case Tag::M: return 'M';
    case Tag::E: return 'E';
    case Tag::S: return 'S';
  }
  return '?';
}

Tag tag_from_char(char c) {
  switch (c) {
    case 'B': return Tag::B;
    case 'M': return Tag::M;
    case 'E': return Tag::E;
    case 'S': return Tag::S;
    default: throw InvalidInput(std::string("unknown tag '") + c + "'");
  }
}

std::string tags_to_string(const TagSequence& tags) {
  std::string s;
  s.reserve(tags.size());
  for (Tag t : tags) s.push_back(tag_char(t));
  return s;
}

TagSequence tags_from_string(std::string_view s) {
  TagSequence tags;
  tags.reserve(s.size());
  for (char c : s) tags.push_back(tag_from_char(c));
  return tags;
}

bool is_well_formed(const TagSequence& tags) {
  bool open = false;
  for (Tag t : tags) {
    switch (t) {
      case Tag::S:
      case Tag::B:
        if (open) return false;
        open = t == Tag::B;
        break;
      case Tag::M:
        if (!open) return false;
        break;
      case Tag::E:
        if (!open) return false;
        open = false;
        break;
    }
  }
  return !open;
}

TagSequence words_to_tags(const SegmentedSentence& words) {
  if (words.empty()) throw InvalidInput("words_to_tags: empty segmentation");
  TagSequence tags;
  for (const Word& w : words) {
    if (w.empty()) throw InvalidInput("words_to_tags: empty word");
    if (w.size() == 1) {
      tags.push_back(Tag::S);
      continue;
    }
    tags.push_back(Tag::B);
    tags.insert(tags.end(), w.size() - 2, Tag::M);
    tags.push_back(Tag::E);
  }
  return tags;
}

SegmentedSentence tags_to_words(const Sentence& sentence, const TagSequence& tags) {
  if (sentence.size() != tags.size()) {
    throw InvalidInput("tags_to_words: " + std::to_string(tags.size()) + " tags for " +
                       std::to_string(sentence.size()) + " characters");
  }
  SegmentedSentence words;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const bool starts = i == 0 || tags[i] == Tag::B || tags[i] == Tag::S ||
                        tags[i - 1] == Tag::E || tags[i - 1] == Tag::S;
    if (starts) words.emplace_back();
    words.back().push_back(sentence[i]);
  }
  return words;
}

Sentence join(const SegmentedSentence& words) {
  Sentence s;
  for (const Word& w : words) s += w;
  return s;
}

std::vector<std::size_t> word_boundaries(const SegmentedSentence& words) {
  std::vector<std::size_t> b;
  b.reserve(words.size() + 1);
  std::size_t pos = 0;
  for (const Word& w : words) {
    b.push_back(pos);
    pos += w.size();
  }
  b.push_back(pos);
  return b;
}

std::string_view domain_name(Domain d) {
  return d == Domain::Source ? "source" : "target";
}

void LabeledDataset::add(Sentence sentence, TagSequence tags, Provenance provenance) {
  if (sentence.size() != tags.size()) {
    throw InvalidInput("dataset item has " + std::to_string(tags.size()) + " tags for " +
                       std::to_string(sentence.size()) + " characters");
  }
  items_.push_back({std::move(sentence), std::move(tags), provenance});
}

void LabeledDataset::add(const SegmentedSentence& words, Provenance provenance) {
  add(join(words), words_to_tags(words), provenance);
}

std::vector<SegmentedSentence> LabeledDataset::segmentations() const {
  std::vector<SegmentedSentence> out;
  out.reserve(items_.size());
  for (const auto& item : items_) out.push_back(tags_to_words(item.sentence, item.tags));
  return out;
}

Vocabulary Vocabulary::from_corpus(const std::vector<SegmentedSentence>& corpus) {
  Vocabulary v;
  for (const auto& s : corpus)
    for (const auto& w : s) v.insert(w);
  return v;
}

void Vocabulary::insert(const Word& w) {
  if (w.empty()) throw InvalidInput("vocabulary: empty word");
  words_.insert(w);
}

double oov_rate(const Vocabulary& train, const std::vector<SegmentedSentence>& test) {
  std::size_t total = 0;
  std::size_t oov = 0;
  for (const auto& s : test) {
    for (const auto& w : s) {
      ++total;
      if (!train.contains(w)) ++oov;
    }
  }
  if (total == 0) throw InvalidInput("oov_rate: empty test set");
  return static_cast<double>(oov) / static_cast<double>(total);
}

Sentence parse_raw_line(std::string_view line, std::size_t line_no) {
  Sentence decoded = utf8::decode(line, line_no);
  Sentence out;
  out.reserve(decoded.size());
  for (char32_t c : decoded)
    if (!utf8::is_space(c)) out.push_back(c);
  return out;
}

SegmentedSentence parse_segmented_line(std::string_view line, std::size_t line_no) {
  Sentence decoded = utf8::decode(line, line_no);
  SegmentedSentence words;
  Word current;
  for (char32_t c : decoded) {
    if (c == U' ' || c == U'\r' || c == U'\t') {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

namespace {

template <typename Fn>
void for_each_line(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    fn(line, line_no);
  }
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& l : lines) out << l << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

std::vector<Sentence> load_raw(const std::filesystem::path& path) {
  std::vector<Sentence> out;
  for_each_line(path, [&](const std::string& line, std::size_t no) {
    Sentence s = parse_raw_line(line, no);
    if (!s.empty()) out.push_back(std::move(s));
  });
  return out;
}

std::vector<SegmentedSentence> load_segmented(const std::filesystem::path& path) {
  std::vector<SegmentedSentence> out;
  for_each_line(path, [&](const std::string& line, std::size_t no) {
    SegmentedSentence s = parse_segmented_line(line, no);
    if (!s.empty()) out.push_back(std::move(s));
  });
  return out;
}

std::string format_segmented(const SegmentedSentence& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(' ');
    out += utf8::encode(words[i]);
  }
  return out;
}

void write_segmented(const std::filesystem::path& path,
                     const std::vector<SegmentedSentence>& corpus) {
  std::vector<std::string> lines;
  lines.reserve(corpus.size());
  for (const auto& s : corpus) lines.push_back(format_segmented(s));
  write_lines(path, lines);
}

void write_raw(const std::filesystem::path& path, const std::vector<Sentence>& corpus) {
  std::vector<std::string> lines;
  lines.reserve(corpus.size());
  for (const auto& s : corpus) lines.push_back(utf8::encode(s));
  write_lines(path, lines);
}

}  // namespace daat
