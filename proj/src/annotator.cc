#include "daat/annotator.h"

#include <algorithm>
#include <fstream>

#include "daat/errors.h"

namespace daat::annotator {

std::vector<Span> forward_max_match(const Sentence& s, const miner::WordCollection& lexicon) {
  std::vector<Span> spans;
  if (lexicon.empty()) return spans;
  const std::size_t n = s.size();
  std::size_t i = 0;
  std::u32string window;
  while (i < n) {
    const std::size_t longest = std::min(lexicon.max_word_len(), n - i);
    std::size_t hit = 0;
    for (std::size_t len = longest; len >= 2; --len) {
      window.assign(s, i, len);
      if (lexicon.contains(window)) {
        hit = len;
        break;
      }
    }
    if (hit) {
      spans.push_back({i, i + hit});
      i += hit;
    } else {
      ++i;
    }
  }
  return spans;
}

namespace {

void append_word_tags(TagSequence& tags, std::size_t len) {
  if (len == 1) {
    tags.push_back(Tag::S);
    return;
  }
  tags.push_back(Tag::B);
  tags.insert(tags.end(), len - 2, Tag::M);
  tags.push_back(Tag::E);
}

void append_gap(AnnotatedSentence& out, const Sentence& s, std::size_t begin, std::size_t end,
                const Tagger& base) {
  if (begin == end) return;
  const Sentence gap = s.substr(begin, end - begin);
  const TagSequence gap_tags = base.tag(gap);
  // Route through the repairing inverse so the fused sequence stays well-formed
  // whatever the segmenter emits.
  for (const Word& w : tags_to_words(gap, gap_tags)) append_word_tags(out.tags, w.size());
  out.provenance.insert(out.provenance.end(), end - begin, CharSource::Segmenter);
}

}  // namespace

AnnotatedSentence distant_annotate(const Sentence& s, const miner::WordCollection& lexicon,
                                   const Tagger& base) {
  if (s.empty()) throw InvalidInput("distant_annotate: empty sentence");
  AnnotatedSentence out;
  out.sentence = s;
  out.tags.reserve(s.size());
  out.provenance.reserve(s.size());
  std::size_t cursor = 0;
  for (const Span& span : forward_max_match(s, lexicon)) {
    append_gap(out, s, cursor, span.begin, base);
    append_word_tags(out.tags, span.end - span.begin);
    out.provenance.insert(out.provenance.end(), span.end - span.begin, CharSource::Lexicon);
    cursor = span.end;
  }
  append_gap(out, s, cursor, s.size(), base);
  return out;
}

std::vector<AnnotatedSentence> annotate_corpus(const std::vector<Sentence>& raw,
                                               const miner::WordCollection& lexicon,
                                               const Tagger& base) {
  std::vector<AnnotatedSentence> out(raw.size());
  const auto n = static_cast<std::ptrdiff_t>(raw.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = distant_annotate(raw[k], lexicon, base);
  }
  return out;
}

LabeledDataset build_target_dataset(const std::vector<Sentence>& raw,
                                    const miner::WordCollection& lexicon, const Tagger& base) {
  if (raw.empty()) throw InvalidInput("build_target_dataset: no raw sentences");
  LabeledDataset ds(Domain::Target);
  for (auto& a : annotate_corpus(raw, lexicon, base)) {
    ds.add(std::move(a.sentence), std::move(a.tags), Provenance::Distant);
  }
  return ds;
}

std::string provenance_string(const AnnotatedSentence& a) {
  std::string s;
  s.reserve(a.provenance.size());
  for (CharSource c : a.provenance) s.push_back(static_cast<char>(c));
  return s;
}

std::filesystem::path provenance_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".prov");
}

void write_distant(const std::filesystem::path& path,
                   const std::vector<AnnotatedSentence>& annotated) {
  std::vector<SegmentedSentence> segs;
  segs.reserve(annotated.size());
  for (const auto& a : annotated) segs.push_back(tags_to_words(a.sentence, a.tags));
  write_segmented(path, segs);

  std::ofstream prov(provenance_path(path), std::ios::binary);
  if (!prov) throw IoError("cannot write " + provenance_path(path).string());
  for (const auto& a : annotated) prov << provenance_string(a) << '\n';
}

}  // namespace daat::annotator
