// Distant annotation: lexicon spans found by forward maximum matching are
// tagged B M* E, the gaps between them are tagged by a source-trained
// segmenter run on each gap alone.

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "daat/corpus.h"
#include "daat/miner.h"

namespace daat::annotator {

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
  bool operator==(const Span&) const = default;
};

enum class CharSource : char { Lexicon = 'L', Segmenter = 'S' };

struct AnnotatedSentence {
  Sentence sentence;
  TagSequence tags;
  std::vector<CharSource> provenance;
};

// Leftmost-longest matching, windows of length >= 2 only.
std::vector<Span> forward_max_match(const Sentence& s, const miner::WordCollection& lexicon);

AnnotatedSentence distant_annotate(const Sentence& s, const miner::WordCollection& lexicon,
                                   const Tagger& base);

// Sentence-parallel; output order follows input order.
std::vector<AnnotatedSentence> annotate_corpus(const std::vector<Sentence>& raw,
                                               const miner::WordCollection& lexicon,
                                               const Tagger& base);

LabeledDataset build_target_dataset(const std::vector<Sentence>& raw,
                                    const miner::WordCollection& lexicon, const Tagger& base);

std::string provenance_string(const AnnotatedSentence& a);

// Writes `path` in segmented-corpus format and `path` + ".prov" with one
// L/S string per line.
void write_distant(const std::filesystem::path& path,
                   const std::vector<AnnotatedSentence>& annotated);

std::filesystem::path provenance_path(const std::filesystem::path& path);

}  // namespace daat::annotator
