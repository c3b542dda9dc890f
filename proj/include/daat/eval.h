// Span-exact word-level precision, recall and F1, micro-averaged.

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "daat/corpus.h"

namespace daat::eval {

struct Counts {
  std::size_t gold = 0;
  std::size_t pred = 0;
  std::size_t correct = 0;

  Counts& operator+=(const Counts& o);
  bool operator==(const Counts&) const = default;
};

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double oov_rate = 0.0;
  std::size_t gold = 0;
  std::size_t pred = 0;
  std::size_t correct = 0;
};

// Throws AlignmentError naming `index` when the two segmentations spell
// different character strings.
Counts count_sentence(const SegmentedSentence& gold, const SegmentedSentence& pred,
                      std::size_t index);

EvalReport from_counts(const Counts& c);

// oov_rate is left at 0; use the overload with a vocabulary to fill it.
EvalReport prf(const std::vector<SegmentedSentence>& gold,
               const std::vector<SegmentedSentence>& pred);
EvalReport prf(const std::vector<SegmentedSentence>& gold,
               const std::vector<SegmentedSentence>& pred, const Vocabulary& train);

std::string to_json(const EvalReport& r);
void report(const EvalReport& r, const std::filesystem::path& path);
std::string format_table(const EvalReport& r);

}  // namespace daat::eval
