// Unsupervised discovery of domain-specific words from raw target text.
//
// Every character n-gram inside a run (a maximal span free of boundary
// characters and stop-words) is counted. Candidates are scored by
//   MIS   - minimum over binary splits of p(t) / (p(left) p(right))
//   ES    - minimum of left/right neighbour entropies (nats)
//   tfidf - corpus-level tf times ln(num_docs / doc_freq)
// and p_val = sigmoid(N[MIS] + N[ES] + N[tfidf]) with max-min normalisation
// over the candidate set. p(x) = count(x) / total occurrences of length |x|.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "daat/corpus.h"

namespace daat::miner {

std::u32string default_boundary_chars();

struct MinerConfig {
  std::size_t n_min = 2;
  std::size_t n_max = 6;
  double p_val_threshold = 0.95;
  std::uint64_t min_frequency = 10;  // strict: frequency > min_frequency
  std::vector<std::u32string> stopwords;
  std::u32string boundary_chars = default_boundary_chars();

  void validate() const;
  bool is_boundary(char32_t c) const;
};

std::vector<std::u32string> load_stopwords(const std::filesystem::path& path);

// Neighbour histogram kept sorted by character once stats are finalised.
class NeighborCounts {
 public:
  void add(char32_t c, std::uint64_t n = 1);
  std::uint64_t total() const;
  std::uint64_t get(char32_t c) const;
  const std::vector<std::pair<char32_t, std::uint64_t>>& items() const { return items_; }
  void sort();
  bool operator==(const NeighborCounts& o) const;

 private:
  std::vector<std::pair<char32_t, std::uint64_t>> items_;
};

struct NGramEntry {
  std::uint64_t count = 0;
  std::uint64_t doc_freq = 0;
  NeighborCounts left;
  NeighborCounts right;
  std::int64_t last_doc = -1;  // collection bookkeeping, not part of the stats
};

class NGramStats {
 public:
  explicit NGramStats(std::size_t n_max = 6);

  std::size_t n_max() const { return n_max_; }
  std::uint64_t num_docs() const { return num_docs_; }
  std::uint64_t count(const std::u32string& t) const;
  std::uint64_t doc_freq(const std::u32string& t) const;
  std::uint64_t total_per_length(std::size_t len) const;
  const NGramEntry* find(const std::u32string& t) const;
  const std::unordered_map<std::u32string, NGramEntry>& entries() const { return entries_; }

  // Records one sentence as one document.
  void add_document(const Sentence& s, const MinerConfig& cfg);

  // Pointwise addition. Documents of the two operands must be disjoint.
  void merge(const NGramStats& other);

  // Sorts neighbour lists so iteration order no longer depends on the
  // insertion or merge order.
  void finalize();

  bool operator==(const NGramStats& o) const;

 private:
  std::size_t n_max_;
  std::uint64_t num_docs_ = 0;
  std::vector<std::uint64_t> totals_;  // index = length
  std::unordered_map<std::u32string, NGramEntry> entries_;
};

// [begin, end) spans of the sentence left after removing boundary
// characters and stop-word occurrences.
std::vector<std::pair<std::size_t, std::size_t>> split_runs(const Sentence& s,
                                                            const MinerConfig& cfg);

// Sharded over OpenMP threads, merged in shard order.
NGramStats collect_stats(const std::vector<Sentence>& corpus, const MinerConfig& cfg);
// Single-pass reference.
NGramStats collect_stats_serial(const std::vector<Sentence>& corpus, const MinerConfig& cfg);

double probability(const std::u32string& t, const NGramStats& stats);
double mutual_information_score(const std::u32string& t, const NGramStats& stats);
double entropy_score(const std::u32string& t, const NGramStats& stats);
double tfidf_score(const std::u32string& t, const NGramStats& stats);

struct CandidateScore {
  std::u32string text;
  std::uint64_t frequency = 0;
  double mis = 0;
  double es = 0;
  double tfidf = 0;
  double p_val = 0;
};

struct ScoreRange {
  double min = 0;
  double max = 0;
  // Constant ranges normalise to 0.
  double normalize(double x) const;
};

double sigmoid(double x);
double combine_scores(double norm_mis, double norm_es, double norm_tfidf);

std::vector<CandidateScore> score_candidates(const NGramStats& stats, const MinerConfig& cfg);
std::vector<CandidateScore> score_candidates_serial(const NGramStats& stats,
                                                    const MinerConfig& cfg);

class WordCollection {
 public:
  void insert(CandidateScore score);
  bool contains(const std::u32string& w) const { return entries_.count(w) != 0; }
  const CandidateScore* find(const std::u32string& w) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t max_word_len() const { return max_word_len_; }
  const std::unordered_map<std::u32string, CandidateScore>& entries() const { return entries_; }

  // Descending p_val, then descending frequency, then codepoint order.
  std::vector<const CandidateScore*> sorted() const;

 private:
  std::unordered_map<std::u32string, CandidateScore> entries_;
  std::size_t max_word_len_ = 0;
};

WordCollection mine(const std::vector<Sentence>& corpus, const MinerConfig& cfg);
WordCollection select_words(const std::vector<CandidateScore>& scored, const MinerConfig& cfg);

// TSV: word, frequency, mis, es, tfidf, p_val (6 significant digits).
std::string format_lexicon(const WordCollection& words);
void write_lexicon(const std::filesystem::path& path, const WordCollection& words);
WordCollection read_lexicon(const std::filesystem::path& path);
WordCollection parse_lexicon(std::istream& in);

}  // namespace daat::miner
