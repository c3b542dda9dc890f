#include "daat/miner.h"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "daat/errors.h"
#include "daat/utf8.h"

namespace daat::miner {

std::u32string default_boundary_chars() {
  std::u32string chars;
  for (char32_t c = 0x21; c <= 0x7E; ++c) {
    const bool alnum = (c >= U'0' && c <= U'9') || (c >= U'A' && c <= U'Z') ||
                       (c >= U'a' && c <= U'z');
    if (!alnum) chars.push_back(c);
  }
  chars += U" \t\r\n　";
  // CJK and full-width punctuation.
  chars += U"，。、；：？！“”‘’（）《》〈〉【】「」『』〔〕…—～·．／＂＇";
  return chars;
}

void MinerConfig::validate() const {
  if (n_min < 2 || n_min > n_max) {
    throw InvalidInput("miner: require 2 <= n_min <= n_max, got n_min=" +
                       std::to_string(n_min) + " n_max=" + std::to_string(n_max));
  }
  if (!(p_val_threshold > 0.0 && p_val_threshold < 1.0)) {
    throw InvalidInput("miner: p_val threshold must lie in (0, 1)");
  }
}

bool MinerConfig::is_boundary(char32_t c) const {
  return utf8::is_space(c) || boundary_chars.find(c) != std::u32string::npos;
}

std::vector<std::u32string> load_stopwords(const std::filesystem::path& path) {
  std::vector<std::u32string> words;
  for (const Sentence& s : load_raw(path)) words.push_back(s);
  return words;
}

void NeighborCounts::add(char32_t c, std::uint64_t n) {
  for (auto& [ch, cnt] : items_) {
    if (ch == c) {
      cnt += n;
      return;
    }
  }
  items_.emplace_back(c, n);
}

std::uint64_t NeighborCounts::total() const {
  std::uint64_t t = 0;
  for (const auto& [c, n] : items_) t += n;
  return t;
}

std::uint64_t NeighborCounts::get(char32_t c) const {
  for (const auto& [ch, n] : items_)
    if (ch == c) return n;
  return 0;
}

void NeighborCounts::sort() { std::sort(items_.begin(), items_.end()); }

bool NeighborCounts::operator==(const NeighborCounts& o) const {
  auto a = items_;
  auto b = o.items_;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

NGramStats::NGramStats(std::size_t n_max) : n_max_(n_max), totals_(n_max + 1, 0) {}

std::uint64_t NGramStats::count(const std::u32string& t) const {
  const NGramEntry* e = find(t);
  return e ? e->count : 0;
}

std::uint64_t NGramStats::doc_freq(const std::u32string& t) const {
  const NGramEntry* e = find(t);
  return e ? e->doc_freq : 0;
}

std::uint64_t NGramStats::total_per_length(std::size_t len) const {
  return len < totals_.size() ? totals_[len] : 0;
}

const NGramEntry* NGramStats::find(const std::u32string& t) const {
  auto it = entries_.find(t);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::pair<std::size_t, std::size_t>> split_runs(const Sentence& s,
                                                            const MinerConfig& cfg) {
  std::vector<bool> blocked(s.size(), false);
  for (std::size_t i = 0; i < s.size(); ++i) blocked[i] = cfg.is_boundary(s[i]);
  for (const auto& sw : cfg.stopwords) {
    if (sw.empty()) continue;
    for (std::size_t pos = s.find(sw); pos != Sentence::npos; pos = s.find(sw, pos + 1)) {
      std::fill(blocked.begin() + static_cast<std::ptrdiff_t>(pos),
                blocked.begin() + static_cast<std::ptrdiff_t>(pos + sw.size()), true);
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t i = 0;
  while (i < s.size()) {
    if (blocked[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && !blocked[j]) ++j;
    runs.emplace_back(i, j);
    i = j;
  }
  return runs;
}

void NGramStats::add_document(const Sentence& s, const MinerConfig& cfg) {
  const auto doc = static_cast<std::int64_t>(num_docs_++);
  for (const auto& [begin, end] : split_runs(s, cfg)) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t max_len = std::min(n_max_, end - i);
      for (std::size_t len = 1; len <= max_len; ++len) {
        NGramEntry& e = entries_[s.substr(i, len)];
        ++e.count;
        ++totals_[len];
        if (e.last_doc != doc) {
          ++e.doc_freq;
          e.last_doc = doc;
        }
        if (i > begin) e.left.add(s[i - 1]);
        if (i + len < end) e.right.add(s[i + len]);
      }
    }
  }
}

void NGramStats::merge(const NGramStats& other) {
  if (other.n_max_ != n_max_) throw InvalidInput("NGramStats::merge: n_max differs");
  num_docs_ += other.num_docs_;
  for (std::size_t len = 0; len < totals_.size(); ++len) totals_[len] += other.totals_[len];
  for (const auto& [key, src] : other.entries_) {
    NGramEntry& dst = entries_[key];
    dst.count += src.count;
    dst.doc_freq += src.doc_freq;
    for (const auto& [c, n] : src.left.items()) dst.left.add(c, n);
    for (const auto& [c, n] : src.right.items()) dst.right.add(c, n);
    dst.last_doc = -1;
  }
}

void NGramStats::finalize() {
  for (auto& [key, e] : entries_) {
    e.left.sort();
    e.right.sort();
    e.last_doc = -1;
  }
}

bool NGramStats::operator==(const NGramStats& o) const {
  if (n_max_ != o.n_max_ || num_docs_ != o.num_docs_ || totals_ != o.totals_ ||
      entries_.size() != o.entries_.size()) {
    return false;
  }
  for (const auto& [key, e] : entries_) {
    const NGramEntry* f = o.find(key);
    if (!f || f->count != e.count || f->doc_freq != e.doc_freq || !(f->left == e.left) ||
        !(f->right == e.right)) {
      return false;
    }
  }
  return true;
}

NGramStats collect_stats_serial(const std::vector<Sentence>& corpus, const MinerConfig& cfg) {
  cfg.validate();
  NGramStats stats(cfg.n_max);
  for (const Sentence& s : corpus) stats.add_document(s, cfg);
  stats.finalize();
  return stats;
}

NGramStats collect_stats(const std::vector<Sentence>& corpus, const MinerConfig& cfg) {
  cfg.validate();
  const auto shards = static_cast<std::size_t>(std::max(1, omp_get_max_threads()));
  if (shards == 1 || corpus.size() < 2 * shards) return collect_stats_serial(corpus, cfg);

  std::vector<NGramStats> partial(shards, NGramStats(cfg.n_max));
  const std::size_t per = (corpus.size() + shards - 1) / shards;
#pragma omp parallel for schedule(static, 1)
  for (std::size_t k = 0; k < shards; ++k) {
    const std::size_t begin = std::min(corpus.size(), k * per);
    const std::size_t end = std::min(corpus.size(), begin + per);
    for (std::size_t i = begin; i < end; ++i) partial[k].add_document(corpus[i], cfg);
  }
  NGramStats stats = std::move(partial[0]);
  for (std::size_t k = 1; k < shards; ++k) stats.merge(partial[k]);
  stats.finalize();
  return stats;
}

double probability(const std::u32string& t, const NGramStats& stats) {
  const std::uint64_t total = stats.total_per_length(t.size());
  const std::uint64_t c = stats.count(t);
  if (c == 0 || total == 0) {
    throw UndefinedProbability("no counts for n-gram \"" + utf8::encode(t) + "\"");
  }
  return static_cast<double>(c) / static_cast<double>(total);
}

double mutual_information_score(const std::u32string& t, const NGramStats& stats) {
  if (t.size() < 2) throw InvalidInput("MIS needs at least two characters");
  const double joint = probability(t, stats);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < t.size(); ++j) {
    const double denom = probability(t.substr(0, j), stats) * probability(t.substr(j), stats);
    best = std::min(best, joint / denom);
  }
  return best;
}

namespace {

double side_entropy(const NeighborCounts& n) {
  const double total = static_cast<double>(n.total());
  if (total == 0) return 0.0;
  double h = 0.0;
  for (const auto& [c, cnt] : n.items()) {
    const double p = static_cast<double>(cnt) / total;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace

double entropy_score(const std::u32string& t, const NGramStats& stats) {
  const NGramEntry* e = stats.find(t);
  if (!e) return 0.0;
  // Guard against -0.0 from a single-neighbour side.
  return std::max(0.0, std::min(side_entropy(e->left), side_entropy(e->right)));
}

double tfidf_score(const std::u32string& t, const NGramStats& stats) {
  const NGramEntry* e = stats.find(t);
  if (!e || e->doc_freq == 0) {
    throw UndefinedProbability("document frequency is zero for \"" + utf8::encode(t) + "\"");
  }
  const double tf = probability(t, stats);
  const double idf =
      std::log(static_cast<double>(stats.num_docs()) / static_cast<double>(e->doc_freq));
  return tf * idf;
}

double ScoreRange::normalize(double x) const {
  if (!(max > min)) return 0.0;
  return (x - min) / (max - min);
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double combine_scores(double norm_mis, double norm_es, double norm_tfidf) {
  return sigmoid(norm_mis + norm_es + norm_tfidf);
}

namespace {

std::vector<CandidateScore> candidate_texts(const NGramStats& stats, const MinerConfig& cfg) {
  std::vector<CandidateScore> out;
  for (const auto& [key, e] : stats.entries()) {
    if (key.size() < cfg.n_min || key.size() > cfg.n_max) continue;
    if (e.count <= cfg.min_frequency) continue;
    CandidateScore c;
    c.text = key;
    c.frequency = e.count;
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(),
            [](const CandidateScore& a, const CandidateScore& b) { return a.text < b.text; });
  return out;
}

void raw_scores(const NGramStats& stats, CandidateScore& c) {
  c.mis = mutual_information_score(c.text, stats);
  c.es = entropy_score(c.text, stats);
  c.tfidf = tfidf_score(c.text, stats);
}

void normalize_and_combine(std::vector<CandidateScore>& cands) {
  if (cands.empty()) return;
  ScoreRange mis{cands[0].mis, cands[0].mis};
  ScoreRange es{cands[0].es, cands[0].es};
  ScoreRange tfidf{cands[0].tfidf, cands[0].tfidf};
  for (const auto& c : cands) {
    mis.min = std::min(mis.min, c.mis);
    mis.max = std::max(mis.max, c.mis);
    es.min = std::min(es.min, c.es);
    es.max = std::max(es.max, c.es);
    tfidf.min = std::min(tfidf.min, c.tfidf);
    tfidf.max = std::max(tfidf.max, c.tfidf);
  }
  for (auto& c : cands) {
    c.p_val = combine_scores(mis.normalize(c.mis), es.normalize(c.es), tfidf.normalize(c.tfidf));
  }
}

}  // namespace

std::vector<CandidateScore> score_candidates_serial(const NGramStats& stats,
                                                    const MinerConfig& cfg) {
  cfg.validate();
  auto cands = candidate_texts(stats, cfg);
  for (auto& c : cands) raw_scores(stats, c);
  normalize_and_combine(cands);
  return cands;
}

std::vector<CandidateScore> score_candidates(const NGramStats& stats, const MinerConfig& cfg) {
  cfg.validate();
  auto cands = candidate_texts(stats, cfg);
  const auto n = static_cast<std::ptrdiff_t>(cands.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) raw_scores(stats, cands[static_cast<std::size_t>(i)]);
  normalize_and_combine(cands);
  return cands;
}

void WordCollection::insert(CandidateScore score) {
  if (score.text.empty()) throw InvalidInput("word collection: empty word");
  max_word_len_ = std::max(max_word_len_, score.text.size());
  auto key = score.text;
  entries_[std::move(key)] = std::move(score);
}

const CandidateScore* WordCollection::find(const std::u32string& w) const {
  auto it = entries_.find(w);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<const CandidateScore*> WordCollection::sorted() const {
  std::vector<const CandidateScore*> out;
  out.reserve(entries_.size());
  for (const auto& [k, v] : entries_) out.push_back(&v);
  std::sort(out.begin(), out.end(), [](const CandidateScore* a, const CandidateScore* b) {
    if (a->p_val != b->p_val) return a->p_val > b->p_val;
    if (a->frequency != b->frequency) return a->frequency > b->frequency;
    return a->text < b->text;
  });
  return out;
}

WordCollection select_words(const std::vector<CandidateScore>& scored, const MinerConfig& cfg) {
  WordCollection words;
  for (const auto& c : scored) {
    if (c.p_val >= cfg.p_val_threshold && c.frequency > cfg.min_frequency) words.insert(c);
  }
  return words;
}

WordCollection mine(const std::vector<Sentence>& corpus, const MinerConfig& cfg) {
  if (corpus.empty()) throw InvalidInput("mine: empty corpus");
  const NGramStats stats = collect_stats(corpus, cfg);
  return select_words(score_candidates(stats, cfg), cfg);
}

std::string format_lexicon(const WordCollection& words) {
  std::string out;
  char buf[160];
  for (const CandidateScore* c : words.sorted()) {
    std::snprintf(buf, sizeof(buf), "\t%llu\t%.6g\t%.6g\t%.6g\t%.6g\n",
                  static_cast<unsigned long long>(c->frequency), c->mis, c->es, c->tfidf,
                  c->p_val);
    out += utf8::encode(c->text);
    out += buf;
  }
  return out;
}

void write_lexicon(const std::filesystem::path& path, const WordCollection& words) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << format_lexicon(words);
  if (!out) throw IoError("write failed: " + path.string());
}

WordCollection parse_lexicon(std::istream& in) {
  WordCollection words;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, '\t')) fields.push_back(f);
    if (fields.size() != 6) {
      throw FormatError("lexicon line " + std::to_string(line_no) + ": expected 6 fields, got " +
                        std::to_string(fields.size()));
    }
    CandidateScore c;
    c.text = utf8::decode(fields[0], line_no);
    try {
      c.frequency = std::stoull(fields[1]);
      c.mis = std::stod(fields[2]);
      c.es = std::stod(fields[3]);
      c.tfidf = std::stod(fields[4]);
      c.p_val = std::stod(fields[5]);
    } catch (const std::exception&) {
      throw FormatError("lexicon line " + std::to_string(line_no) + ": bad number");
    }
    if (c.text.empty()) throw FormatError("lexicon line " + std::to_string(line_no) + ": empty word");
    words.insert(std::move(c));
  }
  return words;
}

WordCollection read_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_lexicon(in);
}

}  // namespace daat::miner
