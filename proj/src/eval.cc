#include "daat/eval.h"

#include <cstdio>
#include <fstream>

#include "daat/errors.h"

namespace daat::eval {

Counts& Counts::operator+=(const Counts& o) {
  gold += o.gold;
  pred += o.pred;
  correct += o.correct;
  return *this;
}

Counts count_sentence(const SegmentedSentence& gold, const SegmentedSentence& pred,
                      std::size_t index) {
  if (join(gold) != join(pred)) throw AlignmentError("gold and predicted text differ", index);
  Counts c{gold.size(), pred.size(), 0};
  // Both boundary lists are sorted; a word matches when its start and end
  // both coincide with a gold word's.
  std::size_t gi = 0, pi = 0, gpos = 0, ppos = 0;
  while (gi < gold.size() && pi < pred.size()) {
    const std::size_t gend = gpos + gold[gi].size();
    const std::size_t pend = ppos + pred[pi].size();
    if (gpos == ppos && gend == pend) ++c.correct;
    if (gend <= pend) {
      gpos = gend;
      ++gi;
    }
    if (pend <= gend) {
      ppos = pend;
      ++pi;
    }
  }
  return c;
}

EvalReport from_counts(const Counts& c) {
  EvalReport r;
  r.gold = c.gold;
  r.pred = c.pred;
  r.correct = c.correct;
  r.precision = c.pred ? static_cast<double>(c.correct) / static_cast<double>(c.pred) : 0.0;
  r.recall = c.gold ? static_cast<double>(c.correct) / static_cast<double>(c.gold) : 0.0;
  const double s = r.precision + r.recall;
  r.f1 = s > 0.0 ? 2.0 * r.precision * r.recall / s : 0.0;
  return r;
}

EvalReport prf(const std::vector<SegmentedSentence>& gold,
               const std::vector<SegmentedSentence>& pred) {
  if (gold.size() != pred.size()) {
    throw AlignmentError("gold has " + std::to_string(gold.size()) + " sentences, prediction " +
                             std::to_string(pred.size()),
                         std::min(gold.size(), pred.size()));
  }
  std::vector<Counts> per(gold.size());
  std::vector<char> misaligned(gold.size(), 0);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < gold.size(); ++i) {
    try {
      per[i] = count_sentence(gold[i], pred[i], i);
    } catch (const AlignmentError&) {
      misaligned[i] = 1;
    }
  }
  Counts total;
  for (std::size_t i = 0; i < per.size(); ++i) {
    if (misaligned[i]) throw AlignmentError("gold and predicted text differ", i);
    total += per[i];
  }
  return from_counts(total);
}

EvalReport prf(const std::vector<SegmentedSentence>& gold,
               const std::vector<SegmentedSentence>& pred, const Vocabulary& train) {
  EvalReport r = prf(gold, pred);
  r.oov_rate = oov_rate(train, gold);
  return r;
}

std::string to_json(const EvalReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "{\"precision\":%.6f,\"recall\":%.6f,\"f1\":%.6f,\"oov_rate\":%.6f,"
                "\"gold\":%zu,\"pred\":%zu,\"correct\":%zu}",
                r.precision, r.recall, r.f1, r.oov_rate, r.gold, r.pred, r.correct);
  return buf;
}

void report(const EvalReport& r, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << to_json(r) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

std::string format_table(const EvalReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "metric     value\n"
                "precision  %.4f\n"
                "recall     %.4f\n"
                "f1         %.4f\n"
                "oov_rate   %.4f\n"
                "gold       %zu\n"
                "pred       %zu\n"
                "correct    %zu\n",
                r.precision, r.recall, r.f1, r.oov_rate, r.gold, r.pred, r.correct);
  return buf;
}

}  // namespace daat::eval
