#include "daat/crf.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "daat/errors.h"
#include "daat/nn/kernels.h"
#include "daat/nn/ops.h"

namespace daat::crf {

namespace {

constexpr std::size_t K = kNumTags;
using Row = std::array<double, K>;

double log_sum_exp(const Row& v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

void check_scores(const nn::Tensor& scores, const Transitions& t) {
  if (scores.rank() != 2 || scores.cols() != K) {
    throw InvalidInput("crf: scores must be n x 4, got " + nn::shape_string(scores.shape()));
  }
  if (scores.rows() == 0) throw InvalidInput("crf: empty sentence");
  if (t.trans.size() != K * K || t.start.size() != K || t.stop.size() != K) {
    throw InvalidInput("crf: malformed transition parameters");
  }
}

void check_gold(const nn::Tensor& scores, const TagSequence& gold) {
  if (gold.size() != scores.rows()) {
    throw InvalidInput("crf: " + std::to_string(gold.size()) + " gold tags for " +
                       std::to_string(scores.rows()) + " positions");
  }
}

std::size_t idx(Tag t) { return static_cast<std::size_t>(t); }

// alpha[i][y]: log-sum of all prefixes ending in y at i, start and emission included.
std::vector<Row> forward_table(const nn::Tensor& s, const Transitions& t) {
  const std::size_t n = s.rows();
  std::vector<Row> alpha(n);
  for (std::size_t y = 0; y < K; ++y) alpha[0][y] = t.start[y] + s.at(0, y);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t y = 0; y < K; ++y) {
      Row r;
      for (std::size_t p = 0; p < K; ++p) r[p] = alpha[i - 1][p] + t.trans[p * K + y];
      alpha[i][y] = log_sum_exp(r) + s.at(i, y);
    }
  }
  return alpha;
}

// beta[i][y]: log-sum of all suffixes after position i given y at i, stop included.
std::vector<Row> backward_table(const nn::Tensor& s, const Transitions& t) {
  const std::size_t n = s.rows();
  std::vector<Row> beta(n);
  for (std::size_t y = 0; y < K; ++y) beta[n - 1][y] = t.stop[y];
  for (std::size_t i = n - 1; i-- > 0;) {
    for (std::size_t y = 0; y < K; ++y) {
      Row r;
      for (std::size_t nx = 0; nx < K; ++nx)
        r[nx] = t.trans[y * K + nx] + s.at(i + 1, nx) + beta[i + 1][nx];
      beta[i][y] = log_sum_exp(r);
    }
  }
  return beta;
}

double partition_from(const std::vector<Row>& alpha, const Transitions& t) {
  Row r;
  for (std::size_t y = 0; y < K; ++y) r[y] = alpha.back()[y] + t.stop[y];
  return log_sum_exp(r);
}

}  // namespace

CrfHead CrfHead::create(nn::ParameterStore& store, const std::string& prefix,
                        std::size_t hidden) {
  CrfHead h;
  h.w = &store.add(prefix + ".W", {hidden, K});
  h.b = &store.add(prefix + ".b", {K});
  h.trans = &store.add(prefix + ".T", {K, K});
  h.start = &store.add(prefix + ".start", {K});
  h.stop = &store.add(prefix + ".stop", {K});
  return h;
}

void CrfHead::init(nn::Rng& rng) {
  nn::init_glorot(w->value, hidden(), K, rng);
  b->value.fill(0.0);
  trans->value.fill(0.0);
  start->value.fill(0.0);
  stop->value.fill(0.0);
}

nn::Tensor emission_scores(const nn::Tensor& hidden, const CrfHead& head) {
  if (hidden.cols() != head.hidden()) {
    throw InvalidInput("crf: feature width " + std::to_string(hidden.cols()) + ", head expects " +
                       std::to_string(head.hidden()));
  }
  nn::Tensor out = nn::Tensor::matrix(hidden.rows(), K);
  nn::kernels::affine_forward(hidden.rows(), head.hidden(), K, hidden.data(),
                              head.w->value.data(), head.b->value.data(), out.data());
  return out;
}

double path_score(const nn::Tensor& scores, const Transitions& t, const TagSequence& tags) {
  check_scores(scores, t);
  check_gold(scores, tags);
  double s = t.start[idx(tags[0])] + t.stop[idx(tags.back())];
  for (std::size_t i = 0; i < tags.size(); ++i) {
    s += scores.at(i, idx(tags[i]));
    if (i > 0) s += t.trans[idx(tags[i - 1]) * K + idx(tags[i])];
  }
  return s;
}

double log_partition(const nn::Tensor& scores, const Transitions& t) {
  check_scores(scores, t);
  return partition_from(forward_table(scores, t), t);
}

double nll_loss(const nn::Tensor& scores, const Transitions& t, const TagSequence& gold) {
  check_scores(scores, t);
  check_gold(scores, gold);
  // Clamp tiny negative values caused by rounding when P(gold) ~ 1.
  return std::max(0.0, log_partition(scores, t) - path_score(scores, t, gold));
}

nn::Tensor marginals(const nn::Tensor& scores, const Transitions& t) {
  check_scores(scores, t);
  const auto alpha = forward_table(scores, t);
  const auto beta = backward_table(scores, t);
  const double log_z = partition_from(alpha, t);
  nn::Tensor m = nn::Tensor::matrix(scores.rows(), K);
  for (std::size_t i = 0; i < scores.rows(); ++i)
    for (std::size_t y = 0; y < K; ++y) m.at(i, y) = std::exp(alpha[i][y] + beta[i][y] - log_z);
  return m;
}

NllGradients nll_gradients(const nn::Tensor& scores, const Transitions& t,
                           const TagSequence& gold) {
  check_scores(scores, t);
  check_gold(scores, gold);
  const std::size_t n = scores.rows();
  const auto alpha = forward_table(scores, t);
  const auto beta = backward_table(scores, t);
  const double log_z = partition_from(alpha, t);

  NllGradients g{nn::Tensor::matrix(n, K), nn::Tensor::matrix(K, K), nn::Tensor::vector(K),
                 nn::Tensor::vector(K)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t y = 0; y < K; ++y)
      g.scores.at(i, y) = std::exp(alpha[i][y] + beta[i][y] - log_z);
  for (std::size_t y = 0; y < K; ++y) {
    g.start[y] = g.scores.at(0, y);
    g.stop[y] = g.scores.at(n - 1, y);
  }
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t a = 0; a < K; ++a)
      for (std::size_t b = 0; b < K; ++b)
        g.trans.at(a, b) +=
            std::exp(alpha[i - 1][a] + t.trans[a * K + b] + scores.at(i, b) + beta[i][b] - log_z);

  for (std::size_t i = 0; i < n; ++i) {
    g.scores.at(i, idx(gold[i])) -= 1.0;
    if (i > 0) g.trans.at(idx(gold[i - 1]), idx(gold[i])) -= 1.0;
  }
  g.start[idx(gold[0])] -= 1.0;
  g.stop[idx(gold.back())] -= 1.0;
  return g;
}

TagSequence viterbi_decode(const nn::Tensor& scores, const Transitions& t) {
  check_scores(scores, t);
  const std::size_t n = scores.rows();
  std::vector<Row> best(n);
  std::vector<std::array<std::size_t, K>> back(n);
  for (std::size_t y = 0; y < K; ++y) best[0][y] = t.start[y] + scores.at(0, y);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t y = 0; y < K; ++y) {
      std::size_t arg = 0;
      double v = best[i - 1][0] + t.trans[y];
      for (std::size_t p = 1; p < K; ++p) {
        const double c = best[i - 1][p] + t.trans[p * K + y];
        if (c > v) {
          v = c;
          arg = p;
        }
      }
      best[i][y] = v + scores.at(i, y);
      back[i][y] = arg;
    }
  }
  std::size_t last = 0;
  double v = best[n - 1][0] + t.stop[0];
  for (std::size_t y = 1; y < K; ++y) {
    const double c = best[n - 1][y] + t.stop[y];
    if (c > v) {
      v = c;
      last = y;
    }
  }
  TagSequence tags(n);
  for (std::size_t i = n; i-- > 0;) {
    tags[i] = static_cast<Tag>(last);
    if (i > 0) last = back[i][last];
  }
  return tags;
}

nn::Var emission_scores(nn::Graph& g, nn::Var hidden, const CrfHead& head, bool trainable) {
  return nn::affine(hidden, g.param(*head.w, trainable), g.param(*head.b, trainable));
}

nn::Var nll(nn::Graph& g, nn::Var scores, const CrfHead& head, const TagSequence& gold,
            bool trainable) {
  nn::Var trans = g.param(*head.trans, trainable);
  nn::Var start = g.param(*head.start, trainable);
  nn::Var stop = g.param(*head.stop, trainable);
  const Transitions t{trans.value(), start.value(), stop.value()};
  const double loss = nll_loss(scores.value(), t, gold);
  return g.record(
      nn::Tensor::scalar(loss), {scores, trans, start, stop},
      [scores, trans, start, stop, gold](nn::Graph& gr, const nn::Tensor&, const nn::Tensor& dy) {
        const Transitions tr{gr.value(trans), gr.value(start), gr.value(stop)};
        const NllGradients grads = nll_gradients(gr.value(scores), tr, gold);
        const double up = dy[0];
        auto accumulate = [&](const nn::Var& v, const nn::Tensor& local) {
          if (!gr.requires_grad(v)) return;
          nn::Tensor& d = gr.grad_buffer(v);
          for (std::size_t i = 0; i < d.size(); ++i) d[i] += up * local[i];
        };
        accumulate(scores, grads.scores);
        accumulate(trans, grads.trans);
        accumulate(start, grads.start);
        accumulate(stop, grads.stop);
      });
}

}  // namespace daat::crf
