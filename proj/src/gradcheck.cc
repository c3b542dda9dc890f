#include "daat/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "daat/crf.h"
#include "daat/nn/layers.h"
#include "daat/nn/ops.h"
#include "daat/train.h"

namespace daat::gradcheck {

namespace {

using nn::Parameter;
using nn::ParameterStore;
using nn::Rng;
using nn::Tensor;
using nn::Var;

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Parameter& random_param(ParameterStore& store, const std::string& name, nn::Shape shape, Rng& rng,
                        double lo = -1.0, double hi = 1.0) {
  Parameter& p = store.add(name, std::move(shape));
  std::uniform_real_distribution<double> dist(lo, hi);
  for (double& v : p.value.values()) v = dist(rng);
  return p;
}

Tensor random_tensor(nn::Shape shape, Rng& rng) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (double& v : t.values()) v = dist(rng);
  return t;
}

// Random linear read-out so every output coordinate matters.
Var project(nn::Graph& g, Var out, const Tensor& weights) {
  return nn::sum(nn::mul(out, g.constant(weights)));
}

Sentence random_sentence(Rng& rng, std::size_t len, std::size_t alphabet) {
  Sentence s;
  for (std::size_t i = 0; i < len; ++i) s.push_back(U'a' + static_cast<char32_t>(pick(rng, 0, alphabet - 1)));
  return s;
}

TagSequence random_tags(Rng& rng, std::size_t n) {
  TagSequence t(n);
  for (auto& x : t) x = static_cast<Tag>(pick(rng, 0, kNumTags - 1));
  return t;
}

// One trial builds a fresh store and loss; returns the trial's max error.
using Trial = std::function<double(Rng&, double step)>;

struct Case {
  std::string name;
  bool crf;
  Trial trial;
};

// Elementwise unary/binary op over random matrices.
Trial elementwise(std::function<Var(nn::Graph&, Var, Var)> op, double lo = -1.0, double hi = 1.0) {
  return [op, lo, hi](Rng& rng, double step) {
    ParameterStore store;
    const std::size_t r = pick(rng, 1, 4), c = pick(rng, 1, 4);
    Parameter& a = random_param(store, "a", {r, c}, rng, lo, hi);
    Parameter& b = random_param(store, "b", {r, c}, rng, lo, hi);
    const Tensor w = random_tensor({r, c}, rng);
    return max_gradient_error(store.all(), [&](nn::Graph& g) {
      return project(g, op(g, g.param(a), g.param(b)), w);
    }, step);
  };
}

std::vector<Case> cases() {
  std::vector<Case> out;
  out.push_back({"gather_rows", false, [](Rng& rng, double step) {
    ParameterStore store;
    const std::size_t rows = pick(rng, 1, 5), d = pick(rng, 1, 4), n = pick(rng, 1, 6);
    Parameter& table = random_param(store, "table", {rows, d}, rng);
    std::vector<std::size_t> idx(n);
    for (auto& i : idx) i = pick(rng, 0, rows - 1);
    const Tensor w = random_tensor({n, d}, rng);
    return max_gradient_error(store.all(), [&](nn::Graph& g) {
      return project(g, nn::gather_rows(g.param(table), idx), w);
    }, step);
  }});
  out.push_back({"conv1d", false, [](Rng& rng, double step) {
    ParameterStore store;
    const std::size_t n = pick(rng, 1, 6), k = pick(rng, 1, 4), d = pick(rng, 1, 3),
                      l = pick(rng, 1, 3), pad = pick(rng, k > n ? (k - n + 1) / 2 + 1 : 0, 2 + k);
    Parameter& x = random_param(store, "x", {n, d}, rng);
    Parameter& w = random_param(store, "w", {k, d, l}, rng);
    Parameter& b = random_param(store, "b", {l}, rng);
    const std::size_t rows = n + 2 * pad - k + 1;
    const Tensor proj = random_tensor({rows, l}, rng);
    return max_gradient_error(store.all(), [&](nn::Graph& g) {
      return project(g, nn::conv1d(g.param(x), g.param(w), g.param(b), pad), proj);
    }, step);
  }});
  out.push_back({"affine", false, [](Rng& rng, double step) {
    ParameterStore store;
    const std::size_t n = pick(rng, 1, 5), h = pick(rng, 1, 4), m = pick(rng, 1, 4);
    Parameter& x = random_param(store, "x", {n, h}, rng);
    Parameter& w = random_param(store, "w", {h, m}, rng);
    Parameter& b = random_param(store, "b", {m}, rng);
    const Tensor proj = random_tensor({n, m}, rng);
    return max_gradient_error(store.all(), [&](nn::Graph& g) {
      return project(g, nn::affine(g.param(x), g.param(w), g.param(b)), proj);
    }, step);
  }});
  out.push_back({"add", false, elementwise([](nn::Graph&, Var a, Var b) { return nn::add(a, b); })});
  out.push_back({"mul", false, elementwise([](nn::Graph&, Var a, Var b) { return nn::mul(a, b); })});
  out.push_back({"scale", false, elementwise([](nn::Graph&, Var a, Var) { return nn::scale(a, -1.7); })});
  out.push_back({"linear_map", false,
                 elementwise([](nn::Graph&, Var a, Var) { return nn::linear_map(a, 0.6, 0.25); })});
  out.push_back({"sigmoid", false,
                 elementwise([](nn::Graph&, Var a, Var) { return nn::sigmoid(a); }, -4.0, 4.0)});
  out.push_back({"tanh", false,
                 elementwise([](nn::Graph&, Var a, Var) { return nn::tanh(a); }, -3.0, 3.0)});
  out.push_back({"log_clamped", false,
                 elementwise([](nn::Graph&, Var a, Var) { return nn::log_clamped(a, 1e-7); }, 0.1, 0.9)});
  out.push_back({"mask_mul", false, [](Rng& rng, double step) {
    ParameterStore store;
    const std::size_t r = pick(rng, 1, 4), c = pick(rng, 1, 4);
    Parameter& x = random_param(store, "x", {r, c}, rng);
    const Tensor mask = random_tensor({r, c}, rng);
    const Tensor w = random_tensor({r, c}, rng);
    return max_gradient_error(store.all(), [&](nn::Graph& g) {
      return project(g, nn::mask_mul(g.param(x), mask), w);
    }, step);
  }});
  out.push_back({"concat_cols", false, [](Rng& rng, double step) {
    ParameterStore store;
    const std::size_t r = pick(rng, 1, 4), c1 = pick(rng, 1, 3), c2 = pick(rng, 1, 3);
    Parameter& a = random_param(store, "a", {r, c1}, rng);
    Parameter& b = random_param(store, "b", {r, c2}, rng);
    const Tensor w = random_tensor({r, c1 + c2}, rng);
    return max_gradient_error(store.all(), [&](nn::Graph& g) {
      return project(g, nn::concat_cols({g.param(a), g.param(b)}), w);
    }, step);
  }});
  out.push_back({"max_over_time", false, [](Rng& rng, double step) {
    ParameterStore store;
    const std::size_t r = pick(rng, 1, 5), c = pick(rng, 1, 4);
    Parameter& x = store.add("x", {r, c});
    // Distinct values on a 0.01 grid keep every argmax far from a tie.
    std::vector<double> grid(r * c);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = 0.01 * static_cast<double>(i) - 0.3;
    std::shuffle(grid.begin(), grid.end(), rng);
    std::copy(grid.begin(), grid.end(), x.value.values().begin());
    const Tensor w = random_tensor({1, c}, rng);
    return max_gradient_error(store.all(), [&](nn::Graph& g) {
      return project(g, nn::max_over_time(g.param(x)), w);
    }, step);
  }});
  out.push_back({"pad_rows", false, [](Rng& rng, double step) {
    ParameterStore store;
    const std::size_t r = pick(rng, 1, 4), c = pick(rng, 1, 3), min_rows = pick(rng, 1, 6);
    Parameter& x = random_param(store, "x", {r, c}, rng);
    const Tensor w = random_tensor({std::max(r, min_rows), c}, rng);
    return max_gradient_error(store.all(), [&](nn::Graph& g) {
      return project(g, nn::pad_rows(g.param(x), min_rows), w);
    }, step);
  }});
  out.push_back({"add_n", false, [](Rng& rng, double step) {
    ParameterStore store;
    const std::size_t k = pick(rng, 1, 4);
    std::vector<Parameter*> ps;
    for (std::size_t i = 0; i < k; ++i)
      ps.push_back(&random_param(store, "s" + std::to_string(i), {1}, rng));
    const Tensor w = random_tensor({1}, rng);
    return max_gradient_error(store.all(), [&](nn::Graph& g) {
      std::vector<Var> xs;
      for (Parameter* p : ps) xs.push_back(nn::mul(g.param(*p), g.param(*p)));
      return project(g, nn::add_n(xs), w);
    }, step);
  }});
  out.push_back({"gcnn_layer", false, [](Rng& rng, double step) {
    ParameterStore store;
    const std::size_t n = pick(rng, 1, 6), d = pick(rng, 1, 3), l = pick(rng, 1, 3);
    const std::size_t k = 2 * pick(rng, 0, 2) + 1;
    Parameter& x = random_param(store, "x", {n, d}, rng);
    auto layer = nn::GcnnLayer::create(store, "gcnn", k, d, l);
    layer.init(rng);
    nn::init_uniform(layer.b->value, 0.5, rng);
    nn::init_uniform(layer.c->value, 0.5, rng);
    const Tensor w = random_tensor({n, l}, rng);
    return max_gradient_error(store.all(), [&](nn::Graph& g) {
      return project(g, layer.forward(g, g.param(x)), w);
    }, step);
  }});
  out.push_back({"gcnn_encoder", false, [](Rng& rng, double step) {
    ParameterStore store;
    const std::size_t n = pick(rng, 1, 6), d = pick(rng, 1, 3), l = pick(rng, 1, 3);
    Parameter& x = random_param(store, "x", {n, d}, rng);
    auto enc = nn::GcnnEncoder::create(store, "enc", pick(rng, 2, 3), 3, d, l, 0.3);
    enc.init(rng);
    const Tensor w = random_tensor({n, l}, rng);
    return max_gradient_error(store.all(), [&](nn::Graph& g) {
      return project(g, enc.forward(g, g.param(x), false, nullptr), w);
    }, step);
  }});
  out.push_back({"textcnn", false, [](Rng& rng, double step) {
    ParameterStore store;
    const std::size_t n = pick(rng, 1, 6), d = pick(rng, 1, 3);
    Parameter& x = random_param(store, "x", {n, d}, rng);
    auto tc = nn::TextCnn::create(store, "tc", {3, 4, 5}, pick(rng, 1, 3), d);
    tc.init(rng);
    nn::init_uniform(tc.proj_b->value, 0.5, rng);
    return max_gradient_error(store.all(), [&](nn::Graph& g) {
      return nn::log_clamped(tc.probability(g, g.param(x)), 1e-7);
    }, step);
  }});
  out.push_back({"crf_emissions", true, [](Rng& rng, double step) {
    ParameterStore store;
    const std::size_t n = pick(rng, 1, 5), h = pick(rng, 1, 4);
    Parameter& x = random_param(store, "x", {n, h}, rng);
    auto head = crf::CrfHead::create(store, "crf", h);
    head.init(rng);
    const Tensor w = random_tensor({n, kNumTags}, rng);
    return max_gradient_error(store.all(), [&](nn::Graph& g) {
      return project(g, crf::emission_scores(g, g.param(x), head), w);
    }, step);
  }});
  out.push_back({"crf_nll", true, [](Rng& rng, double step) {
    ParameterStore store;
    const std::size_t n = pick(rng, 1, 6);
    Parameter& scores = random_param(store, "scores", {n, kNumTags}, rng, -2.0, 2.0);
    auto head = crf::CrfHead::create(store, "crf", 1);
    for (Parameter* p : {head.trans, head.start, head.stop}) nn::init_uniform(p->value, 1.0, rng);
    const TagSequence gold = random_tags(rng, n);
    std::vector<Parameter*> params{&scores, head.trans, head.start, head.stop};
    return max_gradient_error(params, [&](nn::Graph& g) {
      return crf::nll(g, g.param(scores), head, gold);
    }, step);
  }});

  // Composite losses on a tiny dual-encoder model.
  const auto tiny_config = [](Rng& rng) {
    train::TrainConfig cfg;
    cfg.char_emb = 3;
    cfg.gcnn_dim = 3;
    cfg.gcnn_layers = 2;
    cfg.textcnn_filters = 2;
    cfg.filter_sizes = {2, 3};
    cfg.dropout = 0.0;
    cfg.seed = rng();
    return cfg;
  };
  const auto sentences = [](Rng& rng, std::size_t count) {
    std::vector<Sentence> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_sentence(rng, pick(rng, 1, 5), 4));
    return out;
  };
  const auto chars = std::vector<char32_t>{U'a', U'b', U'c'};  // 'd' exercises the unknown row
  out.push_back({"discriminator_loss", false, [=](Rng& rng, double step) {
    train::DaatModel m(tiny_config(rng), chars, train::Mode::Daat);
    const auto src = sentences(rng, 2), tgt = sentences(rng, 2);
    return max_gradient_error(m.store().all(), [&](nn::Graph& g) {
      return train::discriminator_loss(g, m, src, tgt);
    }, step);
  }});
  out.push_back({"confusion_loss", false, [=](Rng& rng, double step) {
    train::DaatModel m(tiny_config(rng), chars, train::Mode::Daat);
    const auto src = sentences(rng, 2), tgt = sentences(rng, 2);
    return max_gradient_error(m.store().all(), [&](nn::Graph& g) {
      return train::confusion_loss(g, m, src, tgt);
    }, step);
  }});
  out.push_back({"tagging_step_loss", false, [=](Rng& rng, double step) {
    train::DaatModel m(tiny_config(rng), chars, train::Mode::Daat);
    std::vector<LabeledItem> src, tgt;
    for (const auto& s : sentences(rng, 2)) src.push_back({s, random_tags(rng, s.size()), Provenance::Gold});
    for (const auto& s : sentences(rng, 2)) tgt.push_back({s, random_tags(rng, s.size()), Provenance::Distant});
    train::Batch bs, bt;
    for (const auto& it : src) bs.items.push_back(&it);
    for (const auto& it : tgt) bt.items.push_back(&it);
    // An even step: both tagging losses plus the confusion term.
    return max_gradient_error(train::step_parameters(m, 2), [&](nn::Graph& g) {
      return train::build_step_loss(g, m, bs, bt, 2, {}, false, nullptr).total;
    }, step);
  }});
  return out;
}

}  // namespace

double relative_error(double analytic, double numeric) {
  const double scale = std::max({kErrorFloor, std::abs(analytic), std::abs(numeric)});
  return std::abs(analytic - numeric) / scale;
}

double max_gradient_error(const std::vector<nn::Parameter*>& params, const LossFn& loss,
                          double step) {
  for (Parameter* p : params) p->grad.fill(0.0);
  {
    nn::Graph g;
    g.backward(loss(g));
  }
  const auto eval = [&] {
    nn::Graph g;
    return loss(g).value()[0];
  };
  double worst = 0.0;
  for (Parameter* p : params) {
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double orig = p->value[i];
      p->value[i] = orig + step;
      const double up = eval();
      p->value[i] = orig - step;
      const double down = eval();
      p->value[i] = orig;
      worst = std::max(worst, relative_error(p->grad[i], (up - down) / (2.0 * step)));
    }
  }
  return worst;
}

std::vector<OpResult> run_suite(const Options& opts) {
  std::vector<OpResult> results;
  Rng rng(opts.seed);
  for (const Case& c : cases()) {
    OpResult r{c.name, opts.trials, 0.0, c.crf ? std::min(opts.tolerance, opts.crf_tolerance)
                                               : opts.tolerance};
    for (std::size_t t = 0; t < opts.trials; ++t)
      r.max_error = std::max(r.max_error, c.trial(rng, opts.step));
    results.push_back(r);
  }
  return results;
}

}  // namespace daat::gradcheck
