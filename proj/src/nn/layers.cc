#include "daat/nn/layers.h"

#include <algorithm>
#include <cmath>

#include "daat/errors.h"
#include "daat/nn/ops.h"

namespace daat::nn {

void init_uniform(Tensor& t, double range, Rng& rng) {
  std::uniform_real_distribution<double> dist(-range, range);
  for (double& v : t.values()) v = dist(rng);
}

void init_glorot(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  init_uniform(t, std::sqrt(6.0 / static_cast<double>(fan_in + fan_out)), rng);
}

EmbeddingTable::EmbeddingTable(ParameterStore& store, const std::string& name,
                               std::vector<char32_t> chars, std::size_t dim)
    : chars_(std::move(chars)), dim_(dim) {
  std::sort(chars_.begin(), chars_.end());
  chars_.erase(std::unique(chars_.begin(), chars_.end()), chars_.end());
  for (std::size_t i = 0; i < chars_.size(); ++i) index_.emplace(chars_[i], i + 1);
  matrix_ = &store.add(name, {chars_.size() + 1, dim});
}

std::size_t EmbeddingTable::index_of(char32_t c) const {
  auto it = index_.find(c);
  return it == index_.end() ? 0 : it->second;
}

std::vector<std::size_t> EmbeddingTable::indices(const Sentence& s) const {
  std::vector<std::size_t> idx(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) idx[i] = index_of(s[i]);
  return idx;
}

Var EmbeddingTable::forward(Graph& g, const Sentence& s, bool trainable) const {
  return gather_rows(g.param(*matrix_, trainable), indices(s));
}

GcnnLayer GcnnLayer::create(ParameterStore& store, const std::string& prefix,
                            std::size_t window, std::size_t d_in, std::size_t d_out) {
  if (window % 2 == 0) throw InvalidInput("gcnn: window size must be odd");
  GcnnLayer l;
  l.window = window;
  l.w = &store.add(prefix + ".W", {window, d_in, d_out});
  l.b = &store.add(prefix + ".b", {d_out});
  l.v = &store.add(prefix + ".V", {window, d_in, d_out});
  l.c = &store.add(prefix + ".c", {d_out});
  return l;
}

void GcnnLayer::init(Rng& rng) {
  const std::size_t fan_in = window * d_in();
  init_glorot(w->value, fan_in, d_out(), rng);
  init_glorot(v->value, fan_in, d_out(), rng);
  b->value.fill(0.0);
  c->value.fill(0.0);
}

Var GcnnLayer::forward(Graph& g, Var x, bool trainable) const {
  if (x.value().cols() != d_in()) {
    throw InvalidInput("gcnn: input width " + std::to_string(x.value().cols()) + ", layer expects " +
                       std::to_string(d_in()));
  }
  const std::size_t pad = (window - 1) / 2;
  Var linear = conv1d(x, g.param(*w, trainable), g.param(*b, trainable), pad);
  Var gate = sigmoid(conv1d(x, g.param(*v, trainable), g.param(*c, trainable), pad));
  return mul(linear, gate);
}

Var dropout(Var x, double rate, Rng& rng) {
  if (rate <= 0.0) return x;
  Tensor mask(x.value().shape());
  std::bernoulli_distribution keep(1.0 - rate);
  const double scale = 1.0 / (1.0 - rate);
  for (double& m : mask.values()) m = keep(rng) ? scale : 0.0;
  return mask_mul(x, mask);
}

GcnnEncoder GcnnEncoder::create(ParameterStore& store, const std::string& prefix,
                                std::size_t num_layers, std::size_t window, std::size_t d_in,
                                std::size_t d_out, double dropout_rate) {
  if (num_layers == 0) throw InvalidInput("gcnn encoder needs at least one layer");
  GcnnEncoder enc;
  enc.dropout_rate = dropout_rate;
  for (std::size_t i = 0; i < num_layers; ++i) {
    enc.layers.push_back(GcnnLayer::create(store, prefix + ".layer" + std::to_string(i), window,
                                           i == 0 ? d_in : d_out, d_out));
  }
  return enc;
}

void GcnnEncoder::init(Rng& rng) {
  for (auto& l : layers) l.init(rng);
}

Var GcnnEncoder::forward(Graph& g, Var x, bool training, Rng* rng, bool trainable) const {
  if (training && !rng) throw InvalidInput("encoder: training mode needs an rng");
  Var h = x;
  for (const auto& layer : layers) {
    if (training) h = dropout(h, dropout_rate, *rng);
    h = layer.forward(g, h, trainable);
  }
  return h;
}

std::vector<Parameter*> GcnnEncoder::parameters() const {
  std::vector<Parameter*> out;
  for (const auto& l : layers)
    for (Parameter* p : l.parameters()) out.push_back(p);
  return out;
}

TextCnn TextCnn::create(ParameterStore& store, const std::string& prefix,
                        const std::vector<std::size_t>& windows, std::size_t filters,
                        std::size_t d_in) {
  if (windows.empty() || filters == 0) throw InvalidInput("text-cnn: need windows and filters");
  TextCnn tc;
  for (std::size_t w : windows) {
    Bank bank;
    bank.window = w;
    bank.kernel = &store.add(prefix + ".conv" + std::to_string(w) + ".W", {w, d_in, filters});
    bank.bias = &store.add(prefix + ".conv" + std::to_string(w) + ".b", {filters});
    tc.banks.push_back(bank);
  }
  tc.proj_w = &store.add(prefix + ".proj.W", {windows.size() * filters, 1});
  tc.proj_b = &store.add(prefix + ".proj.b", {1});
  return tc;
}

void TextCnn::init(Rng& rng) {
  for (auto& bank : banks) {
    init_glorot(bank.kernel->value, bank.window * bank.kernel->value.dim(1),
                bank.kernel->value.dim(2), rng);
    bank.bias->value.fill(0.0);
  }
  init_glorot(proj_w->value, proj_w->value.dim(0), 1, rng);
  proj_b->value.fill(0.0);
}

Var TextCnn::logit(Graph& g, Var h, bool trainable) const {
  std::vector<Var> pooled;
  pooled.reserve(banks.size());
  for (const auto& bank : banks) {
    Var padded = pad_rows(h, bank.window);
    Var conv = conv1d(padded, g.param(*bank.kernel, trainable), g.param(*bank.bias, trainable), 0);
    pooled.push_back(max_over_time(tanh(conv)));
  }
  return affine(concat_cols(pooled), g.param(*proj_w, trainable), g.param(*proj_b, trainable));
}

Var TextCnn::probability(Graph& g, Var h, bool trainable) const {
  return sigmoid(logit(g, h, trainable));
}

std::vector<Parameter*> TextCnn::parameters() const {
  std::vector<Parameter*> out;
  for (const auto& bank : banks) {
    out.push_back(bank.kernel);
    out.push_back(bank.bias);
  }
  out.push_back(proj_w);
  out.push_back(proj_b);
  return out;
}

}  // namespace daat::nn
