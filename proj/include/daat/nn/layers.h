// Character embeddings, the gated convolutional encoder and the text-CNN
// domain classifier. Layers hold pointers into a ParameterStore owned by the
// enclosing model; building a layer registers its parameters there.

#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "daat/corpus.h"
#include "daat/nn/graph.h"
#include "daat/nn/tensor.h"

namespace daat::nn {

using Rng = std::mt19937_64;

void init_uniform(Tensor& t, double range, Rng& rng);
// Glorot/Xavier uniform.
void init_glorot(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng);

// Row 0 is the unknown-character row; known characters start at row 1.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(ParameterStore& store, const std::string& name, std::vector<char32_t> chars,
                 std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t rows() const { return chars_.size() + 1; }
  const std::vector<char32_t>& chars() const { return chars_; }
  std::size_t index_of(char32_t c) const;
  std::vector<std::size_t> indices(const Sentence& s) const;

  Var forward(Graph& g, const Sentence& s, bool trainable = true) const;
  Parameter& matrix() const { return *matrix_; }

 private:
  std::vector<char32_t> chars_;
  std::unordered_map<char32_t, std::size_t> index_;
  std::size_t dim_ = 0;
  Parameter* matrix_ = nullptr;
};

// H = (x * W + b) (elementwise) sigmoid(x * V + c), same-padded.
struct GcnnLayer {
  Parameter* w = nullptr;
  Parameter* b = nullptr;
  Parameter* v = nullptr;
  Parameter* c = nullptr;
  std::size_t window = 3;

  static GcnnLayer create(ParameterStore& store, const std::string& prefix, std::size_t window,
                          std::size_t d_in, std::size_t d_out);
  std::size_t d_in() const { return w->value.dim(1); }
  std::size_t d_out() const { return w->value.dim(2); }
  void init(Rng& rng);
  Var forward(Graph& g, Var x, bool trainable = true) const;
  std::vector<Parameter*> parameters() const { return {w, b, v, c}; }
};

Var dropout(Var x, double rate, Rng& rng);

struct GcnnEncoder {
  std::vector<GcnnLayer> layers;
  double dropout_rate = 0.3;

  static GcnnEncoder create(ParameterStore& store, const std::string& prefix,
                            std::size_t num_layers, std::size_t window, std::size_t d_in,
                            std::size_t d_out, double dropout_rate);
  std::size_t d_out() const { return layers.back().d_out(); }
  void init(Rng& rng);
  // Dropout on each layer input only when `training` (rng required then).
  Var forward(Graph& g, Var x, bool training, Rng* rng, bool trainable = true) const;
  std::vector<Parameter*> parameters() const;
};

// Convolution banks -> tanh -> max over time -> concat -> linear logit.
struct TextCnn {
  struct Bank {
    std::size_t window = 3;
    Parameter* kernel = nullptr;
    Parameter* bias = nullptr;
  };
  std::vector<Bank> banks;
  Parameter* proj_w = nullptr;
  Parameter* proj_b = nullptr;

  static TextCnn create(ParameterStore& store, const std::string& prefix,
                        const std::vector<std::size_t>& windows, std::size_t filters,
                        std::size_t d_in);
  void init(Rng& rng);
  Var logit(Graph& g, Var h, bool trainable = true) const;
  Var probability(Graph& g, Var h, bool trainable = true) const;
  std::vector<Parameter*> parameters() const;
};

}  // namespace daat::nn
