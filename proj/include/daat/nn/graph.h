// Tape-based reverse-mode differentiation over Tensor-valued nodes.
//
// Nodes are appended in evaluation order, so walking the tape backwards is a
// valid topological order. A graph is single-use: backward() may run once,
// then reset() must be called before recording again.

#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <unordered_map>
#include <vector>

#include "daat/nn/tensor.h"

namespace daat::nn {

class Graph;

class Var {
 public:
  Var() = default;
  Var(Graph* g, std::size_t id) : graph_(g), id_(id) {}

  const Tensor& value() const;
  const Tensor& grad() const;
  Graph* graph() const { return graph_; }
  std::size_t id() const { return id_; }
  bool valid() const { return graph_ != nullptr; }

 private:
  Graph* graph_ = nullptr;
  std::size_t id_ = 0;
};

class Graph {
 public:
  // Receives the node's own value and the gradient flowing into it.
  using BackwardFn = std::function<void(Graph&, const Tensor& out, const Tensor& out_grad)>;

  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var constant(Tensor value);
  // A parameter leaf. Each parameter gets one node per graph; gradients
  // flow back into Parameter::grad only when `trainable`.
  Var param(Parameter& p, bool trainable = true);

  Var record(Tensor value, std::initializer_list<Var> inputs, BackwardFn fn);
  Var record(Tensor value, const std::vector<Var>& inputs, BackwardFn fn);

  const Tensor& value(const Var& v) const { return nodes_[v.id()].value; }
  const Tensor& grad(const Var& v) const { return nodes_[v.id()].grad; }
  bool requires_grad(const Var& v) const { return nodes_[v.id()].requires_grad; }
  // Zero-initialised on first use.
  Tensor& grad_buffer(const Var& v);

  // `root` must hold exactly one value. Throws StaleGraph on a second call.
  void backward(const Var& root);

  void reset();
  std::size_t size() const { return nodes_.size(); }
  bool consumed() const { return consumed_; }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    BackwardFn backward;
    Parameter* param = nullptr;
  };

  Var push(Node node);

  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, std::size_t> param_nodes_;
  bool consumed_ = false;
};

}  // namespace daat::nn
