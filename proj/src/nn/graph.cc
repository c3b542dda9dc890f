#include "daat/nn/graph.h"

#include "daat/errors.h"

namespace daat::nn {

const Tensor& Var::value() const { return graph_->value(*this); }
const Tensor& Var::grad() const { return graph_->grad(*this); }

Var Graph::push(Node node) {
  if (consumed_) throw StaleGraph("graph: recording after backward(); call reset() first");
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Graph::constant(Tensor value) {
  Node n;
  n.value = std::move(value);
  return push(std::move(n));
}

Var Graph::param(Parameter& p, bool trainable) {
  auto it = param_nodes_.find(&p);
  if (it != param_nodes_.end()) {
    const Var v(this, it->second);
    if (nodes_[it->second].requires_grad != trainable) {
      throw InvalidInput("parameter '" + p.name + "' used as both trainable and frozen");
    }
    return v;
  }
  Node n;
  n.value = p.value;
  n.requires_grad = trainable;
  n.param = trainable ? &p : nullptr;
  Var v = push(std::move(n));
  param_nodes_.emplace(&p, v.id());
  return v;
}

Var Graph::record(Tensor value, std::initializer_list<Var> inputs, BackwardFn fn) {
  return record(std::move(value), std::vector<Var>(inputs), std::move(fn));
}

Var Graph::record(Tensor value, const std::vector<Var>& inputs, BackwardFn fn) {
  Node n;
  n.value = std::move(value);
  for (const Var& in : inputs) {
    if (in.graph() != this) throw InvalidInput("graph: input belongs to another graph");
    n.requires_grad = n.requires_grad || nodes_[in.id()].requires_grad;
  }
  if (n.requires_grad) n.backward = std::move(fn);
  return push(std::move(n));
}

Tensor& Graph::grad_buffer(const Var& v) {
  Node& n = nodes_[v.id()];
  if (n.grad.empty()) n.grad = Tensor(n.value.shape());
  return n.grad;
}

void Graph::backward(const Var& root) {
  if (consumed_) throw StaleGraph("graph: backward() called twice without reset()");
  if (root.graph() != this) throw InvalidInput("graph: root belongs to another graph");
  consumed_ = true;
  Node& r = nodes_[root.id()];
  if (r.value.size() != 1) {
    throw InvalidInput("graph: backward root must be a scalar, got " +
                       shape_string(r.value.shape()));
  }
  if (!r.requires_grad) return;
  grad_buffer(root)[0] = 1.0;
  for (std::size_t i = root.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || n.grad.empty()) continue;
    if (n.backward) n.backward(*this, n.value, n.grad);
    if (n.param) {
      Tensor& dst = n.param->grad;
      if (dst.shape() != n.value.shape()) dst = Tensor(n.value.shape());
      for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += n.grad[k];
    }
  }
}

void Graph::reset() {
  nodes_.clear();
  param_nodes_.clear();
  consumed_ = false;
}

}  // namespace daat::nn
