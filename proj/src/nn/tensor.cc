#include "daat/nn/tensor.h"

#include <algorithm>

#include "daat/errors.h"

namespace daat::nn {

std::string shape_string(const Shape& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + ")";
}

std::size_t shape_size(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return shape.empty() ? 0 : n;
}

Tensor::Tensor(Shape shape, double fill)
    : shape_(std::move(shape)), values_(shape_size(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (values_.size() != shape_size(shape_)) {
    throw InvalidInput("tensor: " + std::to_string(values_.size()) + " values for shape " +
                       shape_string(shape_));
  }
}

void Tensor::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

double Tensor::item() const {
  if (values_.size() != 1) throw InvalidInput("tensor: item() on shape " + shape_string(shape_));
  return values_[0];
}

Parameter& ParameterStore::add(const std::string& name, Shape shape) {
  if (find(name)) throw InvalidInput("parameter '" + name + "' already exists");
  auto p = std::make_unique<Parameter>();
  p->name = name;
  p->value = Tensor(shape);
  p->grad = Tensor(std::move(shape));
  params_.push_back(std::move(p));
  return *params_.back();
}

Parameter& ParameterStore::get(const std::string& name) {
  Parameter* p = find(name);
  if (!p) throw InvalidInput("no parameter named '" + name + "'");
  return *p;
}

const Parameter& ParameterStore::get(const std::string& name) const {
  const Parameter* p = find(name);
  if (!p) throw InvalidInput("no parameter named '" + name + "'");
  return *p;
}

Parameter* ParameterStore::find(const std::string& name) {
  for (auto& p : params_)
    if (p->name == name) return p.get();
  return nullptr;
}

const Parameter* ParameterStore::find(const std::string& name) const {
  for (const auto& p : params_)
    if (p->name == name) return p.get();
  return nullptr;
}

std::vector<Parameter*> ParameterStore::with_prefix(const std::string& prefix) const {
  std::vector<Parameter*> out;
  for (const auto& p : params_)
    if (p->name.compare(0, prefix.size(), prefix) == 0) out.push_back(p.get());
  return out;
}

std::vector<Parameter*> ParameterStore::all() const {
  std::vector<Parameter*> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.push_back(p.get());
  return out;
}

void ParameterStore::zero_grad() {
  for (auto& p : params_) p->grad.fill(0.0);
}

}  // namespace daat::nn
