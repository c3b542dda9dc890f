// Central finite-difference checks of every differentiable op and of the
// composite losses built from them.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "daat/nn/graph.h"
#include "daat/nn/tensor.h"

namespace daat::gradcheck {

struct Options {
  std::size_t trials = 20;
  double tolerance = 1e-4;
  double crf_tolerance = 1e-5;
  double step = 1e-4;
  std::uint64_t seed = 42;
};

struct OpResult {
  std::string name;
  std::size_t trials = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed() const { return max_error <= tolerance; }
};

// |a - n| / max(floor, |a|, |n|).
inline constexpr double kErrorFloor = 1e-4;
double relative_error(double analytic, double numeric);

using LossFn = std::function<nn::Var(nn::Graph&)>;

// Largest relative error over every coordinate of `params`.
double max_gradient_error(const std::vector<nn::Parameter*>& params, const LossFn& loss,
                          double step);

std::vector<OpResult> run_suite(const Options& opts);

}  // namespace daat::gradcheck
