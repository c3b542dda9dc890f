#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "daat/nn/tensor.h"

namespace daat::nn {

struct AdamConfig {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamMoments {
  Tensor m;
  Tensor v;
  std::uint64_t step = 0;
};

// One bias-corrected update of `param`. Throws InvalidInput on shape mismatch.
void adam_step(Tensor& param, const Tensor& grad, AdamMoments& state, const AdamConfig& cfg);

// Per-parameter moment bookkeeping. Parameters left out of a step() call
// keep their moments and step count untouched.
class Adam {
 public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

  // Applies Parameter::grad and then zeroes it.
  void step(const std::vector<Parameter*>& params);

  const AdamMoments* moments(const Parameter* p) const;
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  std::unordered_map<const Parameter*, AdamMoments> state_;
};

}  // namespace daat::nn
