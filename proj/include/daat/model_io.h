// Model container:
//
//   "DAAT1\n"
//   key=value\n ...        hyperparameters, in insertion order
//   \n
//   u64 tensor count
//   per tensor: u32 name length, name bytes, u32 rank, u64 dims[rank],
//               f64 values[prod(dims)]
//
// All integers and doubles are little-endian.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "daat/nn/tensor.h"

namespace daat::model_io {

inline constexpr std::string_view kMagic = "DAAT1";

struct Container {
  std::vector<std::pair<std::string, std::string>> hyper;
  std::vector<std::pair<std::string, nn::Tensor>> tensors;

  // Throws FormatError when the key is missing.
  const std::string& get(const std::string& key) const;
  const nn::Tensor& tensor(const std::string& name) const;
  bool operator==(const Container&) const = default;
};

std::string serialize(const Container& c);
// Throws FormatError on any structural problem, including trailing bytes.
Container deserialize(std::string_view bytes);

void save(const std::filesystem::path& path, const Container& c);
Container load(const std::filesystem::path& path);

// Copies every tensor of `c` into the same-named parameter of `store`.
// Names and shapes must match one to one.
void restore(nn::ParameterStore& store, const Container& c);
void append_parameters(Container& c, const nn::ParameterStore& store);

}  // namespace daat::model_io
