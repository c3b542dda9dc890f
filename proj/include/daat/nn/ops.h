// Differentiable operations recorded on a Graph. Matrices are rows x cols;
// rank-1 tensors act as a single row.

#pragma once

#include <cstddef>
#include <vector>

#include "daat/nn/graph.h"

namespace daat::nn {

// Row lookup: out[r] = table[indices[r]].
Var gather_rows(Var table, const std::vector<std::size_t>& indices);

// 1-D convolution over rows with `pad` zero rows on both sides.
// x: n x d_in, w: k x d_in x l, b: l  ->  (n + 2 pad - k + 1) x l.
Var conv1d(Var x, Var w, Var b, std::size_t pad);

// x: n x h, w: h x m, b: m -> n x m.
Var affine(Var x, Var w, Var b);

Var add(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var x, double factor);
// factor * x + offset, elementwise.
Var linear_map(Var x, double factor, double offset);
Var sigmoid(Var x);
Var tanh(Var x);

// Elementwise product with a constant tensor (dropout masks).
Var mask_mul(Var x, const Tensor& mask);

// Column-wise concatenation of matrices with equal row counts.
Var concat_cols(const std::vector<Var>& parts);

// Column maxima: n x f -> 1 x f. Ties route the gradient to the first row.
Var max_over_time(Var x);

// Appends zero rows until the matrix has at least `min_rows` rows.
Var pad_rows(Var x, std::size_t min_rows);

// Same value, no gradient.
Var detach(Var x);

Var sum(Var x);
Var add_n(const std::vector<Var>& scalars);

// log(clamp(p, eps, 1 - eps)); zero gradient where the clamp is active.
Var log_clamped(Var p, double eps);

}  // namespace daat::nn
