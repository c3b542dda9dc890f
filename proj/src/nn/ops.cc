#include "daat/nn/ops.h"

#include <algorithm>
#include <cmath>

#include "daat/errors.h"
#include "daat/nn/kernels.h"

namespace daat::nn {

namespace {

Graph& graph_of(const Var& v) {
  if (!v.valid()) throw InvalidInput("op on an empty Var");
  return *v.graph();
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw InvalidInput(std::string(op) + ": shape mismatch " + shape_string(a.shape()) + " vs " +
                       shape_string(b.shape()));
  }
}

// Elementwise op whose local derivative is a function of (x, y).
template <typename Forward, typename Derivative>
Var elementwise(Var x, Forward f, Derivative df) {
  Graph& g = graph_of(x);
  Tensor out = x.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(out[i]);
  return g.record(std::move(out), {x}, [x, df](Graph& gr, const Tensor& y, const Tensor& dy) {
    if (!gr.requires_grad(x)) return;
    Tensor& dx = gr.grad_buffer(x);
    const Tensor& xv = gr.value(x);
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += dy[i] * df(xv[i], y[i]);
  });
}

double stable_sigmoid(double v) {
  if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}

}  // namespace

Var gather_rows(Var table, const std::vector<std::size_t>& indices) {
  Graph& g = graph_of(table);
  const Tensor& t = table.value();
  if (t.rank() != 2) throw InvalidInput("gather_rows: table must be a matrix");
  const std::size_t d = t.cols();
  Tensor out = Tensor::matrix(indices.size(), d);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= t.rows()) throw InvalidInput("gather_rows: index out of range");
    std::copy_n(t.data() + indices[r] * d, d, out.data() + r * d);
  }
  return g.record(std::move(out), {table},
                  [table, indices, d](Graph& gr, const Tensor&, const Tensor& dy) {
                    if (!gr.requires_grad(table)) return;
                    Tensor& dt = gr.grad_buffer(table);
                    for (std::size_t r = 0; r < indices.size(); ++r)
                      for (std::size_t c = 0; c < d; ++c) dt[indices[r] * d + c] += dy[r * d + c];
                  });
}

Var conv1d(Var x, Var w, Var b, std::size_t pad) {
  Graph& g = graph_of(x);
  const Tensor& xv = x.value();
  const Tensor& wv = w.value();
  const Tensor& bv = b.value();
  if (xv.rank() != 2 || wv.rank() != 3 || bv.rank() != 1) {
    throw InvalidInput("conv1d: expected x rank 2, w rank 3, b rank 1");
  }
  const kernels::ConvDims d{xv.rows(), xv.cols(), wv.dim(2), wv.dim(0), pad};
  if (wv.dim(1) != d.d_in || bv.size() != d.d_out) {
    throw InvalidInput("conv1d: input " + shape_string(xv.shape()) + " kernel " +
                       shape_string(wv.shape()) + " bias " + shape_string(bv.shape()));
  }
  if (d.rows + 2 * pad < d.window) throw InvalidInput("conv1d: input shorter than window");
  Tensor out = Tensor::matrix(d.out_rows(), d.d_out);
  kernels::conv1d_forward(d, xv.data(), wv.data(), bv.data(), out.data());
  return g.record(std::move(out), {x, w, b},
                  [x, w, b, d](Graph& gr, const Tensor&, const Tensor& dy) {
                    double* dx = gr.requires_grad(x) ? gr.grad_buffer(x).data() : nullptr;
                    double* dw = gr.requires_grad(w) ? gr.grad_buffer(w).data() : nullptr;
                    double* db = gr.requires_grad(b) ? gr.grad_buffer(b).data() : nullptr;
                    kernels::conv1d_backward(d, gr.value(x).data(), gr.value(w).data(),
                                             dy.data(), dx, dw, db);
                  });
}

Var affine(Var x, Var w, Var b) {
  Graph& g = graph_of(x);
  const Tensor& xv = x.value();
  const Tensor& wv = w.value();
  const Tensor& bv = b.value();
  if (wv.rank() != 2 || xv.cols() != wv.rows() || bv.size() != wv.cols()) {
    throw InvalidInput("affine: input " + shape_string(xv.shape()) + " weight " +
                       shape_string(wv.shape()) + " bias " + shape_string(bv.shape()));
  }
  const std::size_t rows = xv.rows();
  const std::size_t h = wv.rows();
  const std::size_t m = wv.cols();
  Tensor out = Tensor::matrix(rows, m);
  kernels::affine_forward(rows, h, m, xv.data(), wv.data(), bv.data(), out.data());
  return g.record(std::move(out), {x, w, b},
                  [x, w, b, rows, h, m](Graph& gr, const Tensor&, const Tensor& dy) {
                    double* dx = gr.requires_grad(x) ? gr.grad_buffer(x).data() : nullptr;
                    double* dw = gr.requires_grad(w) ? gr.grad_buffer(w).data() : nullptr;
                    double* db = gr.requires_grad(b) ? gr.grad_buffer(b).data() : nullptr;
                    kernels::affine_backward(rows, h, m, gr.value(x).data(), gr.value(w).data(),
                                             dy.data(), dx, dw, db);
                  });
}

Var add(Var a, Var b) {
  Graph& g = graph_of(a);
  require_same_shape(a.value(), b.value(), "add");
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  return g.record(std::move(out), {a, b}, [a, b](Graph& gr, const Tensor&, const Tensor& dy) {
    for (const Var& v : {a, b}) {
      if (!gr.requires_grad(v)) continue;
      Tensor& d = gr.grad_buffer(v);
      for (std::size_t i = 0; i < d.size(); ++i) d[i] += dy[i];
    }
  });
}

Var mul(Var a, Var b) {
  Graph& g = graph_of(a);
  require_same_shape(a.value(), b.value(), "mul");
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  return g.record(std::move(out), {a, b}, [a, b](Graph& gr, const Tensor&, const Tensor& dy) {
    if (gr.requires_grad(a)) {
      Tensor& da = gr.grad_buffer(a);
      const Tensor& other = gr.value(b);
      for (std::size_t i = 0; i < da.size(); ++i) da[i] += dy[i] * other[i];
    }
    if (gr.requires_grad(b)) {
      Tensor& db = gr.grad_buffer(b);
      const Tensor& other = gr.value(a);
      for (std::size_t i = 0; i < db.size(); ++i) db[i] += dy[i] * other[i];
    }
  });
}

Var scale(Var x, double factor) { return linear_map(x, factor, 0.0); }

Var linear_map(Var x, double factor, double offset) {
  return elementwise(
      x, [factor, offset](double v) { return factor * v + offset; },
      [factor](double, double) { return factor; });
}

Var sigmoid(Var x) {
  return elementwise(
      x, [](double v) { return stable_sigmoid(v); },
      [](double, double y) { return y * (1.0 - y); });
}

Var tanh(Var x) {
  return elementwise(
      x, [](double v) { return std::tanh(v); }, [](double, double y) { return 1.0 - y * y; });
}

Var mask_mul(Var x, const Tensor& mask) {
  Graph& g = graph_of(x);
  require_same_shape(x.value(), mask, "mask_mul");
  Tensor out = x.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
  return g.record(std::move(out), {x}, [x, mask](Graph& gr, const Tensor&, const Tensor& dy) {
    if (!gr.requires_grad(x)) return;
    Tensor& dx = gr.grad_buffer(x);
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += dy[i] * mask[i];
  });
}

Var concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) throw InvalidInput("concat_cols: no inputs");
  Graph& g = graph_of(parts[0]);
  const std::size_t rows = parts[0].value().rows();
  std::vector<std::size_t> widths;
  std::size_t total = 0;
  for (const Var& p : parts) {
    if (p.value().rows() != rows) throw InvalidInput("concat_cols: row counts differ");
    widths.push_back(p.value().cols());
    total += widths.back();
  }
  Tensor out = Tensor::matrix(rows, total);
  std::size_t offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Tensor& v = parts[k].value();
    for (std::size_t r = 0; r < rows; ++r)
      std::copy_n(v.data() + r * widths[k], widths[k], out.data() + r * total + offset);
    offset += widths[k];
  }
  return g.record(std::move(out), parts,
                  [parts, widths, rows, total](Graph& gr, const Tensor&, const Tensor& dy) {
                    std::size_t off = 0;
                    for (std::size_t k = 0; k < parts.size(); ++k) {
                      if (gr.requires_grad(parts[k])) {
                        Tensor& d = gr.grad_buffer(parts[k]);
                        for (std::size_t r = 0; r < rows; ++r)
                          for (std::size_t c = 0; c < widths[k]; ++c)
                            d[r * widths[k] + c] += dy[r * total + off + c];
                      }
                      off += widths[k];
                    }
                  });
}

Var max_over_time(Var x) {
  Graph& g = graph_of(x);
  const Tensor& xv = x.value();
  if (xv.rows() == 0) throw InvalidInput("max_over_time: empty input");
  const std::size_t cols = xv.cols();
  Tensor out = Tensor::matrix(1, cols);
  std::vector<std::size_t> argmax(cols, 0);
  for (std::size_t c = 0; c < cols; ++c) {
    double best = xv.at(0, c);
    for (std::size_t r = 1; r < xv.rows(); ++r) {
      if (xv.at(r, c) > best) {
        best = xv.at(r, c);
        argmax[c] = r;
      }
    }
    out[c] = best;
  }
  return g.record(std::move(out), {x}, [x, argmax, cols](Graph& gr, const Tensor&, const Tensor& dy) {
    if (!gr.requires_grad(x)) return;
    Tensor& dx = gr.grad_buffer(x);
    for (std::size_t c = 0; c < cols; ++c) dx[argmax[c] * cols + c] += dy[c];
  });
}

Var pad_rows(Var x, std::size_t min_rows) {
  const Tensor& xv = x.value();
  if (xv.rows() >= min_rows) return x;
  Graph& g = graph_of(x);
  Tensor out = Tensor::matrix(min_rows, xv.cols());
  std::copy_n(xv.data(), xv.size(), out.data());
  return g.record(std::move(out), {x}, [x](Graph& gr, const Tensor&, const Tensor& dy) {
    if (!gr.requires_grad(x)) return;
    Tensor& dx = gr.grad_buffer(x);
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += dy[i];
  });
}

Var detach(Var x) { return graph_of(x).constant(x.value()); }

Var sum(Var x) {
  Graph& g = graph_of(x);
  double s = 0.0;
  for (double v : x.value().values()) s += v;
  return g.record(Tensor::scalar(s), {x}, [x](Graph& gr, const Tensor&, const Tensor& dy) {
    if (!gr.requires_grad(x)) return;
    Tensor& dx = gr.grad_buffer(x);
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += dy[0];
  });
}

Var add_n(const std::vector<Var>& scalars) {
  if (scalars.empty()) throw InvalidInput("add_n: no inputs");
  Graph& g = graph_of(scalars[0]);
  double s = 0.0;
  for (const Var& v : scalars) s += v.value().item();
  return g.record(Tensor::scalar(s), scalars, [scalars](Graph& gr, const Tensor&, const Tensor& dy) {
    for (const Var& v : scalars)
      if (gr.requires_grad(v)) gr.grad_buffer(v)[0] += dy[0];
  });
}

Var log_clamped(Var p, double eps) {
  return elementwise(
      p, [eps](double v) { return std::log(std::clamp(v, eps, 1.0 - eps)); },
      [eps](double v, double) { return (v < eps || v > 1.0 - eps) ? 0.0 : 1.0 / v; });
}

}  // namespace daat::nn
