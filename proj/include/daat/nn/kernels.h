// Dense inner loops used by the graph ops. Every kernel has an OpenMP
// variant (used by the ops) and a plain serial reference kept for tests and
// benchmarks. Parallel variants partition over output elements only, so
// results are bit-identical to the serial versions for any thread count.
//
// Layouts (row-major):
//   conv input  x : rows x d_in
//   conv kernel w : k x d_in x l
//   conv output y : (rows + 2 * pad - k + 1) x l
//   affine      y = x * w + b with x : rows x h, w : h x m

#pragma once

#include <cstddef>

namespace daat::nn::kernels {

struct ConvDims {
  std::size_t rows = 0;
  std::size_t d_in = 0;
  std::size_t d_out = 0;
  std::size_t window = 0;
  std::size_t pad = 0;
  std::size_t out_rows() const { return rows + 2 * pad + 1 - window; }
};

void conv1d_forward_serial(const ConvDims& d, const double* x, const double* w,
                           const double* b, double* y);
void conv1d_forward(const ConvDims& d, const double* x, const double* w, const double* b,
                    double* y);

// Accumulates into dx / dw / db; any of them may be null.
void conv1d_backward_serial(const ConvDims& d, const double* x, const double* w,
                            const double* dy, double* dx, double* dw, double* db);
void conv1d_backward(const ConvDims& d, const double* x, const double* w, const double* dy,
                     double* dx, double* dw, double* db);

void affine_forward_serial(std::size_t rows, std::size_t h, std::size_t m, const double* x,
                           const double* w, const double* b, double* y);
void affine_forward(std::size_t rows, std::size_t h, std::size_t m, const double* x,
                    const double* w, const double* b, double* y);

void affine_backward_serial(std::size_t rows, std::size_t h, std::size_t m, const double* x,
                            const double* w, const double* dy, double* dx, double* dw,
                            double* db);
void affine_backward(std::size_t rows, std::size_t h, std::size_t m, const double* x,
                     const double* w, const double* dy, double* dx, double* dw, double* db);

}  // namespace daat::nn::kernels
