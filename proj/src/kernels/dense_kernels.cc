#include <cstring>

#include "daat/nn/kernels.h"

namespace daat::nn::kernels {

namespace {

// Below this many multiply-adds the parallel region costs more than it saves.
constexpr std::size_t kParallelWork = 1 << 15;

inline void conv_row(const ConvDims& d, const double* x, const double* w, const double* b,
                     double* yrow, std::size_t t) {
  for (std::size_t o = 0; o < d.d_out; ++o) yrow[o] = b ? b[o] : 0.0;
  for (std::size_t j = 0; j < d.window; ++j) {
    const std::ptrdiff_t src =
        static_cast<std::ptrdiff_t>(t + j) - static_cast<std::ptrdiff_t>(d.pad);
    if (src < 0 || src >= static_cast<std::ptrdiff_t>(d.rows)) continue;
    const double* xr = x + static_cast<std::size_t>(src) * d.d_in;
    const double* wj = w + j * d.d_in * d.d_out;
    for (std::size_t i = 0; i < d.d_in; ++i) {
      const double xv = xr[i];
      const double* wr = wj + i * d.d_out;
      for (std::size_t o = 0; o < d.d_out; ++o) yrow[o] += xv * wr[o];
    }
  }
}

inline void conv_dx_row(const ConvDims& d, const double* w, const double* dy, double* dxrow,
                        std::size_t s) {
  const std::size_t m = d.out_rows();
  for (std::size_t j = 0; j < d.window; ++j) {
    const std::ptrdiff_t t =
        static_cast<std::ptrdiff_t>(s + d.pad) - static_cast<std::ptrdiff_t>(j);
    if (t < 0 || t >= static_cast<std::ptrdiff_t>(m)) continue;
    const double* dyr = dy + static_cast<std::size_t>(t) * d.d_out;
    const double* wj = w + j * d.d_in * d.d_out;
    for (std::size_t i = 0; i < d.d_in; ++i) {
      const double* wr = wj + i * d.d_out;
      double acc = 0.0;
      for (std::size_t o = 0; o < d.d_out; ++o) acc += dyr[o] * wr[o];
      dxrow[i] += acc;
    }
  }
}

inline void conv_dw_row(const ConvDims& d, const double* x, const double* dy, double* dwrow,
                        std::size_t j, std::size_t i) {
  const std::size_t m = d.out_rows();
  for (std::size_t t = 0; t < m; ++t) {
    const std::ptrdiff_t src =
        static_cast<std::ptrdiff_t>(t + j) - static_cast<std::ptrdiff_t>(d.pad);
    if (src < 0 || src >= static_cast<std::ptrdiff_t>(d.rows)) continue;
    const double xv = x[static_cast<std::size_t>(src) * d.d_in + i];
    const double* dyr = dy + t * d.d_out;
    for (std::size_t o = 0; o < d.d_out; ++o) dwrow[o] += xv * dyr[o];
  }
}

inline void bias_grad(std::size_t rows, std::size_t cols, const double* dy, double* db) {
  for (std::size_t t = 0; t < rows; ++t)
    for (std::size_t o = 0; o < cols; ++o) db[o] += dy[t * cols + o];
}

}  // namespace

void conv1d_forward_serial(const ConvDims& d, const double* x, const double* w,
                           const double* b, double* y) {
  const std::size_t m = d.out_rows();
  for (std::size_t t = 0; t < m; ++t) conv_row(d, x, w, b, y + t * d.d_out, t);
}

void conv1d_forward(const ConvDims& d, const double* x, const double* w, const double* b,
                    double* y) {
  const auto m = static_cast<std::ptrdiff_t>(d.out_rows());
  const std::size_t work = d.out_rows() * d.window * d.d_in * d.d_out;
#pragma omp parallel for if (work > kParallelWork) schedule(static)
  for (std::ptrdiff_t t = 0; t < m; ++t) {
    const auto row = static_cast<std::size_t>(t);
    conv_row(d, x, w, b, y + row * d.d_out, row);
  }
}

void conv1d_backward_serial(const ConvDims& d, const double* x, const double* w,
                            const double* dy, double* dx, double* dw, double* db) {
  if (dx) {
    for (std::size_t s = 0; s < d.rows; ++s) conv_dx_row(d, w, dy, dx + s * d.d_in, s);
  }
  if (dw) {
    for (std::size_t j = 0; j < d.window; ++j)
      for (std::size_t i = 0; i < d.d_in; ++i)
        conv_dw_row(d, x, dy, dw + (j * d.d_in + i) * d.d_out, j, i);
  }
  if (db) bias_grad(d.out_rows(), d.d_out, dy, db);
}

void conv1d_backward(const ConvDims& d, const double* x, const double* w, const double* dy,
                     double* dx, double* dw, double* db) {
  const std::size_t work = d.out_rows() * d.window * d.d_in * d.d_out;
  if (dx) {
    const auto rows = static_cast<std::ptrdiff_t>(d.rows);
#pragma omp parallel for if (work > kParallelWork) schedule(static)
    for (std::ptrdiff_t s = 0; s < rows; ++s) {
      const auto row = static_cast<std::size_t>(s);
      conv_dx_row(d, w, dy, dx + row * d.d_in, row);
    }
  }
  if (dw) {
    const auto pairs = static_cast<std::ptrdiff_t>(d.window * d.d_in);
#pragma omp parallel for if (work > kParallelWork) schedule(static)
    for (std::ptrdiff_t p = 0; p < pairs; ++p) {
      const auto ji = static_cast<std::size_t>(p);
      conv_dw_row(d, x, dy, dw + ji * d.d_out, ji / d.d_in, ji % d.d_in);
    }
  }
  if (db) bias_grad(d.out_rows(), d.d_out, dy, db);
}

void affine_forward_serial(std::size_t rows, std::size_t h, std::size_t m, const double* x,
                           const double* w, const double* b, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* yr = y + r * m;
    for (std::size_t o = 0; o < m; ++o) yr[o] = b ? b[o] : 0.0;
    for (std::size_t i = 0; i < h; ++i) {
      const double xv = x[r * h + i];
      const double* wr = w + i * m;
      for (std::size_t o = 0; o < m; ++o) yr[o] += xv * wr[o];
    }
  }
}

void affine_forward(std::size_t rows, std::size_t h, std::size_t m, const double* x,
                    const double* w, const double* b, double* y) {
  const auto n = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel for if (rows * h * m > kParallelWork) schedule(static)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    affine_forward_serial(1, h, m, x + static_cast<std::size_t>(r) * h, w, b,
                          y + static_cast<std::size_t>(r) * m);
  }
}

void affine_backward_serial(std::size_t rows, std::size_t h, std::size_t m, const double* x,
                            const double* w, const double* dy, double* dx, double* dw,
                            double* db) {
  if (dx) {
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t i = 0; i < h; ++i) {
        double acc = 0.0;
        for (std::size_t o = 0; o < m; ++o) acc += dy[r * m + o] * w[i * m + o];
        dx[r * h + i] += acc;
      }
    }
  }
  if (dw) {
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t r = 0; r < rows; ++r) {
        const double xv = x[r * h + i];
        for (std::size_t o = 0; o < m; ++o) dw[i * m + o] += xv * dy[r * m + o];
      }
  }
  if (db) bias_grad(rows, m, dy, db);
}

void affine_backward(std::size_t rows, std::size_t h, std::size_t m, const double* x,
                     const double* w, const double* dy, double* dx, double* dw, double* db) {
  const bool par = rows * h * m > kParallelWork;
  if (dx) {
    const auto n = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel for if (par) schedule(static)
    for (std::ptrdiff_t r = 0; r < n; ++r) {
      const auto row = static_cast<std::size_t>(r);
      for (std::size_t i = 0; i < h; ++i) {
        double acc = 0.0;
        for (std::size_t o = 0; o < m; ++o) acc += dy[row * m + o] * w[i * m + o];
        dx[row * h + i] += acc;
      }
    }
  }
  if (dw) {
    const auto hh = static_cast<std::ptrdiff_t>(h);
#pragma omp parallel for if (par) schedule(static)
    for (std::ptrdiff_t ii = 0; ii < hh; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      for (std::size_t r = 0; r < rows; ++r) {
        const double xv = x[r * h + i];
        for (std::size_t o = 0; o < m; ++o) dw[i * m + o] += xv * dy[r * m + o];
      }
    }
  }
  if (db) bias_grad(rows, m, dy, db);
}

}  // namespace daat::nn::kernels
