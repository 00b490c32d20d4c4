#include <cmath>

#include "holofisher/kernels.hpp"

namespace holofisher::kernels {
namespace {

// Argument assembly mirrors the fused-multiply-add order of the SIMD
// variants, so backends differ only in the exp implementation.
inline double row_exponent(const Row& row, double c, double s) {
  return std::fma(row.ecos, c, std::fma(row.esin, s, row.e0));
}

void accum_cvec_scalar(const Row& row, const double* cg, const double* sg, std::size_t n,
                       double out[4]) {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double c = cg[j], s = sg[j];
    const double e = std::exp(row_exponent(row, c, s));
    const double y11 = std::fma(row.y11c, c, row.y11s * s);
    const double y22 = std::fma(row.y22c, c, row.y22s * s);
    a0 += e;
    a1 += y11 * e;
    a2 += y22 * e;
    a3 += row.y33 * e;
  }
  out[0] += a0;
  out[1] += a1;
  out[2] += a2;
  out[3] += a3;
}

double moment_scalar(const Row& row, const double* cg, const double* sg, std::size_t n,
                     int a1, int a2, int a3) {
  double y33p = 1.0;
  for (int k = 0; k < a3; ++k) y33p *= row.y33;
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double c = cg[j], s = sg[j];
    const double e = std::exp(row_exponent(row, c, s));
    const double y11 = std::fma(row.y11c, c, row.y11s * s);
    const double y22 = std::fma(row.y22c, c, row.y22s * s);
    double m = y33p;
    for (int k = 0; k < a1; ++k) m *= y11;
    for (int k = 0; k < a2; ++k) m *= y22;
    acc += m * e;
  }
  return acc;
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend backend{"scalar", accum_cvec_scalar, moment_scalar};
  return backend;
}

}  // namespace holofisher::kernels
