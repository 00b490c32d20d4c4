#pragma once

#include <cstddef>
#include <vector>

namespace holofisher::kernels {

/// Per-row constants for the innermost quadrature loop (the gamma sweep at
/// fixed alpha and u = cos beta). At node j the exponent is
/// ecos*cg[j] + esin*sg[j] + e0, and the diagonal matrix entries are
/// y11 = y11c*cg[j] + y11s*sg[j], y22 = y22c*cg[j] + y22s*sg[j], y33 const.
struct Row {
  double ecos, esin, e0;
  double y11c, y11s;
  double y22c, y22s;
  double y33;
};

struct Backend {
  const char* name;
  /// out[0..3] += sum_j (1, y11, y22, y33) * exp(exponent_j)
  void (*accum_cvec)(const Row&, const double* cg, const double* sg, std::size_t n,
                     double out[4]);
  /// sum_j y11^a1 * y22^a2 * y33^a3 * exp(exponent_j), powers in [0,4]
  double (*moment)(const Row&, const double* cg, const double* sg, std::size_t n,
                   int a1, int a2, int a3);
};

/// Reference implementation (libm exp); always available.
const Backend& scalar_backend();

/// AVX2+FMA variant; nullptr when not compiled in or not supported by the CPU.
const Backend* avx2_backend();

/// Runtime selection: best available, overridable with
/// HOLOFISHER_KERNEL={scalar,avx2} in the environment.
const Backend& active_backend();

std::vector<const Backend*> available_backends();

}  // namespace holofisher::kernels
