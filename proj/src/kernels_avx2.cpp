// AVX2+FMA quadrature row kernels. Compiled only on x86_64 (see CMake);
// availability is still gated at runtime by the dispatcher.

#include <cmath>
#include <cstddef>

#include <immintrin.h>

#include "holofisher/kernels.hpp"

namespace holofisher::kernels {
namespace {

// Cephes-style exp: argument reduction against log 2 split in two parts,
// rational approximation of expm1 on [-log2/2, log2/2], exponent rebuilt by
// bit insertion. ~1 ulp on [-708, 708]; below -708 flushes to exact zero
// (absolute error < 4e-308), above +708 clamps (callers keep exponents <= 0
// via shifts, so the clamp is never reached in the quadrature).
inline __m256d exp_pd(__m256d x) {
  const __m256d hi = _mm256_set1_pd(708.0);
  const __m256d lo = _mm256_set1_pd(-708.0);
  const __m256d flush = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  x = _mm256_min_pd(hi, _mm256_max_pd(lo, x));

  const __m256d log2e = _mm256_set1_pd(1.44269504088896340736);
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
  __m256d r = _mm256_fnmadd_pd(n, c1, x);
  r = _mm256_fnmadd_pd(n, c2, r);
  const __m256d r2 = _mm256_mul_pd(r, r);

  __m256d p = _mm256_set1_pd(1.26177193074810590878e-4);
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(3.02994407707441961300e-2));
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(9.99999999999999999910e-1));
  p = _mm256_mul_pd(p, r);

  __m256d q = _mm256_set1_pd(3.00198505138664455042e-6);
  q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(2.52448340349684104192e-3));
  q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(2.27265548208155028766e-1));
  q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(2.00000000000000000005e0));

  __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

  // 2^n: |n| <= 1022 after the clamp, so the biased exponent stays normal.
  const __m128i n32 = _mm256_cvtpd_epi32(n);
  __m256i n64 = _mm256_cvtepi32_epi64(n32);
  n64 = _mm256_add_epi64(n64, _mm256_set1_epi64x(1023));
  n64 = _mm256_slli_epi64(n64, 52);
  const __m256d r_full = _mm256_mul_pd(e, _mm256_castsi256_pd(n64));
  return _mm256_andnot_pd(flush, r_full);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double pow_small(double v, int p) {
  double r = 1.0;
  for (int k = 0; k < p; ++k) r *= v;
  return r;
}

void accum_cvec_avx2(const Row& row, const double* cg, const double* sg, std::size_t n,
                     double out[4]) {
  const __m256d ecos = _mm256_set1_pd(row.ecos);
  const __m256d esin = _mm256_set1_pd(row.esin);
  const __m256d e0 = _mm256_set1_pd(row.e0);
  const __m256d y11c = _mm256_set1_pd(row.y11c);
  const __m256d y11s = _mm256_set1_pd(row.y11s);
  const __m256d y22c = _mm256_set1_pd(row.y22c);
  const __m256d y22s = _mm256_set1_pd(row.y22s);
  const __m256d y33 = _mm256_set1_pd(row.y33);
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  __m256d a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();

  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d c = _mm256_loadu_pd(cg + j);
    const __m256d s = _mm256_loadu_pd(sg + j);
    const __m256d e = exp_pd(_mm256_fmadd_pd(ecos, c, _mm256_fmadd_pd(esin, s, e0)));
    const __m256d y11 = _mm256_fmadd_pd(y11c, c, _mm256_mul_pd(y11s, s));
    const __m256d y22 = _mm256_fmadd_pd(y22c, c, _mm256_mul_pd(y22s, s));
    a0 = _mm256_add_pd(a0, e);
    a1 = _mm256_fmadd_pd(y11, e, a1);
    a2 = _mm256_fmadd_pd(y22, e, a2);
    a3 = _mm256_fmadd_pd(y33, e, a3);
  }
  double s0 = hsum(a0), s1 = hsum(a1), s2 = hsum(a2), s3 = hsum(a3);
  for (; j < n; ++j) {
    const double c = cg[j], s = sg[j];
    const double e = std::exp(row.ecos * c + row.esin * s + row.e0);
    s0 += e;
    s1 += (row.y11c * c + row.y11s * s) * e;
    s2 += (row.y22c * c + row.y22s * s) * e;
    s3 += row.y33 * e;
  }
  out[0] += s0;
  out[1] += s1;
  out[2] += s2;
  out[3] += s3;
}

double moment_avx2(const Row& row, const double* cg, const double* sg, std::size_t n,
                   int a1, int a2, int a3) {
  const __m256d ecos = _mm256_set1_pd(row.ecos);
  const __m256d esin = _mm256_set1_pd(row.esin);
  const __m256d e0 = _mm256_set1_pd(row.e0);
  const __m256d y11c = _mm256_set1_pd(row.y11c);
  const __m256d y11s = _mm256_set1_pd(row.y11s);
  const __m256d y22c = _mm256_set1_pd(row.y22c);
  const __m256d y22s = _mm256_set1_pd(row.y22s);
  const double y33p = pow_small(row.y33, a3);
  __m256d acc = _mm256_setzero_pd();

  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d c = _mm256_loadu_pd(cg + j);
    const __m256d s = _mm256_loadu_pd(sg + j);
    const __m256d e = exp_pd(_mm256_fmadd_pd(ecos, c, _mm256_fmadd_pd(esin, s, e0)));
    const __m256d y11 = _mm256_fmadd_pd(y11c, c, _mm256_mul_pd(y11s, s));
    const __m256d y22 = _mm256_fmadd_pd(y22c, c, _mm256_mul_pd(y22s, s));
    __m256d m = _mm256_set1_pd(y33p);
    for (int k = 0; k < a1; ++k) m = _mm256_mul_pd(m, y11);
    for (int k = 0; k < a2; ++k) m = _mm256_mul_pd(m, y22);
    acc = _mm256_fmadd_pd(m, e, acc);
  }
  double sum = hsum(acc);
  for (; j < n; ++j) {
    const double c = cg[j], s = sg[j];
    const double e = std::exp(row.ecos * c + row.esin * s + row.e0);
    const double y11 = row.y11c * c + row.y11s * s;
    const double y22 = row.y22c * c + row.y22s * s;
    sum += pow_small(y11, a1) * pow_small(y22, a2) * y33p * e;
  }
  return sum;
}

}  // namespace

const Backend* avx2_backend_impl() {
  static const Backend backend{"avx2", accum_cvec_avx2, moment_avx2};
  return &backend;
}

}  // namespace holofisher::kernels
