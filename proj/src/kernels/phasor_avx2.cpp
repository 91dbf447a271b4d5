// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

// Compiled with -mavx2 -mfma. Only reached after the dispatcher has confirmed
// both features through cpuid.

#include <immintrin.h>

#include <cmath>

#include "qudd/kernels/phasor.hpp"

namespace qudd::kernels {
namespace {

// π/2 split into three parts; the leading parts have trailing zero bits so
// q·part is exact for |q| < 2^29.
constexpr double kPio2Hi = 1.57079625129699707031e+00;
constexpr double kPio2Mid = 7.54978941586159635336e-08;
constexpr double kPio2Lo = 5.39030285815811905290e-15;
constexpr double kTwoOverPi = 6.36619772367581382433e-01;

// Beyond this the three-part reduction loses digits; such blocks go through libm.
constexpr double kReductionLimit = 1.0e7;

// Minimax coefficients on [-π/4, π/4] (Cephes sin.c).
constexpr double kSin[6] = {1.58962301576546568060e-10, -2.50507477628578072866e-08, 2.75573136213857245213e-06,
                            -1.98412698295895385996e-04, 8.33333333332211858878e-03, -1.66666666666666307295e-01};
constexpr double kCos[6] = {-1.13585365213876817300e-11, 2.08757008419747316778e-09, -2.75573141792967388112e-07,
                            2.48015872888517045348e-05,  -1.38888888888730564116e-03, 4.16666666666665929218e-02};

inline __m256d poly6(__m256d z, const double* c) {
  __m256d p = _mm256_set1_pd(c[0]);
  for (int i = 1; i < 6; ++i) p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(c[i]));
  return p;
}

inline bool needs_libm(__m256d x) {
  const __m256d absx = _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
  // Also catches NaN (unordered compare is true).
  const __m256d big = _mm256_cmp_pd(absx, _mm256_set1_pd(kReductionLimit), _CMP_NLT_UQ);
  return _mm256_movemask_pd(big) != 0;
}

inline void sincos4(__m256d x, __m256d& s, __m256d& c) {
  const __m256d q = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kTwoOverPi)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2Hi), x);
  r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2Mid), r);
  r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2Lo), r);

  const __m256d z = _mm256_mul_pd(r, r);
  const __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(r, z), poly6(z, kSin), r);
  const __m256d cos_r = _mm256_fmadd_pd(_mm256_mul_pd(z, z), poly6(z, kCos),
                                        _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, _mm256_set1_pd(1.0)));

  // Quadrant bookkeeping on q mod 4.
  const __m128i qi = _mm256_cvtpd_epi32(q);
  const __m128i one = _mm_set1_epi32(1);
  const __m128i two = _mm_set1_epi32(2);
  const __m128i swap32 = _mm_cmpeq_epi32(_mm_and_si128(qi, one), one);
  const __m128i sneg32 = _mm_cmpeq_epi32(_mm_and_si128(qi, two), two);
  const __m128i cneg32 = _mm_cmpeq_epi32(_mm_and_si128(_mm_add_epi32(qi, one), two), two);
  const __m256d swap = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(swap32));
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d sflip = _mm256_and_pd(_mm256_castsi256_pd(_mm256_cvtepi32_epi64(sneg32)), sign);
  const __m256d cflip = _mm256_and_pd(_mm256_castsi256_pd(_mm256_cvtepi32_epi64(cneg32)), sign);

  s = _mm256_xor_pd(_mm256_blendv_pd(sin_r, cos_r, swap), sflip);
  c = _mm256_xor_pd(_mm256_blendv_pd(cos_r, sin_r, swap), cflip);
}

inline void sincos4_checked(__m256d x, __m256d& s, __m256d& c) {
  if (!needs_libm(x)) {
    sincos4(x, s, c);
    return;
  }
  alignas(32) double xv[4], sv[4], cv[4];
  _mm256_store_pd(xv, x);
  for (int i = 0; i < 4; ++i) {
    sv[i] = std::sin(xv[i]);
    cv[i] = std::cos(xv[i]);
  }
  s = _mm256_load_pd(sv);
  c = _mm256_load_pd(cv);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline __m256i tail_mask(std::size_t remaining) {
  const __m256i idx = _mm256_set_epi64x(3, 2, 1, 0);
  return _mm256_cmpgt_epi64(_mm256_set1_epi64x(static_cast<long long>(remaining)), idx);
}

void sincos_avx2(const double* x, double* s, double* c, std::size_t n) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d sv, cv;
    sincos4_checked(_mm256_loadu_pd(x + k), sv, cv);
    _mm256_storeu_pd(s + k, sv);
    _mm256_storeu_pd(c + k, cv);
  }
  if (k < n) {
    const __m256i mask = tail_mask(n - k);
    __m256d sv, cv;
    sincos4_checked(_mm256_maskload_pd(x + k, mask), sv, cv);
    _mm256_maskstore_pd(s + k, mask, sv);
    _mm256_maskstore_pd(c + k, mask, cv);
  }
}

double phasor_power_sum_avx2(const double* w, std::size_t levels, const double* phases, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d re = _mm256_setzero_pd(), im = _mm256_setzero_pd();
    for (std::size_t i = 0; i < levels; ++i) {
      __m256d s, c;
      sincos4_checked(_mm256_loadu_pd(phases + i * n + k), s, c);
      const __m256d wi = _mm256_set1_pd(w[i]);
      re = _mm256_fmadd_pd(wi, c, re);
      im = _mm256_fmadd_pd(wi, s, im);
    }
    acc = _mm256_fmadd_pd(re, re, acc);
    acc = _mm256_fmadd_pd(im, im, acc);
  }
  if (k < n) {
    const __m256i mask = tail_mask(n - k);
    const __m256d keep = _mm256_castsi256_pd(mask);
    __m256d re = _mm256_setzero_pd(), im = _mm256_setzero_pd();
    for (std::size_t i = 0; i < levels; ++i) {
      __m256d s, c;
      sincos4_checked(_mm256_maskload_pd(phases + i * n + k, mask), s, c);
      const __m256d wi = _mm256_set1_pd(w[i]);
      re = _mm256_fmadd_pd(wi, c, re);
      im = _mm256_fmadd_pd(wi, s, im);
    }
    re = _mm256_and_pd(re, keep);
    im = _mm256_and_pd(im, keep);
    acc = _mm256_fmadd_pd(re, re, acc);
    acc = _mm256_fmadd_pd(im, im, acc);
  }
  return hsum(acc);
}

double harmonic_integral_avx2(const double* coef, const double* omega, const double* alpha, std::size_t n,
                              double t0, double t1) {
  const __m256d vt0 = _mm256_set1_pd(t0);
  const __m256d vt1 = _mm256_set1_pd(t1);
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  auto step = [&](__m256d cf, __m256d om, __m256d al) {
    __m256d s1, c1, s0, c0;
    sincos4_checked(_mm256_fmadd_pd(om, vt1, al), s1, c1);
    sincos4_checked(_mm256_fmadd_pd(om, vt0, al), s0, c0);
    acc = _mm256_fmadd_pd(cf, _mm256_sub_pd(s1, s0), acc);
  };
  for (; j + 4 <= n; j += 4)
    step(_mm256_loadu_pd(coef + j), _mm256_loadu_pd(omega + j), _mm256_loadu_pd(alpha + j));
  if (j < n) {
    // Masked-off lanes load as zero, so their coefficient contributes nothing.
    const __m256i mask = tail_mask(n - j);
    step(_mm256_maskload_pd(coef + j, mask), _mm256_maskload_pd(omega + j, mask), _mm256_maskload_pd(alpha + j, mask));
  }
  return hsum(acc);
}

}  // namespace

namespace detail {
const KernelTable avx2_table{Isa::avx2, &sincos_avx2, &phasor_power_sum_avx2, &harmonic_integral_avx2};
}

}  // namespace qudd::kernels
