// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string_view>

// Batched trigonometric kernels behind the hot loops: the α-quadrature of the
// decay model and the closed-form harmonic field integrals. Each kernel has a
// scalar reference (libm sin/cos) and, on x86-64, an AVX2+FMA variant with a
// vectorized sincos. The variant is chosen once at runtime from cpuid and can
// be forced with QUDD_KERNELS=scalar|avx2.

namespace qudd::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;

  /// s[k] = sin(x[k]), c[k] = cos(x[k]) for k < n.
  void (*sincos)(const double* x, double* s, double* c, std::size_t n);

  /// Σ_k |Σ_i w[i] exp(i·phases[i·n + k])|² over k < n.
  /// `phases` is level-major: `levels` rows of n samples each.
  double (*phasor_power_sum)(const double* weights, std::size_t levels, const double* phases,
                             std::size_t n);

  /// Σ_j coef[j]·(sin(omega[j]·t1 + alpha[j]) − sin(omega[j]·t0 + alpha[j])).
  double (*harmonic_integral)(const double* coef, const double* omega, const double* alpha,
                              std::size_t n, double t0, double t1);
};

bool available(Isa isa);
const KernelTable& table(Isa isa);
/// The table selected for this process.
const KernelTable& active();
std::string_view name(Isa isa);

namespace detail {
extern const KernelTable scalar_table;
#if defined(QUDD_HAVE_AVX2_KERNELS)
extern const KernelTable avx2_table;
#endif
}  // namespace detail

}  // namespace qudd::kernels
