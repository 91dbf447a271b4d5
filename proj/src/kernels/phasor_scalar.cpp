// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "qudd/kernels/phasor.hpp"

namespace qudd::kernels {
namespace {

void sincos_scalar(const double* x, double* s, double* c, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    s[k] = std::sin(x[k]);
    c[k] = std::cos(x[k]);
  }
}

double phasor_power_sum_scalar(const double* w, std::size_t levels, const double* phases, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < levels; ++i) {
      const double phi = phases[i * n + k];
      re += w[i] * std::cos(phi);
      im += w[i] * std::sin(phi);
    }
    acc += re * re + im * im;
  }
  return acc;
}

double harmonic_integral_scalar(const double* coef, const double* omega, const double* alpha, std::size_t n,
                                double t0, double t1) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    acc += coef[j] * (std::sin(omega[j] * t1 + alpha[j]) - std::sin(omega[j] * t0 + alpha[j]));
  return acc;
}

}  // namespace

namespace detail {
const KernelTable scalar_table{Isa::scalar, &sincos_scalar, &phasor_power_sum_scalar, &harmonic_integral_scalar};
}

}  // namespace qudd::kernels
