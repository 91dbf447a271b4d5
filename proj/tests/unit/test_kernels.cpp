// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <vector>

#include "doctest.h"
#include "qudd/kernels/phasor.hpp"
#include "qudd/random.hpp"

using namespace qudd;
using kernels::Isa;

namespace {

std::vector<double> random_vector(std::size_t n, double lo, double hi, Stream& s) {
  std::vector<double> v(n);
  for (auto& x : v) x = lo + (hi - lo) * s.uniform();
  return v;
}

}  // namespace

TEST_CASE("scalar kernels agree with libm") {
  const auto& k = kernels::table(Isa::scalar);
  Stream s(31, 0);
  const auto x = random_vector(257, -50.0, 50.0, s);
  std::vector<double> sn(x.size()), cs(x.size());
  k.sincos(x.data(), sn.data(), cs.data(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(sn[i] == std::sin(x[i]));
    CHECK(cs[i] == std::cos(x[i]));
  }
  const double w[3] = {0.5, 0.25, 0.25};
  const double ph[3] = {0.0, std::numbers::pi, std::numbers::pi};
  CHECK(std::abs(k.phasor_power_sum(w, 3, ph, 1)) < 1e-30);
}

TEST_CASE("AVX2 kernels match the scalar reference") {
  if (!kernels::available(Isa::avx2)) {
    MESSAGE("AVX2 kernels not available on this machine; skipped");
    return;
  }
  const auto& ref = kernels::table(Isa::scalar);
  const auto& vec = kernels::table(Isa::avx2);
  CHECK(kernels::name(vec.isa) == "avx2");
  Stream s(32, 0);

  for (double range : {1.0, 100.0, 1e5, 1e8}) {
    for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
      const auto x = random_vector(n, -range, range, s);
      std::vector<double> s0(n), c0(n), s1(n), c1(n);
      ref.sincos(x.data(), s0.data(), c0.data(), n);
      vec.sincos(x.data(), s1.data(), c1.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(s0[i] - s1[i]) < 1e-15 * std::max(1.0, std::abs(x[i]) * 1e-6));
        CHECK(std::abs(c0[i] - c1[i]) < 1e-15 * std::max(1.0, std::abs(x[i]) * 1e-6));
      }
    }
  }

  for (std::size_t levels : {2u, 3u, 5u}) {
    for (std::size_t n : {1u, 5u, 64u, 4096u}) {
      const auto w = random_vector(levels, 0.0, 1.0, s);
      const auto ph = random_vector(levels * n, -300.0, 300.0, s);
      const double a = ref.phasor_power_sum(w.data(), levels, ph.data(), n);
      const double b = vec.phasor_power_sum(w.data(), levels, ph.data(), n);
      CHECK(std::abs(a - b) <= 1e-13 * std::max(1.0, a));
    }
  }

  for (std::size_t n : {1u, 4u, 31u, 200u}) {
    const auto omega = random_vector(n, 10.0, 2e4, s);
    const auto alpha = random_vector(n, 0.0, 6.3, s);
    const auto coef = random_vector(n, -1e-11, 1e-11, s);
    const double a = ref.harmonic_integral(coef.data(), omega.data(), alpha.data(), n, 1.3e-3, 47e-3);
    const double b = vec.harmonic_integral(coef.data(), omega.data(), alpha.data(), n, 1.3e-3, 47e-3);
    CHECK(std::abs(a - b) <= 1e-13 * (std::abs(a) + 1e-11 * n));
  }
}

TEST_CASE("AVX2 sincos passes special values through") {
  if (!kernels::available(Isa::avx2)) return;
  const auto& vec = kernels::table(Isa::avx2);
  const double x[4] = {0.0, -0.0, std::numbers::pi / 2, 1e300};
  double sn[4], cs[4];
  vec.sincos(x, sn, cs, 4);
  CHECK(sn[0] == 0.0);
  CHECK(cs[0] == 1.0);
  CHECK(sn[2] == doctest::Approx(1.0));
  CHECK(sn[3] == std::sin(1e300));
}

TEST_CASE("active table is one of the known variants") {
  const auto& a = kernels::active();
  CHECK((a.isa == Isa::scalar || a.isa == Isa::avx2));
  CHECK(kernels::available(Isa::scalar));
}
