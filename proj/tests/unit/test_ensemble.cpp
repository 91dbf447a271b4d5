// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#include <boost/math/distributions/poisson.hpp>
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "qudd/ensemble.hpp"

using namespace qudd;

namespace {

const double kSigmaB = 12.58e-9;

}  // namespace

TEST_CASE("Poisson CDF agrees with Boost") {
  for (double mean : {0.5, 3.0, 33.0, 120.0, 650.0}) {
    const boost::math::poisson_distribution<double> dist(mean);
    for (int k : {0, 1, 5, 8, 30, 100, 700}) {
      const double expect = boost::math::cdf(dist, k);
      CHECK(std::abs(poisson_cdf(k, mean) - expect) <= 1e-13 + 1e-12 * expect);
    }
  }
  CHECK(poisson_cdf(-1, 3.0) == 0.0);
}

TEST_CASE("threshold detection error rates") {
  const auto r = detection_error_rates({33.0, 3.0, 8});
  CHECK(r.false_dark == doctest::Approx(boost::math::cdf(boost::math::poisson_distribution<double>(33.0), 8)).epsilon(1e-12));
  CHECK(r.false_dark == doctest::Approx(2.1203998558e-07).epsilon(1e-9));
  CHECK(r.false_bright == doctest::Approx(3.802992061675955e-03).epsilon(1e-10));
  CHECK(detection_error_rates({400.0, 3.0, 8}).false_dark < 1e-150);
}

TEST_CASE("Poisson sampling reproduces the mean and the threshold rates") {
  Stream s(51, 0);
  const int n = 200000;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += static_cast<double>(sample_poisson(33.0, s));
  CHECK(sum / n == doctest::Approx(33.0).epsilon(0.005));
  int bright = 0;
  for (int k = 0; k < n; ++k) bright += simulate_detection(0.0, {33.0, 3.0, 8}, s) == Outcome::bright;
  const double p = 3.802992e-3;
  CHECK(std::abs(bright / static_cast<double>(n) - p) < 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("detection model validation") {
  CHECK_THROWS_AS((DetectionModel{3.0, 33.0, 8}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((DetectionModel{33.0, -1.0, 8}).validate(), std::invalid_argument);
  CHECK_NOTHROW((DetectionModel{33.0, 3.0, 8}).validate());
}

TEST_CASE("bare two-level decay follows the Gaussian envelope") {
  const LevelSystem sys = qudd::test::beryllium_qutrit();
  const NoiseSpec noise({}, QuasiStaticComponent{kSigmaB});
  const std::size_t levels[] = {0, 2};
  const auto psi = PureState::superposition(3, levels);
  const std::vector<double> grid{0.2e-3, 0.5e-3, 1.0e-3, 1.5e-3, 2.5e-3};
  const auto curve = monte_carlo_curve(BareFamily{}, sys, noise, psi, grid, 10000, 5);
  const double dd = sys.sensitivity(0) - sys.sensitivity(2);
  for (const auto& p : curve.points) {
    const double expect = 0.5 + 0.5 * std::exp(-std::pow(dd * kSigmaB * p.T, 2) / 2);
    CHECK(std::abs(p.fidelity - expect) <= 3.0 * p.stderr);
  }
}

TEST_CASE("MLDD protects the equal superposition") {
  const LevelSystem sys = qudd::test::beryllium_qutrit();
  const NoiseSpec noise({{150.0, 10e-9, RandomPhase{}}}, QuasiStaticComponent{kSigmaB});
  const auto eq = PureState::uniform(3);
  const std::vector<double> bare_grid{3e-3}, mldd_grid{20e-3};
  const auto bare = monte_carlo_curve(BareFamily{}, sys, noise, eq, bare_grid, 4000, 6);
  const auto mldd = monte_carlo_curve(MlddFamily{{0, 1, 2}, 4}, sys, noise, eq, mldd_grid, 4000, 6);
  CHECK(mldd.points[0].fidelity > bare.points[0].fidelity + 0.1);
}

TEST_CASE("curves do not depend on the thread count") {
  const LevelSystem sys = qudd::test::beryllium_qutrit();
  const NoiseSpec noise({{150.0, 10e-9, RandomPhase{}}}, QuasiStaticComponent{kSigmaB});
  const std::vector<double> grid{1e-3, 4e-3, 9e-3};
  CurveOptions one, many;
  one.pulse_error = many.pulse_error = 0.02;
  one.detection = many.detection = DetectionModel{};
  many.threads = 4;
  const auto a = monte_carlo_curve(MlddFamily{{0, 1, 2}, 2}, sys, noise, PureState::uniform(3), grid, 999, 8, one);
  const auto b = monte_carlo_curve(MlddFamily{{0, 1, 2}, 2}, sys, noise, PureState::uniform(3), grid, 999, 8, many);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(a.points[i].fidelity == b.points[i].fidelity);
    CHECK(a.points[i].stderr == b.points[i].stderr);
  }
}

TEST_CASE("standard error scales as one over root trials") {
  const LevelSystem sys = qudd::test::beryllium_qutrit();
  const NoiseSpec noise({}, QuasiStaticComponent{kSigmaB});
  const std::vector<double> grid{1e-3};
  const auto small = monte_carlo_curve(BareFamily{}, sys, noise, PureState::uniform(3), grid, 400, 9);
  const auto large = monte_carlo_curve(BareFamily{}, sys, noise, PureState::uniform(3), grid, 40000, 9);
  CHECK(small.points[0].stderr / large.points[0].stderr == doctest::Approx(10.0).epsilon(0.1));
}

TEST_CASE("detection on and off agree for a well separated detector") {
  const LevelSystem sys = qudd::test::beryllium_qutrit();
  const NoiseSpec noise({}, QuasiStaticComponent{kSigmaB});
  const std::vector<double> grid{0.3e-3, 1e-3, 2e-3};
  CurveOptions on;
  on.detection = DetectionModel{200.0, 0.01, 20};
  const auto a = monte_carlo_curve(BareFamily{}, sys, noise, PureState::uniform(3), grid, 5000, 10);
  const auto b = monte_carlo_curve(BareFamily{}, sys, noise, PureState::uniform(3), grid, 5000, 11, on);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(a.points[i].fidelity - b.points[i].fidelity) <=
          4.0 * std::hypot(a.points[i].stderr, b.points[i].stderr));
}

TEST_CASE("curve arguments are validated") {
  const LevelSystem sys = qudd::test::beryllium_qutrit();
  const std::vector<double> empty, bad{2e-3, 1e-3}, ok{1e-3};
  CHECK_THROWS_AS(monte_carlo_curve(BareFamily{}, sys, {}, PureState::uniform(3), empty, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(monte_carlo_curve(BareFamily{}, sys, {}, PureState::uniform(3), bad, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(monte_carlo_curve(BareFamily{}, sys, {}, PureState::uniform(3), ok, 0, 1), std::invalid_argument);
}

TEST_CASE("pulse error calibration hits the target contrast") {
  const LevelSystem sys = qudd::test::beryllium_qutrit();
  CHECK(measure_contrast(0.0, sys, 4, 100, 1) == doctest::Approx(1.0));
  const double err = calibrate_pulse_error(0.976, sys, 4, 4000, 7);
  CHECK(err > 0.0);
  CHECK(measure_contrast(err, sys, 4, 4000, 7) == doctest::Approx(0.976).epsilon(1e-3));
}
