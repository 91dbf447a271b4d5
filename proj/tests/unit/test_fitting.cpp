// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#include <Eigen/Dense>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "qudd/evolution.hpp"
#include "qudd/fitting.hpp"

using namespace qudd;

namespace {

// d(T) for one harmonic: each pairwise phase difference is R·cos(α + θ), so
// averaging over α gives Σp² + 2Σ_{i<j} p_i p_j J0(R_ij).
double bessel_oracle(double T, int N, double amplitude, const std::vector<double>& p, const LevelSystem& sys) {
  auto phases = [&](double alpha) {
    const TrialNoise t = TrialNoise::make(0.0, {150.0}, {amplitude}, {alpha});
    if (N > 0) return phases_mldd(T, N, sys, t).phases;
    std::vector<double> out;
    for (std::size_t i = 0; i < sys.dim(); ++i) out.push_back(sys.sensitivity(i) * integrate_field(t, 0.0, T));
    return out;
  };
  const auto u = phases(0.0), v = phases(std::numbers::pi / 2);
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    d += p[i] * p[i];
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const double R = std::hypot(u[i] - u[j], v[i] - v[j]);
      d += 2.0 * p[i] * p[j] * boost::math::cyl_bessel_j(0, R);
    }
  }
  return d;
}

}  // namespace

TEST_CASE("model at T = 0 is the pulse contrast") {
  const LevelSystem sys = qudd::test::beryllium_qutrit();
  DecayModelParams p;
  p.T2 = 5e-3;
  p.g = 0.976;
  p.harmonic_amplitudes = {10e-9};
  const double f = model_fidelity(0.0, 4, p, sys);
  CHECK(f == doctest::Approx(std::pow(0.976, 4) * 2.0 / 3.0 + 1.0 / 3.0).epsilon(1e-12));
  CHECK(f == doctest::Approx(0.938).epsilon(1e-3));
  CHECK(model_fidelity(1.0, 0, p, sys) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("harmonic average matches the Bessel closed form") {
  const LevelSystem sys = qudd::test::beryllium_qutrit();
  DecayModelParams p;
  p.harmonic_amplitudes = {10e-9};
  const std::vector<std::vector<double>> pops{{1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.0, 0.5, 0.5}, {0.5, 0.3, 0.2}};
  for (const auto& pop : pops) {
    ModelOptions mo;
    mo.populations = pop;
    p.floor = superposition_floor(pop);
    for (int N : {0, 1, 2, 4}) {
      for (double T : {0.4e-3, 2e-3, 7.7e-3, 25e-3}) {
        const double got = model_fidelity(T, N, p, sys, mo);
        CHECK(got == doctest::Approx(bessel_oracle(T, N, 10e-9, pop, sys)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("model parameter validation") {
  const LevelSystem sys = qudd::test::beryllium_qutrit();
  DecayModelParams p;
  p.g = 1.2;
  CHECK_THROWS_AS(model_fidelity(1e-3, 1, p, sys), std::invalid_argument);
  p.g = 0.9;
  p.T2 = -1.0;
  CHECK_THROWS_AS(model_fidelity(1e-3, 1, p, sys), std::invalid_argument);
  p.T2 = 1e-3;
  CHECK_THROWS_AS(model_fidelity(1e-3, 1, p, LevelSystem({1.0, 2.0})), std::invalid_argument);
  CHECK(superposition_floor({0.5, 0.5}) == 0.5);
}

TEST_CASE("joint fit recovers noiseless parameters") {
  const LevelSystem sys = qudd::test::beryllium_qutrit();
  const double T2[] = {1.36e-3, 6.1e-3, 18.4e-3, 28.0e-3};
  const int N[] = {0, 1, 2, 4};
  std::vector<DecayDataset> data;
  for (int k = 0; k < 4; ++k) {
    DecayModelParams p;
    p.T2 = T2[k];
    p.g = 0.976;
    p.harmonic_amplitudes = {10e-9};
    std::vector<double> grid;
    for (int i = 0; i < 25; ++i) grid.push_back(T2[k] * 0.1 * std::pow(20.0, i / 24.0));
    data.push_back({synthesize_curve(grid, N[k], p, sys, 300, std::nullopt), N[k], {}});
  }
  FitOptions opt;
  opt.bootstrap = 20;
  const JointFit fit = fit_joint(data, sys, {}, opt);
  for (int k = 0; k < 4; ++k) CHECK(fit.params[k].T2 == doctest::Approx(T2[k]).epsilon(1e-6));
  CHECK(fit.at("g").value == doctest::Approx(0.976).epsilon(1e-6));
  CHECK(fit.at("amp[0]").value == doctest::Approx(10e-9).epsilon(1e-6));
  CHECK(fit.diagnostics.converged);
  CHECK(fit.diagnostics.bootstrap_resamples + fit.diagnostics.bootstrap_failures == 20);
  for (std::size_t i = 1; i < fit.diagnostics.history.size(); ++i)
    CHECK(fit.diagnostics.history[i] <= fit.diagnostics.history[i - 1]);
}

TEST_CASE("Gaussian-only fit matches the log-linear closed form") {
  const LevelSystem sys = qudd::test::beryllium_qutrit();
  DecayModelParams truth;
  truth.T2 = 28e-3;
  truth.g = 0.97;
  truth.harmonic_amplitudes = {0.0};
  std::vector<double> grid;
  for (int i = 1; i <= 20; ++i) grid.push_back(2.5e-3 * i);
  const DecayCurve curve = synthesize_curve(grid, 4, truth, sys, 300, std::nullopt);

  // ln((F − 1/3)/(2/3)) = 4·ln g − T²/T2², solved by least squares in (ln g, 1/T2²).
  Eigen::MatrixXd A(grid.size(), 2);
  Eigen::VectorXd y(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    A(i, 0) = 4.0;
    A(i, 1) = -grid[i] * grid[i];
    y(i) = std::log((curve.points[i].fidelity - 1.0 / 3.0) / (2.0 / 3.0));
  }
  const Eigen::Vector2d sol = A.colPivHouseholderQr().solve(y);
  const double g_oracle = std::exp(sol(0)), T2_oracle = 1.0 / std::sqrt(sol(1));

  JointFitSpec spec;
  spec.fit_amplitudes = false;
  spec.fixed_amplitudes = {0.0};
  FitOptions opt;
  opt.bootstrap = 0;
  const JointFit fit = fit_joint({{curve, 4, {}}}, sys, spec, opt);
  CHECK(fit.params[0].T2 == doctest::Approx(T2_oracle).epsilon(1e-8));
  CHECK(fit.params[0].g == doctest::Approx(g_oracle).epsilon(1e-8));
}

TEST_CASE("joint fit rejects degenerate input") {
  const LevelSystem sys = qudd::test::beryllium_qutrit();
  DecayCurve flat;
  flat.trials = 300;
  for (int i = 1; i <= 6; ++i) flat.points.push_back({i * 1e-3, 0.5, 0.01});
  CHECK_THROWS_AS(fit_joint({{flat, 1, {}}}, sys), FitError);
  DecayCurve tiny = flat;
  tiny.points.resize(3);
  CHECK_THROWS_AS(fit_joint({{tiny, 1, {}}}, sys), std::invalid_argument);
  CHECK_THROWS_AS(fit_joint({}, sys), std::invalid_argument);
}

TEST_CASE("Ramsey fit recovers the coherence time") {
  Stream s(61, 0);
  DecayCurve curve;
  curve.trials = 300;
  for (int i = 1; i <= 30; ++i) {
    const double t = 0.1e-3 * i;
    const double f = 0.5 * std::exp(-std::pow(t / 1.04e-3, 2)) + 0.5;
    int k = 0;
    for (int n = 0; n < 300; ++n) k += s.uniform() < f;
    const double m = k / 300.0;
    curve.points.push_back({t, m, std::sqrt(m * (1 - m) / 300.0)});
  }
  FitOptions opt;
  opt.bootstrap = 50;
  const FitReport r = fit_ramsey(curve, opt);
  CHECK(r.at("T2").value == doctest::Approx(1.04e-3).epsilon(0.10));
  CHECK(r.at("a").value == doctest::Approx(0.5).epsilon(0.1));
  CHECK(r.at("T2").uncertainty > 0.0);
}

TEST_CASE("Ramsey fit refuses curves without decay") {
  DecayCurve curve;
  curve.trials = 300;
  Stream s(62, 0);
  for (int i = 1; i <= 20; ++i) curve.points.push_back({1e-3 * i, 0.5 + 0.01 * s.normal(), 0.03});
  CHECK_THROWS_AS(fit_ramsey(curve), FitError);
}

TEST_CASE("RB fit recovers gate and SPAM errors") {
  const double eps = 0.002, eps_im = 0.01;
  Stream s(63, 0);
  std::vector<SurvivalPoint> pts;
  for (int l : {1, 10, 50, 100, 200, 400}) {
    const double f = 0.5 + 0.5 * (1 - 2 * eps_im) * std::pow(1 - 2 * eps, l);
    int k = 0;
    for (int n = 0; n < 30000; ++n) k += s.uniform() < f;
    const double m = k / 30000.0;
    pts.push_back({l, m, std::sqrt(m * (1 - m) / 30000.0), 30, 1000});
  }
  FitOptions opt;
  opt.bootstrap = 50;
  const FitReport r = fit_rb(pts, opt);
  CHECK(r.at("epsilon").value == doctest::Approx(eps).epsilon(0.2));
  CHECK(r.at("epsilon_im").value == doctest::Approx(eps_im).epsilon(0.2));

  std::vector<SurvivalPoint> perfect;
  for (int l : {1, 10, 100}) perfect.push_back({l, 1.0, 0.0, 30, 1000});
  CHECK(fit_rb(perfect, opt).at("epsilon").value < 1e-4);

  pts[0].mean = 1.2;
  CHECK_THROWS_AS(fit_rb(pts), std::invalid_argument);
  CHECK_THROWS_AS(fit_rb({{1, 0.9, 0.01, 30, 1000}, {1, 0.9, 0.01, 30, 1000}, {2, 0.8, 0.01, 30, 1000}}),
                  std::invalid_argument);
}

TEST_CASE("synthesized curves are reproducible") {
  const LevelSystem sys = qudd::test::beryllium_qutrit();
  DecayModelParams p;
  p.T2 = 5e-3;
  const std::vector<double> grid{1e-3, 2e-3, 4e-3};
  const auto a = synthesize_curve(grid, 1, p, sys, 300, 5);
  const auto b = synthesize_curve(grid, 1, p, sys, 300, 5);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(a.points[i].fidelity == b.points[i].fidelity);
    CHECK(std::round(a.points[i].fidelity * 300) == doctest::Approx(a.points[i].fidelity * 300));
  }
}
