// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance checks. Each criterion prints one PASS/FAIL line; tolerances and
// runtime limits are fixed below. Usage: qudd_acceptance [--criterion K] [--threads N]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "qudd/breit_rabi.hpp"
#include "qudd/cli/commands.hpp"
#include "qudd/cli/config.hpp"
#include "qudd/curve_io.hpp"
#include "qudd/ensemble.hpp"
#include "qudd/evolution.hpp"
#include "qudd/fitting.hpp"
#include "qudd/random.hpp"
#include "qudd/rb_sim.hpp"
#include "qudd/sequences.hpp"

#ifndef QUDD_CONFIG_DIR
#define QUDD_CONFIG_DIR "configs"
#endif

namespace {

using namespace qudd;
using Clock = std::chrono::steady_clock;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double limit_s;
  std::function<Verdict()> run;
};

unsigned g_threads = 1;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

HalfInt h(double v) { return HalfInt::from_double(v); }

const std::vector<LevelSpec>& qutrit_levels() {
  static const std::vector<LevelSpec> levels{{h(2), h(2)}, {h(2), h(1)}, {h(1), h(1)}};
  return levels;
}

HyperfineAtom beryllium() { return load_atoms(cli::default_data_dir() + "/atoms.json").at("9Be+"); }

LevelSystem qutrit(double B = 13.23e-3) { return sensitivities_for(qutrit_levels(), beryllium(), B); }

PureState random_state(std::size_t dim, Stream& s) {
  std::vector<Complex> a(dim);
  for (auto& c : a) c = {s.normal(), s.normal()};
  return PureState(std::move(a));
}

cli::ExperimentConfig load_config(const std::string& file) {
  return cli::parse_config(cli::load_json_file(std::string(QUDD_CONFIG_DIR) + "/" + file), cli::default_data_dir());
}

// 1. Constant field: the MLDD net map is a global phase.
Verdict mldd_identity() {
  const LevelSystem sys = qutrit();
  const std::array<LevelTriple, 6> orders{LevelTriple{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  Stream s(11, 0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double tau = std::exp(std::log(1e-6) + s.uniform() * std::log(1e4));  // 1 µs to 10 ms
    const double beta = (2.0 * s.uniform() - 1.0) * 1e-6;                      // ±1 µT
    const PureState psi = random_state(3, s);
    const auto seq = build_mldd(orders[s.below(6)], tau, 1);
    const auto trial = TrialNoise::make(beta, {}, {}, {});
    worst = std::max(worst, 1.0 - retrieval_fidelity(psi, propagate_unitary(seq, sys, trial, psi)));
  }
  return {worst <= 1e-10, fmt("max 1-F = %.2e over 1000 draws (tol 1e-10)", worst)};
}

// 2. Phase-accumulation route against full unitary propagation.
Verdict engine_equivalence() {
  const LevelSystem sys = qutrit();
  NoiseSpec noise({{150.0, 10e-9, RandomPhase{}}, {50.0, 4e-9, RandomPhase{}}, {350.0, 3e-9, RandomPhase{}}},
                  QuasiStaticComponent{12.58e-9});
  const int Ns[] = {1, 2, 4, 8};
  Stream s(12, 0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int N = Ns[k % 4];
    const double T = 1e-3 + 49e-3 * s.uniform();
    const TrialNoise trial = sample_trial(noise, s);
    const PureState psi = random_state(3, s);
    const bool cyclic = (k / 4) % 2 == 1;
    const SequenceFamily fam = cyclic ? SequenceFamily{CyclicFamily{N}} : SequenceFamily{MlddFamily{{0, 1, 2}, N}};
    const double unitary = retrieval_fidelity(psi, propagate_unitary(build_for_duration(fam, sys, T), sys, trial, psi));
    const double analytic = trial_fidelity(psi, phases_mldd(T, N, sys, trial, cyclic ? cyclic_dwell() : mldd_dwell()));
    worst = std::max(worst, std::abs(unitary - analytic));
  }
  return {worst <= 1e-9, fmt("max |dF| = %.2e over 1000 trials, N in {1,2,4,8} (tol 1e-9)", worst)};
}

// 3. Breit-Rabi transition frequencies and sensitivities at 13.23 mT.
Verdict breit_rabi_check() {
  const HyperfineAtom atom = beryllium();
  const double B = 13.23e-3;
  const auto& L = qutrit_levels();
  const double f[3] = {std::abs(transition_frequency(atom, L[0], L[1], B)),
                       std::abs(transition_frequency(atom, L[0], L[2], B)),
                       std::abs(transition_frequency(atom, L[1], L[2], B))};
  const double f_ref[3] = {116.293e6, 995.804e6, 1112.097e6};
  const LevelSystem sys = sensitivities_for(L, atom, B);
  const double d_ref[3] = {14.01, 3.21, -3.20};  // MHz/mT
  bool ok = true;
  std::string detail = "f/MHz:";
  for (int i = 0; i < 3; ++i) {
    const double rel = std::abs(f[i] / f_ref[i] - 1.0);
    ok &= rel <= 5e-4;
    detail += fmt(" %.4f (%.3f%%)", f[i] * 1e-6, 100.0 * rel);
  }
  detail += "; d/(MHz/mT):";
  for (int i = 0; i < 3; ++i) {
    const double d = sys.sensitivity(i) / kTwoPi * 1e-9;
    const double rel = std::abs(d / d_ref[i] - 1.0);
    ok &= rel <= 1e-2;
    detail += fmt(" %.3f (%.2f%%)", d, 100.0 * rel);
  }
  return {ok, detail + " (tol 0.05%, 1%)"};
}

// 4. Joint fit recovers the synthesis parameters.
Verdict fit_round_trip() {
  const LevelSystem sys = qutrit();
  const double T2[4] = {1.36e-3, 6.1e-3, 18.4e-3, 28.0e-3};
  const int N[4] = {0, 1, 2, 4};
  int passed = 0;
  std::string failures;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::vector<DecayDataset> data;
    for (int k = 0; k < 4; ++k) {
      DecayModelParams p;
      p.T2 = T2[k];
      p.g = 0.976;
      p.harmonic_amplitudes = {10e-9};
      std::vector<double> grid;
      for (int i = 0; i < 40; ++i) grid.push_back(T2[k] * 0.1 * std::pow(20.0, i / 39.0));
      const auto synth_seed = Stream::derive({seed, static_cast<std::uint64_t>(k)});
      data.push_back({synthesize_curve(grid, N[k], p, sys, 300, synth_seed), N[k], {}});
    }
    FitOptions opt;
    opt.seed = seed;
    opt.threads = g_threads;
    bool ok = true;
    try {
      const JointFit fit = fit_joint(data, sys, {}, opt);
      for (int k = 0; k < 4; ++k) ok &= std::abs(fit.params[k].T2 / T2[k] - 1.0) <= 0.10;
      ok &= std::abs(fit.at("g").value - 0.976) <= 0.005;
      ok &= std::abs(fit.at("amp[0]").value / 10e-9 - 1.0) <= 0.15;
    } catch (const FitError&) {
      ok = false;
    }
    passed += ok;
    if (!ok) failures += fmt(" %llu", static_cast<unsigned long long>(seed));
  }
  std::string detail = fmt("%d/20 seeds within tolerance (need >= 18)", passed);
  if (!failures.empty()) detail += "; failed seeds:" + failures;
  return {passed >= 18, detail};
}

// 5. Simulated coherence time grows with the number of repetitions.
Verdict fig2_reproduction() {
  const auto cfg = load_config("fig2.json");
  const auto sims = cli::run_simulation(cfg, g_threads);
  std::vector<DecayDataset> data;
  for (const auto& s : sims) data.push_back({s.curve, s.curve.repetitions, {}});
  FitOptions opt = cfg.fit->options;
  opt.threads = g_threads;
  const JointFit fit = fit_joint(data, cfg.system->system, cfg.fit->spec, opt);
  std::string detail = "T2/ms:";
  bool increasing = true;
  for (std::size_t k = 0; k < fit.params.size(); ++k) {
    detail += fmt(" N=%d %.2f", data[k].repetitions, fit.params[k].T2 * 1e3);
    if (k > 0) increasing &= fit.params[k].T2 > fit.params[k - 1].T2;
  }
  const double gain = fit.params.back().T2 / fit.params.front().T2;
  detail += fmt("; N=4/N=0 = %.1f (need >= 5, strictly increasing)", gain);
  return {increasing && gain >= 5.0, detail};
}

// 6. Unprotected three-level decay against the fastest pairwise Ramsey decay.
Verdict bare_consistency() {
  const auto cfg = load_config("bare_ramsey.json");
  const auto sims = cli::run_simulation(cfg, g_threads);
  FitOptions opt;
  opt.threads = g_threads;
  double bare = 0.0, shortest = INFINITY;
  std::string detail = "Ramsey T2/ms:";
  for (const auto& s : sims) {
    if (s.name.rfind("ramsey", 0) == 0) {
      const double t2 = fit_ramsey(s.curve, opt).at("T2").value;
      detail += fmt(" %s %.3f", s.name.c_str() + 6, t2 * 1e3);
      shortest = std::min(shortest, t2);
    } else {
      // Same Gaussian envelope family as the Ramsey fit: no harmonic term, no contrast loss.
      JointFitSpec spec;
      spec.fit_g = false;
      spec.fit_amplitudes = false;
      spec.fixed_amplitudes = {0.0};
      bare = fit_joint({{s.curve, 0, {}}}, cfg.system->system, spec, opt).params[0].T2;
    }
  }
  const double ratio = bare / shortest;
  detail += fmt("; three-level T2 %.3f ms; ratio %.3f (need 1.0 to 1.5)", bare * 1e3, ratio);
  return {ratio >= 1.0 && ratio <= 1.5, detail};
}

// 7. Long-time limits of equal superpositions.
Verdict floor_values() {
  const auto cfg = load_config("fig2.json");
  const LevelSystem& sys = cfg.system->system;
  const std::vector<double> grid{60e-3, 80e-3, 100e-3};
  const std::size_t two[] = {1, 2};
  struct Case {
    PureState state;
    double floor;
  };
  const Case cases[] = {{PureState::uniform(3), 1.0 / 3.0}, {PureState::superposition(3, two), 0.5}};
  bool ok = true;
  std::string detail;
  for (std::size_t c = 0; c < 2; ++c) {
    CurveOptions co;
    co.threads = g_threads;
    const auto curve = monte_carlo_curve(BareFamily{}, sys, cfg.noise, cases[c].state, grid, 10000, 70 + c, co);
    double worst = 0.0;
    for (const auto& p : curve.points) worst = std::max(worst, std::abs(p.fidelity - cases[c].floor) / p.stderr);
    ok &= worst <= 3.0;
    detail += fmt("%s1/%d: max |F-floor|/stderr = %.2f", c ? "; " : "", c ? 2 : 3, worst);
  }
  return {ok, detail + " (need <= 3)"};
}

// 8. Threshold detection error rates against direct summation.
Verdict detection_rates() {
  const DetectionModel m{33.0, 3.0, 8};
  auto cdf = [](int k, double mean) {
    long double term = std::exp(-static_cast<long double>(mean)), sum = 0.0L;
    for (int i = 0; i <= k; ++i) {
      sum += term;
      term *= mean / (i + 1);
    }
    return static_cast<double>(sum);
  };
  const auto r = detection_error_rates(m);
  const double e1 = std::abs(r.false_dark - cdf(8, 33.0));
  const double e2 = std::abs(r.false_bright - (1.0 - cdf(8, 3.0)));
  return {std::max(e1, e2) <= 1e-12,
          fmt("false_dark %.6e (err %.1e), false_bright %.6e (err %.1e) (tol 1e-12)", r.false_dark, e1, r.false_bright, e2)};
}

const std::vector<int>& rb_lengths() {
  static const std::vector<int> l{1, 2, 4, 8, 16, 32, 64, 128, 256, 512};
  return l;
}

// 9. Randomized benchmarking recovers the injected error per gate pair.
Verdict rb_round_trip() {
  bool ok = true;
  std::string detail;
  std::uint64_t seed = 90;
  for (double eps : {0.0005, 0.002, 0.005}) {
    rb::GateErrorModel err;
    err.depolarizing = rb::depolarizing_for_epsilon(eps);
    const auto curve = rb::run_rb(err, rb_lengths(), 30, 1000, seed++, g_threads);
    FitOptions opt;
    opt.threads = g_threads;
    const double fitted = fit_rb(curve.points, opt).at("epsilon").value;
    const double rel = std::abs(fitted / eps - 1.0);
    ok &= rel <= 0.20;
    detail += fmt("%seps %.4f -> %.5f (%.1f%%)", detail.empty() ? "" : "; ", eps, fitted, 100.0 * rel);
  }
  return {ok, detail + " (tol 20%)"};
}

// 10. CSV output does not depend on the thread count.
Verdict determinism() {
  const auto cfg = load_config("fig2.json");
  auto decay_bytes = [&](unsigned threads) {
    std::ostringstream os;
    for (const auto& s : cli::run_simulation(cfg, threads)) write_decay_csv(os, s.curve, s.metadata);
    return os.str();
  };
  auto rb_bytes = [](unsigned threads) {
    rb::GateErrorModel err{rb::depolarizing_for_epsilon(0.002), 0.01};
    std::ostringstream os;
    write_survival_csv(os, rb::run_rb(err, rb_lengths(), 30, 1000, 91, threads));
    return os.str();
  };
  const std::string d1 = decay_bytes(1), r1 = rb_bytes(1);
  bool same = true;
  for (unsigned t : {2u, 5u}) same &= decay_bytes(t) == d1 && rb_bytes(t) == r1;
  return {same, fmt("decay CSV %zu bytes, RB CSV %zu bytes, threads 1/2/5 %s", d1.size(), r1.size(),
                    same ? "identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qudd acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-10)")->check(CLI::Range(1, 10));
  g_threads = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--threads", g_threads, "Worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "MLDD identity", 1.0, mldd_identity},
      {2, "engine equivalence", 10.0, engine_equivalence},
      {3, "Breit-Rabi", 1.0, breit_rabi_check},
      {4, "fit round trip", 120.0, fit_round_trip},
      {5, "coherence gain with N", 300.0, fig2_reproduction},
      {6, "bare qutrit vs Ramsey", 120.0, bare_consistency},
      {7, "floor values", 60.0, floor_values},
      {8, "detection model", 1.0, detection_rates},
      {9, "RB round trip", 120.0, rb_round_trip},
      {10, "determinism", 300.0, determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = Clock::now();
    Verdict o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title << "): " << o.detail
              << fmt(" [%.2f s, limit %.0f s%s]", secs, c.limit_s, in_time ? "" : ", too slow") << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
