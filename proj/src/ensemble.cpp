// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#include "qudd/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qudd/evolution.hpp"
#include "qudd/parallel.hpp"

namespace qudd {

void DetectionModel::validate() const {
  if (!(dark_mean >= 0.0) || !std::isfinite(dark_mean)) throw std::invalid_argument("DetectionModel: dark_mean must be >= 0");
  if (!(bright_mean > dark_mean) || !std::isfinite(bright_mean))
    throw std::invalid_argument("DetectionModel: bright_mean must exceed dark_mean");
  if (threshold < 0) throw std::invalid_argument("DetectionModel: threshold must be >= 0");
}

double poisson_cdf(std::int64_t k, double mean) {
  if (!(mean >= 0.0)) throw std::invalid_argument("poisson_cdf: mean must be >= 0");
  if (k < 0) return 0.0;
  if (mean == 0.0) return 1.0;
  // Terms in log space so large means do not underflow e^{-mean} on its own.
  double sum = 0.0;
  const double log_mean = std::log(mean);
  for (std::int64_t j = 0; j <= k; ++j)
    sum += std::exp(static_cast<double>(j) * log_mean - mean - std::lgamma(static_cast<double>(j) + 1.0));
  return std::min(sum, 1.0);
}

std::uint64_t sample_poisson(double mean, Stream& stream) {
  if (!(mean >= 0.0) || mean > 700.0) throw std::invalid_argument("sample_poisson: mean must be in [0, 700]");
  if (mean == 0.0) return 0;
  const double u = stream.uniform();
  double p = std::exp(-mean);
  double cdf = p;
  std::uint64_t k = 0;
  while (u >= cdf) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
    if (p == 0.0 && cdf < u) break;  // u beyond the representable tail
  }
  return k;
}

Outcome simulate_detection(double p_retrieve, const DetectionModel& model, Stream& stream) {
  const bool retrieved = stream.uniform() < p_retrieve;
  const std::uint64_t counts = sample_poisson(retrieved ? model.bright_mean : model.dark_mean, stream);
  return counts > static_cast<std::uint64_t>(model.threshold) ? Outcome::bright : Outcome::dark;
}

DetectionErrorRates detection_error_rates(const DetectionModel& model) {
  model.validate();
  return {poisson_cdf(model.threshold, model.bright_mean), 1.0 - poisson_cdf(model.threshold, model.dark_mean)};
}

DecayCurve monte_carlo_curve(const SequenceFamily& family, const LevelSystem& system, const NoiseSpec& noise,
                             const PureState& prepared, std::span<const double> T_grid, std::size_t trials,
                             std::uint64_t seed, const CurveOptions& options) {
  if (T_grid.empty()) throw std::invalid_argument("monte_carlo_curve: empty T grid");
  if (trials == 0) throw std::invalid_argument("monte_carlo_curve: trials must be >= 1");
  for (std::size_t p = 0; p < T_grid.size(); ++p) {
    if (!(T_grid[p] >= 0.0) || !std::isfinite(T_grid[p])) throw std::invalid_argument("monte_carlo_curve: T must be >= 0");
    if (p > 0 && !(T_grid[p] > T_grid[p - 1]))
      throw std::invalid_argument("monte_carlo_curve: T grid must be strictly increasing");
  }
  if (prepared.dim() != system.dim()) throw std::invalid_argument("monte_carlo_curve: prepared state dimension mismatch");
  const PureState& readout = options.readout ? *options.readout : prepared;
  if (readout.dim() != system.dim()) throw std::invalid_argument("monte_carlo_curve: readout state dimension mismatch");
  if (options.detection) options.detection->validate();
  if (options.pulse_error < 0.0) throw std::invalid_argument("monte_carlo_curve: pulse_error must be >= 0");

  std::vector<SequenceSpec> sequences;
  sequences.reserve(T_grid.size());
  for (double T : T_grid) sequences.push_back(build_for_duration(family, system, T));

  const std::size_t total = T_grid.size() * trials;
  std::vector<double> values(total);
  parallel_for(total, options.threads, [&](std::size_t idx) {
    const std::size_t p = idx / trials;
    const std::size_t t = idx % trials;
    Stream stream(seed, Stream::derive({p, t}));
    const TrialNoise trial = sample_trial(noise, stream);
    const PureState final_state =
        propagate_unitary(sequences[p], system, trial, prepared, options.pulse_error, &stream);
    const double f = retrieval_fidelity(readout, final_state);
    if (options.detection)
      values[idx] = simulate_detection(f, *options.detection, stream) == Outcome::bright ? 1.0 : 0.0;
    else
      values[idx] = f;
  });

  DecayCurve curve;
  curve.repetitions = family_repetitions(family);
  curve.state_label = options.state_label;
  curve.seed = seed;
  curve.trials = trials;
  const double n = static_cast<double>(trials);
  for (std::size_t p = 0; p < T_grid.size(); ++p) {
    double sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) sum += values[p * trials + t];
    const double mean = sum / n;
    double err = 0.0;
    if (options.detection) {
      err = std::sqrt(std::max(mean * (1.0 - mean), 0.0) / n);
    } else if (trials > 1) {
      double ss = 0.0;
      for (std::size_t t = 0; t < trials; ++t) ss += (values[p * trials + t] - mean) * (values[p * trials + t] - mean);
      err = std::sqrt(ss / (n - 1.0) / n);
    }
    curve.points.push_back({T_grid[p], mean, err});
  }
  return curve;
}

double measure_contrast(double pulse_error, const LevelSystem& system, int repetitions, std::size_t trials,
                        std::uint64_t seed) {
  if (system.dim() != 3) throw std::invalid_argument("measure_contrast: needs a three-level system");
  const double T = 3.0 * repetitions * 1e-3;
  const std::vector<double> grid{T};
  CurveOptions opts;
  opts.pulse_error = pulse_error;
  const DecayCurve c = monte_carlo_curve(MlddFamily{{0, 1, 2}, repetitions}, system, NoiseSpec{},
                                         PureState::uniform(3), grid, trials, seed, opts);
  const double visibility = std::max((c.points[0].fidelity - 1.0 / 3.0) / (2.0 / 3.0), 0.0);
  return std::pow(visibility, 1.0 / repetitions);
}

double calibrate_pulse_error(double target_g, const LevelSystem& system, int repetitions, std::size_t trials,
                             std::uint64_t seed) {
  if (!(target_g > 0.0 && target_g <= 1.0)) throw std::invalid_argument("calibrate_pulse_error: g must be in (0, 1]");
  if (target_g == 1.0) return 0.0;
  double lo = 0.0, hi = 0.5;
  if (measure_contrast(hi, system, repetitions, trials, seed) > target_g)
    throw std::runtime_error("calibrate_pulse_error: target contrast below reachable range");
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (measure_contrast(mid, system, repetitions, trials, seed) > target_g)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qudd
