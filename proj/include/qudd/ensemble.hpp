// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qudd/noise_model.hpp"
#include "qudd/qudit_core.hpp"
#include "qudd/random.hpp"
#include "qudd/sequences.hpp"

namespace qudd {

struct DecayPoint {
  double T = 0.0;  // s
  double fidelity = 0.0;
  double stderr = 0.0;
};

struct DecayCurve {
  std::vector<DecayPoint> points;
  int repetitions = 0;
  std::string state_label;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
};

/// Photon-count threshold detection. Counts strictly above `threshold` read as bright.
struct DetectionModel {
  double bright_mean = 33.0;
  double dark_mean = 3.0;
  int threshold = 8;

  void validate() const;
};

enum class Outcome { dark, bright };

/// P(Poisson(mean) ≤ k), summed term by term.
double poisson_cdf(std::int64_t k, double mean);

/// Inversion sampling; exact for means up to 700.
std::uint64_t sample_poisson(double mean, Stream& stream);

Outcome simulate_detection(double p_retrieve, const DetectionModel& model, Stream& stream);

struct DetectionErrorRates {
  double false_dark = 0.0;    // retrieved state read as dark
  double false_bright = 0.0;  // other state read as bright
};

DetectionErrorRates detection_error_rates(const DetectionModel& model);

struct CurveOptions {
  /// Measured state; defaults to the prepared state (retrieval fidelity).
  std::optional<PureState> readout;
  std::optional<DetectionModel> detection;
  double pulse_error = 0.0;
  std::string state_label;
  unsigned threads = 1;
};

/// Monte Carlo decay curve. Trial t at grid point p draws everything it needs
/// from Stream(seed, derive({p, t})): noise realization, then pulse errors,
/// then detection counts.
DecayCurve monte_carlo_curve(const SequenceFamily& family, const LevelSystem& system, const NoiseSpec& noise,
                             const PureState& prepared, std::span<const double> T_grid, std::size_t trials,
                             std::uint64_t seed, const CurveOptions& options = {});

/// Fractional pulse-angle error σ for which ideal-noise MLDD shows a
/// per-repetition contrast g (fidelity of the equal superposition decays as
/// g^N·(1 − 1/3) + 1/3). Bisection on a fixed-seed Monte Carlo estimate.
double calibrate_pulse_error(double target_g, const LevelSystem& system, int repetitions = 4,
                             std::size_t trials = 4000, std::uint64_t seed = 7);

/// Per-repetition contrast measured by Monte Carlo for a given pulse error.
double measure_contrast(double pulse_error, const LevelSystem& system, int repetitions, std::size_t trials,
                        std::uint64_t seed);

}  // namespace qudd
