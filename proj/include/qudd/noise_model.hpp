// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "qudd/random.hpp"

namespace qudd {

struct RandomPhase {};
struct FixedPhase {
  double alpha = 0.0;  // rad
};
using PhasePolicy = std::variant<RandomPhase, FixedPhase>;

/// β_j cos(2π f_j t + α_j)
struct HarmonicComponent {
  double frequency = 0.0;  // Hz
  double amplitude = 0.0;  // T
  PhasePolicy phase = RandomPhase{};
};

/// Zero-mean Gaussian offset, frozen for the duration of one trial.
struct QuasiStaticComponent {
  double sigma = 0.0;  // T
};

class NoiseSpec {
 public:
  NoiseSpec() = default;
  NoiseSpec(std::vector<HarmonicComponent> harmonics, QuasiStaticComponent quasi_static);

  const std::vector<HarmonicComponent>& harmonics() const { return harmonics_; }
  const QuasiStaticComponent& quasi_static() const { return quasi_static_; }

 private:
  std::vector<HarmonicComponent> harmonics_;
  QuasiStaticComponent quasi_static_;
};

/// One frozen realization of a NoiseSpec. Arrays are laid out for the batched
/// integral kernel: omega[j] = 2π f_j, coef[j] = β_j / omega[j].
struct TrialNoise {
  double offset = 0.0;
  std::vector<double> frequencies;
  std::vector<double> amplitudes;
  std::vector<double> phases;
  std::vector<double> omega;
  std::vector<double> coef;

  /// Builds a realization with explicit offset and phases (phases wrapped to [0, 2π)).
  static TrialNoise make(double offset, std::vector<double> frequencies, std::vector<double> amplitudes,
                         std::vector<double> phases);
};

TrialNoise sample_trial(const NoiseSpec& spec, Stream& stream);

/// offset + Σ_j β_j cos(2π f_j t + α_j)
double field_at(const TrialNoise& trial, double t);

/// ∫_{t0}^{t1} β(t) dt in closed form.
double integrate_field(const TrialNoise& trial, double t0, double t1);

/// Random-phase harmonics at `count` log-spaced, mutually incommensurate
/// frequencies in [f_min, f_max], all with the same amplitude. With equal
/// amplitudes on a log grid the ensemble has a 1/f-like power spectrum; it
/// stands in for slow stochastic field drift.
std::vector<HarmonicComponent> broadband_harmonics(std::size_t count, double f_min, double f_max,
                                                   double amplitude);

}  // namespace qudd
