// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#include "qudd/noise_model.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "qudd/kernels/phasor.hpp"

namespace qudd {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phase(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

}  // namespace

NoiseSpec::NoiseSpec(std::vector<HarmonicComponent> harmonics, QuasiStaticComponent quasi_static)
    : harmonics_(std::move(harmonics)), quasi_static_(quasi_static) {
  if (!(quasi_static_.sigma >= 0.0) || !std::isfinite(quasi_static_.sigma))
    throw std::invalid_argument("NoiseSpec: quasi-static sigma must be finite and >= 0");
  std::set<double> seen;
  for (const auto& h : harmonics_) {
    if (!(h.frequency > 0.0) || !std::isfinite(h.frequency))
      throw std::invalid_argument("NoiseSpec: harmonic frequency must be > 0");
    if (!(h.amplitude >= 0.0) || !std::isfinite(h.amplitude))
      throw std::invalid_argument("NoiseSpec: harmonic amplitude must be >= 0");
    if (!seen.insert(h.frequency).second) throw std::invalid_argument("NoiseSpec: harmonic frequencies must be distinct");
  }
}

TrialNoise TrialNoise::make(double offset, std::vector<double> frequencies, std::vector<double> amplitudes,
                            std::vector<double> phases) {
  if (frequencies.size() != amplitudes.size() || frequencies.size() != phases.size())
    throw std::invalid_argument("TrialNoise: harmonic arrays differ in length");
  TrialNoise t;
  t.offset = offset;
  t.frequencies = std::move(frequencies);
  t.amplitudes = std::move(amplitudes);
  t.phases = std::move(phases);
  t.omega.resize(t.frequencies.size());
  t.coef.resize(t.frequencies.size());
  for (std::size_t j = 0; j < t.frequencies.size(); ++j) {
    if (!(t.frequencies[j] > 0.0)) throw std::invalid_argument("TrialNoise: frequency must be > 0");
    t.phases[j] = wrap_phase(t.phases[j]);
    t.omega[j] = kTwoPi * t.frequencies[j];
    t.coef[j] = t.amplitudes[j] / t.omega[j];
  }
  return t;
}

TrialNoise sample_trial(const NoiseSpec& spec, Stream& stream) {
  const auto& hs = spec.harmonics();
  std::vector<double> f(hs.size()), a(hs.size()), ph(hs.size());
  const double offset = spec.quasi_static().sigma > 0.0 ? spec.quasi_static().sigma * stream.normal() : 0.0;
  for (std::size_t j = 0; j < hs.size(); ++j) {
    f[j] = hs[j].frequency;
    a[j] = hs[j].amplitude;
    if (const auto* fixed = std::get_if<FixedPhase>(&hs[j].phase))
      ph[j] = fixed->alpha;
    else
      ph[j] = kTwoPi * stream.uniform();
  }
  return TrialNoise::make(offset, std::move(f), std::move(a), std::move(ph));
}

double field_at(const TrialNoise& trial, double t) {
  double b = trial.offset;
  for (std::size_t j = 0; j < trial.omega.size(); ++j)
    b += trial.amplitudes[j] * std::cos(trial.omega[j] * t + trial.phases[j]);
  return b;
}

double integrate_field(const TrialNoise& trial, double t0, double t1) {
  if (!(t1 >= t0)) throw std::invalid_argument("integrate_field: t1 must be >= t0");
  if (t1 == t0) return 0.0;
  double total = trial.offset * (t1 - t0);
  if (!trial.omega.empty())
    total += kernels::active().harmonic_integral(trial.coef.data(), trial.omega.data(), trial.phases.data(),
                                                 trial.omega.size(), t0, t1);
  return total;
}

std::vector<HarmonicComponent> broadband_harmonics(std::size_t count, double f_min, double f_max, double amplitude) {
  if (count == 0) return {};
  if (!(f_min > 0.0) || !(f_max >= f_min)) throw std::invalid_argument("broadband_harmonics: bad frequency range");
  std::vector<HarmonicComponent> out;
  out.reserve(count);
  const double span = count > 1 ? std::log(f_max / f_min) / static_cast<double>(count - 1) : 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    // A small golden-ratio jitter keeps the grid off any common period
    // (in particular off the 50 Hz comb).
    const double jitter = 0.02 * (std::fmod(0.6180339887498949 * static_cast<double>(k + 1), 1.0) - 0.5);
    out.push_back({f_min * std::exp(span * static_cast<double>(k) + jitter), amplitude, RandomPhase{}});
  }
  return out;
}

}  // namespace qudd
