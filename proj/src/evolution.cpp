// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#include "qudd/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qudd {

PureState propagate_unitary(const SequenceSpec& seq, const LevelSystem& system, const TrialNoise& trial,
                            const PureState& initial, double pulse_error, Stream* stream) {
  if (initial.dim() != system.dim()) throw std::invalid_argument("propagate_unitary: dimension mismatch");
  if (pulse_error > 0.0 && stream == nullptr)
    throw std::invalid_argument("propagate_unitary: pulse error requires a random stream");
  validate(seq);
  const std::size_t d = system.dim();
  PureState state = initial;
  for (const auto& e : seq.events) {
    if (const auto* w = std::get_if<Wait>(&e)) {
      if (w->to > w->from) state = apply(free_phase(system, integrate_field(trial, w->from, w->to)), state);
    } else {
      const auto& p = std::get<Pulse>(e);
      if (p.i >= d || p.j >= d) throw MalformedSequence("propagate_unitary: pulse level out of range");
      const double scale = pulse_error > 0.0 ? 1.0 + pulse_error * stream->normal() : 1.0;
      state = apply(rotation_pulse(d, p.i, p.j, p.angle * scale, p.axis_phase), state);
    }
  }
  return state;
}

UnitaryOp sequence_unitary(const SequenceSpec& seq, const LevelSystem& system, const TrialNoise& trial) {
  validate(seq);
  const std::size_t d = system.dim();
  UnitaryOp u = UnitaryOp::identity(d);
  for (const auto& e : seq.events) {
    if (const auto* w = std::get_if<Wait>(&e)) {
      u = free_phase(system, integrate_field(trial, w->from, w->to)) * u;
    } else {
      const auto& p = std::get<Pulse>(e);
      if (p.i >= d || p.j >= d) throw MalformedSequence("sequence_unitary: pulse level out of range");
      u = rotation_pulse(d, p.i, p.j, p.angle, p.axis_phase) * u;
    }
  }
  return u;
}

DwellTable mldd_dwell(LevelTriple levels) {
  const auto [l, m, n] = levels;
  if (l > 2 || m > 2 || n > 2 || l == m || m == n || l == n)
    throw std::invalid_argument("mldd_dwell: levels must be a permutation of {0, 1, 2}");
  const std::array<std::array<std::size_t, 2>, 3> swaps{{{l, m}, {m, n}, {n, l}}};
  DwellTable table{};
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t i = 0; i < 3; ++i) {
      const auto [a, b] = swaps[s];
      table[s][i] = i == a ? b : i == b ? a : i;
    }
  }
  return table;
}

DwellTable cyclic_dwell() {
  DwellTable table{};
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t i = 0; i < 3; ++i) table[s][i] = (i + s) % 3;
  return table;
}

PhaseVector phases_mldd(double T, int repetitions, const LevelSystem& system, const TrialNoise& trial,
                        const DwellTable& dwell) {
  if (system.dim() != 3) throw std::invalid_argument("phases_mldd: closed-form phases need a three-level system");
  if (!(T > 0.0)) throw std::invalid_argument("phases_mldd: T must be > 0");
  if (repetitions < 1) throw std::invalid_argument("phases_mldd: repetitions must be >= 1");
  const double n = repetitions;
  std::array<double, 3> phi{};
  for (int k = 0; k < repetitions; ++k) {
    for (int s = 0; s < 3; ++s) {
      const double t0 = (k / n + s / (3.0 * n)) * T;
      const double t1 = (k / n + (s + 1) / (3.0 * n)) * T;
      const double integral = integrate_field(trial, t0, t1);
      for (std::size_t i = 0; i < 3; ++i) phi[i] += system.sensitivity(dwell[s][i]) * integral;
    }
  }
  return PhaseVector{{0.0, phi[1] - phi[0], phi[2] - phi[0]}};
}

double trial_fidelity(const PureState& prepared, const PhaseVector& phases) {
  if (prepared.dim() != phases.phases.size()) throw std::invalid_argument("trial_fidelity: dimension mismatch");
  Complex sum{};
  for (std::size_t i = 0; i < prepared.dim(); ++i) sum += std::norm(prepared[i]) * std::polar(1.0, phases.phases[i]);
  return std::clamp(std::norm(sum), 0.0, 1.0);
}

}  // namespace qudd
