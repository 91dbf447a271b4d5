// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "qudd/noise_model.hpp"
#include "qudd/qudit_core.hpp"
#include "qudd/random.hpp"
#include "qudd/sequences.hpp"

namespace qudd {

/// Accumulated phases φ_i = δ·∫β (the state amplitude of level i carries
/// e^{−iφ_i}). Gauge-fixed: φ_0 is subtracted.
struct PhaseVector {
  std::vector<double> phases;
};

/// Walks the events in time order. Waits apply free_phase over the closed-form
/// field integral; pulses apply rotation_pulse. With pulse_error > 0 every
/// pulse angle is scaled by (1 + ε), ε ~ N(0, pulse_error²) drawn from `stream`.
PureState propagate_unitary(const SequenceSpec& seq, const LevelSystem& system, const TrialNoise& trial,
                            const PureState& initial, double pulse_error = 0.0, Stream* stream = nullptr);

/// Net operator of an ideal-pulse sequence for one noise realization.
UnitaryOp sequence_unitary(const SequenceSpec& seq, const LevelSystem& system, const TrialNoise& trial);

/// dwell[s][i]: the level whose sensitivity the amplitude prepared in level i
/// evolves under during third s of a repetition.
using DwellTable = std::array<std::array<std::size_t, 3>, 3>;

/// Dwell pattern produced by build_mldd(levels): during third s the populations
/// sit in the frame of the transposition (l m), (m n), (n l) respectively.
DwellTable mldd_dwell(LevelTriple levels = {0, 1, 2});

/// Cyclic dwell δ_i, δ_{i+1}, δ_{i+2} over the three thirds; produced by
/// build_cyclic_mldd on a three-level system.
DwellTable cyclic_dwell();

/// Closed-form phase accumulation over N repetitions of a three-segment
/// sequence of total duration T: φ_i = Σ_k Σ_s δ_{dwell[s][i]} Φ(k, s) with
/// Φ(k, s) the field integral over [(k/N + s/3N)T, (k/N + (s+1)/3N)T].
/// Requires a three-level system.
PhaseVector phases_mldd(double T, int repetitions, const LevelSystem& system, const TrialNoise& trial,
                        const DwellTable& dwell = mldd_dwell());

/// |Σ_i |c_i|² e^{iφ_i}|²
double trial_fidelity(const PureState& prepared, const PhaseVector& phases);

}  // namespace qudd
