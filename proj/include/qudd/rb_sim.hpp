// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qudd/qudit_core.hpp"
#include "qudd/random.hpp"

namespace qudd::rb {

using Mat2 = std::array<Complex, 4>;  // row-major

/// Pauli gates exp(±iσ_p·π/2), p ∈ {0, x, y, z}; Clifford gates exp(±iσ_c·π/4), c ∈ {0, x, y}.
struct Gate {
  enum class Kind { pauli, clifford };
  Kind kind = Kind::pauli;
  char axis = '0';  // '0', 'x', 'y', 'z'
  int sign = +1;

  /// Ideal matrix, optionally over-rotated by `error` rad about the gate axis.
  Mat2 matrix(double error = 0.0) const;
  std::string name() const;  // e.g. "P+x", "C-0"
  bool operator==(const Gate&) const = default;
};

/// The 8 Pauli values, ordered (0,+), (0,−), (x,+), (x,−), (y,+), (y,−), (z,+), (z,−).
std::span<const Gate> pauli_gates();
/// The 6 Clifford values, ordered (0,+), (0,−), (x,+), (x,−), (y,+), (y,−).
std::span<const Gate> clifford_gates();

struct Sequence {
  int length = 0;
  /// P0 C0 P1 C1 … P_l C_l P_{l+1}: 2l + 3 gates in time order.
  std::vector<Gate> gates;
  /// σ_z eigenstate the ideal sequence maps |0⟩ to (0 or 1).
  int target = 0;
};

/// P_k uniform, C_k uniform for k < l, C_l the lowest-index Clifford that puts
/// the ideal state on a σ_z eigenstate.
Sequence generate_sequence(int length, Stream& stream);

struct GateErrorModel {
  double depolarizing = 0.0;  // per gate, ρ → (1 − p)ρ + p·I/2 after the gate
  double over_rotation = 0.0;  // rad, standard deviation per gate

  void validate() const;
};

/// Depolarizing probability per gate giving a per-length decay 1 − 2ε
/// (one Pauli and one Clifford per unit of l).
double depolarizing_for_epsilon(double epsilon);

/// Probability of reading the recorded target. Exact for depolarizing-only
/// errors; over-rotations are drawn from `stream` (required when nonzero).
double survival_probability(const Sequence& seq, const GateErrorModel& error, Stream* stream = nullptr);

struct SurvivalPoint {
  int length = 0;
  double mean = 0.0;
  double stderr = 0.0;
  std::size_t sequences = 0;
  std::size_t shots = 0;
};

struct Curve {
  std::vector<SurvivalPoint> points;
  std::uint64_t seed = 0;
};

/// For each length: `sequences` random sequences, each measured `shots` times;
/// mean and standard error over sequences of the shot-averaged survival.
/// Sequence s at length index k uses Stream(seed, derive({k, s})).
Curve run_rb(const GateErrorModel& error, std::span<const int> lengths, std::size_t sequences, std::size_t shots,
             std::uint64_t seed, unsigned threads = 1);

}  // namespace qudd::rb
