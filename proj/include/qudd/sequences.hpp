// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qudd/qudit_core.hpp"

namespace qudd {

/// Instantaneous rotation on the (i, j) transition.
struct Pulse {
  std::size_t i = 0;
  std::size_t j = 1;
  double angle = std::numbers::pi;
  double axis_phase = 0.0;
  double at = 0.0;  // s
};

/// Free evolution over [from, to].
struct Wait {
  double from = 0.0;
  double to = 0.0;
};

using SequenceEvent = std::variant<Pulse, Wait>;

struct SequenceSpec {
  std::vector<SequenceEvent> events;
  double total_duration = 0.0;
  int repetitions = 0;
};

class MalformedSequence : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using LevelTriple = std::array<std::size_t, 3>;

/// π_lm - τ - π_lm π_mn - τ - π_mn π_nl - τ - π_nl, repeated N times.
SequenceSpec build_mldd(LevelTriple levels, double tau, int repetitions);

/// d segments of length τ per repetition; after each segment a chain of d−1
/// transpositions π_{d−2,d−1}, …, π_{1,2}, π_{0,1} (in time order) shifts every
/// population |i⟩ → |i+1 mod d⟩. After d segments the permutation closes.
SequenceSpec build_cyclic_mldd(const LevelSystem& system, double tau, int repetitions);

/// π/2 on (i, j) at 0 and at `wait`.
SequenceSpec build_ramsey(std::size_t i, std::size_t j, double wait);

SequenceSpec build_bare_wait(double total);

/// Checks ordering, non-negative times and that the waits tile [0, total].
void validate(const SequenceSpec& seq);

std::size_t pulse_count(const SequenceSpec& seq);

/// Human-readable timed event table.
std::string format_event_table(const SequenceSpec& seq);

// ---------------------------------------------------------------------------
// Sequence families parameterized by total duration T, used for decay curves.

struct BareFamily {};
struct MlddFamily {
  LevelTriple levels{0, 1, 2};
  int repetitions = 1;
};
struct CyclicFamily {
  int repetitions = 1;
};
struct RamseyFamily {
  std::size_t i = 0;
  std::size_t j = 1;
};

using SequenceFamily = std::variant<BareFamily, MlddFamily, CyclicFamily, RamseyFamily>;

/// Builds the member of `family` whose total duration is T.
SequenceSpec build_for_duration(const SequenceFamily& family, const LevelSystem& system, double T);

/// Repetition count N (0 for bare waits and Ramsey).
int family_repetitions(const SequenceFamily& family);

std::string describe(const SequenceFamily& family);

}  // namespace qudd
