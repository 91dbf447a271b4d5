// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "qudd/breit_rabi.hpp"
#include "qudd/qudit_core.hpp"
#include "qudd/random.hpp"

namespace qudd::test {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// 2π×{14.01, 3.21, −3.20} MHz/mT in rad·s⁻¹·T⁻¹.
inline LevelSystem beryllium_qutrit() { return LevelSystem({kTwoPi * 14.01e9, kTwoPi * 3.21e9, kTwoPi * -3.20e9}); }

inline HyperfineAtom beryllium() {
  HyperfineAtom a;
  a.name = "9Be+";
  a.I = HalfInt::from_double(1.5);
  a.A_hfs = -625.008837048e6;
  a.g_J = 2.00226206;
  a.g_I = 4.2743887061e-4;
  return a;
}

inline PureState random_state(std::size_t dim, Stream& s) {
  std::vector<Complex> a(dim);
  for (auto& c : a) c = {s.normal(), s.normal()};
  return PureState(std::move(a));
}

}  // namespace qudd::test
