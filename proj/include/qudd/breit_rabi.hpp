// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "qudd/qudit_core.hpp"

namespace qudd {

/// Integer or half-integer quantum number, stored as twice its value.
struct HalfInt {
  int twice = 0;

  static HalfInt from_double(double v);
  double value() const { return 0.5 * twice; }
  bool operator==(const HalfInt&) const = default;
};

std::string to_string(HalfInt h);

/// S = 1/2 ground state with nuclear spin I. Hamiltonian (in Hz):
///   H = A_hfs·I·J + μ_B·B·(g_J·J_z + g_I·I_z)
/// so g_I = −μ_I/(μ_B·I). A nucleus with negative magnetic moment (⁹Be) has g_I > 0.
struct HyperfineAtom {
  std::string name;
  HalfInt I{3};
  double A_hfs = 0.0;  // Hz
  double g_J = 0.0;
  double g_I = 0.0;
  double mu_B = 13.996244936e9;  // Bohr magneton / h, Hz/T

  void validate() const;
};

struct ZeemanLevel {
  HalfInt F, mF;
  double energy = 0.0;       // Hz
  double sensitivity = 0.0;  // Hz/T

  std::string label() const;  // "|F,mF>"
};

struct LevelSpec {
  HalfInt F, mF;
};

/// Breit-Rabi energy. Stretched states |mF| = I + 1/2 use the exact linear branch.
double level_energy(const HyperfineAtom& atom, HalfInt F, HalfInt mF, double B);

/// Analytic dE/dB in Hz/T.
double level_sensitivity(const HyperfineAtom& atom, HalfInt F, HalfInt mF, double B);

/// All 2(2I+1) levels, F = I + 1/2 first, mF descending.
std::vector<ZeemanLevel> all_levels(const HyperfineAtom& atom, double B);

/// |E_a − E_b| in Hz.
double transition_frequency(const HyperfineAtom& atom, const LevelSpec& a, const LevelSpec& b, double B);

/// LevelSystem labelled "|F,mF>" with δ_i = 2π·dE_i/dB (rad·s⁻¹·T⁻¹).
LevelSystem sensitivities_for(std::span<const LevelSpec> levels, const HyperfineAtom& atom, double B);

/// Parses an atom constants document:
///   {"mu_B_over_h_Hz_per_T": 13996244936,
///    "atoms": {"<name>": {"I": 1.5, "A_hfs": "-625.008837048 MHz", "g_J": ..., "g_I": ...,
///                         "reference": "..."}}}
std::map<std::string, HyperfineAtom> parse_atoms(const std::string& json_text);
std::map<std::string, HyperfineAtom> load_atoms(const std::string& path);

}  // namespace qudd
