// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace qudd {

using Complex = std::complex<double>;

/// The d levels of a qudit and their field sensitivities δ_i in rad·s⁻¹·T⁻¹.
class LevelSystem {
 public:
  LevelSystem(std::vector<std::string> labels, std::vector<double> sensitivities);
  /// Labels "0", "1", ... for quick construction.
  explicit LevelSystem(std::vector<double> sensitivities);

  std::size_t dim() const { return sensitivities_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::span<const double> sensitivities() const { return sensitivities_; }
  double sensitivity(std::size_t level) const { return sensitivities_.at(level); }

 private:
  std::vector<std::string> labels_;
  std::vector<double> sensitivities_;
};

/// Normalized pure state. Construction normalizes; a zero vector is rejected.
class PureState {
 public:
  explicit PureState(std::vector<Complex> amplitudes);

  static PureState basis(std::size_t dim, std::size_t level);
  /// Equal-weight superposition over `levels` with optional relative phases (rad).
  static PureState superposition(std::size_t dim, std::span<const std::size_t> levels,
                                 std::span<const double> phases = {});
  /// Equal superposition of all `dim` levels.
  static PureState uniform(std::size_t dim);

  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[i]; }
  std::vector<double> populations() const;
  double norm() const;

 private:
  std::vector<Complex> amplitudes_;
};

/// Dense d×d operator, row-major. Factory functions only produce unitaries.
class UnitaryOp {
 public:
  static UnitaryOp identity(std::size_t dim);
  /// Wraps a row-major matrix; throws if it is not unitary within `tolerance`.
  static UnitaryOp from_matrix(std::size_t dim, std::vector<Complex> row_major, double tolerance = 1e-10);

  std::size_t dim() const { return dim_; }
  Complex operator()(std::size_t row, std::size_t col) const { return m_[row * dim_ + col]; }
  std::span<const Complex> data() const { return m_; }

  UnitaryOp adjoint() const;
  /// max_ij |(U†U − I)_ij|
  double unitarity_error() const;

  friend UnitaryOp operator*(const UnitaryOp& a, const UnitaryOp& b);

 private:
  UnitaryOp(std::size_t dim, std::vector<Complex> m) : dim_(dim), m_(std::move(m)) {}

  std::size_t dim_;
  std::vector<Complex> m_;
};

/// exp(−i·angle/2·(e^{−iφ}|i⟩⟨j| + e^{iφ}|j⟩⟨i|)), identity outside span{|i⟩,|j⟩}.
UnitaryOp rotation_pulse(std::size_t dim, std::size_t i, std::size_t j, double angle, double axis_phase = 0.0);

/// π_{ij}; rotation_pulse with angle π.
UnitaryOp pi_pulse(const LevelSystem& system, std::size_t i, std::size_t j, double axis_phase = 0.0);

/// diag(exp(−i δ_k Φ)) for an integrated field Φ in T·s.
UnitaryOp free_phase(const LevelSystem& system, double integrated_field);

/// U·ψ, renormalized.
PureState apply(const UnitaryOp& u, const PureState& state);

/// |⟨prepared|final⟩|², clamped to [0, 1].
double retrieval_fidelity(const PureState& prepared, const PureState& final_state);

}  // namespace qudd
