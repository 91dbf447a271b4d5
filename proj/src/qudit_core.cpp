// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#include "qudd/qudit_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace qudd {

LevelSystem::LevelSystem(std::vector<std::string> labels, std::vector<double> sensitivities)
    : labels_(std::move(labels)), sensitivities_(std::move(sensitivities)) {
  if (sensitivities_.size() < 2) throw std::invalid_argument("LevelSystem: need at least two levels");
  if (labels_.size() != sensitivities_.size())
    throw std::invalid_argument("LevelSystem: labels and sensitivities differ in length");
  if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size())
    throw std::invalid_argument("LevelSystem: level labels must be unique");
  for (double s : sensitivities_)
    if (!std::isfinite(s)) throw std::invalid_argument("LevelSystem: non-finite sensitivity");
}

LevelSystem::LevelSystem(std::vector<double> sensitivities)
    : LevelSystem(
          [&] {
            std::vector<std::string> labels;
            for (std::size_t i = 0; i < sensitivities.size(); ++i) labels.push_back(std::to_string(i));
            return labels;
          }(),
          sensitivities) {}

// ---------------------------------------------------------------------------

PureState::PureState(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.empty()) throw std::invalid_argument("PureState: empty amplitude vector");
  const double n = norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("PureState: amplitudes have zero or invalid norm");
  for (auto& a : amplitudes_) a /= n;
}

PureState PureState::basis(std::size_t dim, std::size_t level) {
  if (level >= dim) throw std::invalid_argument("PureState::basis: level out of range");
  std::vector<Complex> a(dim);
  a[level] = 1.0;
  return PureState(std::move(a));
}

PureState PureState::superposition(std::size_t dim, std::span<const std::size_t> levels,
                                   std::span<const double> phases) {
  if (levels.empty()) throw std::invalid_argument("PureState::superposition: no levels");
  if (!phases.empty() && phases.size() != levels.size())
    throw std::invalid_argument("PureState::superposition: phase count mismatch");
  std::vector<Complex> a(dim);
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (levels[k] >= dim) throw std::invalid_argument("PureState::superposition: level out of range");
    if (a[levels[k]] != Complex{}) throw std::invalid_argument("PureState::superposition: repeated level");
    a[levels[k]] = std::polar(1.0, phases.empty() ? 0.0 : phases[k]);
  }
  return PureState(std::move(a));
}

PureState PureState::uniform(std::size_t dim) {
  return PureState(std::vector<Complex>(dim, Complex{1.0, 0.0}));
}

std::vector<double> PureState::populations() const {
  std::vector<double> p(amplitudes_.size());
  std::transform(amplitudes_.begin(), amplitudes_.end(), p.begin(), [](Complex c) { return std::norm(c); });
  return p;
}

double PureState::norm() const {
  double s = 0.0;
  for (Complex c : amplitudes_) s += std::norm(c);
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------

UnitaryOp UnitaryOp::identity(std::size_t dim) {
  std::vector<Complex> m(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) m[i * dim + i] = 1.0;
  return UnitaryOp(dim, std::move(m));
}

UnitaryOp UnitaryOp::from_matrix(std::size_t dim, std::vector<Complex> row_major, double tolerance) {
  if (dim == 0 || row_major.size() != dim * dim) throw std::invalid_argument("UnitaryOp: shape mismatch");
  UnitaryOp u(dim, std::move(row_major));
  if (!(u.unitarity_error() <= tolerance)) throw std::invalid_argument("UnitaryOp: matrix is not unitary");
  return u;
}

UnitaryOp UnitaryOp::adjoint() const {
  std::vector<Complex> m(dim_ * dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) m[c * dim_ + r] = std::conj(m_[r * dim_ + c]);
  return UnitaryOp(dim_, std::move(m));
}

double UnitaryOp::unitarity_error() const {
  double worst = 0.0;
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) {
      Complex s{};
      for (std::size_t k = 0; k < dim_; ++k) s += std::conj(m_[k * dim_ + r]) * m_[k * dim_ + c];
      if (r == c) s -= 1.0;
      worst = std::max(worst, std::abs(s));
    }
  }
  return worst;
}

UnitaryOp operator*(const UnitaryOp& a, const UnitaryOp& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("UnitaryOp: dimension mismatch in product");
  const std::size_t d = a.dim_;
  std::vector<Complex> m(d * d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t k = 0; k < d; ++k) {
      const Complex ark = a.m_[r * d + k];
      if (ark == Complex{}) continue;
      for (std::size_t c = 0; c < d; ++c) m[r * d + c] += ark * b.m_[k * d + c];
    }
  return UnitaryOp(d, std::move(m));
}

// ---------------------------------------------------------------------------

UnitaryOp rotation_pulse(std::size_t dim, std::size_t i, std::size_t j, double angle, double axis_phase) {
  if (i >= dim || j >= dim) throw std::invalid_argument("rotation_pulse: level index out of range");
  if (i == j) throw std::invalid_argument("rotation_pulse: levels must differ");
  // The generator G restricted to span{|i>,|j>} squares to the identity there,
  // so exp(-iθG/2) = cos(θ/2)·P - i·sin(θ/2)·G on the pair.
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  std::vector<Complex> m(dim * dim);
  for (std::size_t k = 0; k < dim; ++k) m[k * dim + k] = 1.0;
  m[i * dim + i] = c;
  m[j * dim + j] = c;
  m[i * dim + j] = Complex{0.0, -s} * std::polar(1.0, -axis_phase);
  m[j * dim + i] = Complex{0.0, -s} * std::polar(1.0, axis_phase);
  return UnitaryOp::from_matrix(dim, std::move(m));
}

UnitaryOp pi_pulse(const LevelSystem& system, std::size_t i, std::size_t j, double axis_phase) {
  return rotation_pulse(system.dim(), i, j, std::numbers::pi, axis_phase);
}

UnitaryOp free_phase(const LevelSystem& system, double integrated_field) {
  const std::size_t d = system.dim();
  std::vector<Complex> m(d * d);
  for (std::size_t k = 0; k < d; ++k) m[k * d + k] = std::polar(1.0, -system.sensitivity(k) * integrated_field);
  return UnitaryOp::from_matrix(d, std::move(m));
}

PureState apply(const UnitaryOp& u, const PureState& state) {
  const std::size_t d = u.dim();
  if (state.dim() != d) throw std::invalid_argument("apply: dimension mismatch");
  std::vector<Complex> out(d);
  for (std::size_t r = 0; r < d; ++r) {
    Complex s{};
    for (std::size_t c = 0; c < d; ++c) s += u(r, c) * state[c];
    out[r] = s;
  }
  return PureState(std::move(out));
}

double retrieval_fidelity(const PureState& prepared, const PureState& final_state) {
  if (prepared.dim() != final_state.dim()) throw std::invalid_argument("retrieval_fidelity: dimension mismatch");
  Complex overlap{};
  for (std::size_t k = 0; k < prepared.dim(); ++k) overlap += std::conj(prepared[k]) * final_state[k];
  return std::clamp(std::norm(overlap), 0.0, 1.0);
}

}  // namespace qudd
