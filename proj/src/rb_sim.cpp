// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#include "qudd/rb_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qudd/parallel.hpp"

namespace qudd::rb {
namespace {

constexpr Complex kI{0.0, 1.0};

Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

Mat2 sigma(char axis) {
  switch (axis) {
    case '0': return {1.0, 0.0, 0.0, 1.0};
    case 'x': return {0.0, 1.0, 1.0, 0.0};
    case 'y': return {0.0, -kI, kI, 0.0};
    case 'z': return {1.0, 0.0, 0.0, -1.0};
  }
  throw std::invalid_argument("rb: unknown axis");
}

const std::array<Gate, 8> kPauli{{{Gate::Kind::pauli, '0', +1},
                                  {Gate::Kind::pauli, '0', -1},
                                  {Gate::Kind::pauli, 'x', +1},
                                  {Gate::Kind::pauli, 'x', -1},
                                  {Gate::Kind::pauli, 'y', +1},
                                  {Gate::Kind::pauli, 'y', -1},
                                  {Gate::Kind::pauli, 'z', +1},
                                  {Gate::Kind::pauli, 'z', -1}}};
const std::array<Gate, 6> kClifford{{{Gate::Kind::clifford, '0', +1},
                                     {Gate::Kind::clifford, '0', -1},
                                     {Gate::Kind::clifford, 'x', +1},
                                     {Gate::Kind::clifford, 'x', -1},
                                     {Gate::Kind::clifford, 'y', +1},
                                     {Gate::Kind::clifford, 'y', -1}}};

using Vec2 = std::array<Complex, 2>;

Vec2 act(const Mat2& u, const Vec2& v) { return {u[0] * v[0] + u[1] * v[1], u[2] * v[0] + u[3] * v[1]}; }

// Returns 0 or 1 if v is that σ_z eigenstate (to 1e-12), −1 otherwise.
int z_eigenstate(const Vec2& v) {
  if (std::norm(v[1]) < 1e-12) return 0;
  if (std::norm(v[0]) < 1e-12) return 1;
  return -1;
}

}  // namespace

Mat2 Gate::matrix(double error) const {
  const double half_angle = (kind == Kind::pauli ? std::numbers::pi / 2.0 : std::numbers::pi / 4.0) + error / 2.0;
  const Mat2 s = sigma(axis);
  // exp(i·sign·θ·σ) = cos θ·I + i·sign·sin θ·σ, valid for σ² = I including σ_0.
  const Complex c = std::cos(half_angle);
  const Complex k = kI * static_cast<double>(sign) * std::sin(half_angle);
  return {c + k * s[0], k * s[1], k * s[2], c + k * s[3]};
}

std::string Gate::name() const {
  return std::string(kind == Kind::pauli ? "P" : "C") + (sign > 0 ? "+" : "-") + axis;
}

std::span<const Gate> pauli_gates() { return kPauli; }
std::span<const Gate> clifford_gates() { return kClifford; }

Sequence generate_sequence(int length, Stream& stream) {
  if (length < 0) throw std::invalid_argument("generate_sequence: length must be >= 0");
  Sequence seq;
  seq.length = length;
  seq.gates.reserve(2 * static_cast<std::size_t>(length) + 3);
  Vec2 state{1.0, 0.0};
  auto push = [&](const Gate& g) {
    seq.gates.push_back(g);
    state = act(g.matrix(), state);
  };
  for (int k = 0; k <= length; ++k) {
    push(kPauli[stream.below(kPauli.size())]);
    if (k < length) {
      push(kClifford[stream.below(kClifford.size())]);
      continue;
    }
    bool closed = false;
    for (const Gate& c : kClifford) {
      if (z_eigenstate(act(c.matrix(), state)) >= 0) {
        push(c);
        closed = true;
        break;
      }
    }
    if (!closed) throw std::logic_error("generate_sequence: no closing Clifford (gate set not closed)");
  }
  push(kPauli[stream.below(kPauli.size())]);
  seq.target = z_eigenstate(state);
  if (seq.target < 0) throw std::logic_error("generate_sequence: final state is not a sigma_z eigenstate");
  return seq;
}

void GateErrorModel::validate() const {
  if (!(depolarizing >= 0.0 && depolarizing <= 1.0)) throw std::invalid_argument("GateErrorModel: depolarizing must be in [0, 1]");
  if (!(over_rotation >= 0.0) || !std::isfinite(over_rotation))
    throw std::invalid_argument("GateErrorModel: over_rotation must be >= 0");
}

double depolarizing_for_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 0.5)) throw std::invalid_argument("depolarizing_for_epsilon: epsilon must be in [0, 1/2)");
  return 1.0 - std::sqrt(1.0 - 2.0 * epsilon);
}

double survival_probability(const Sequence& seq, const GateErrorModel& error, Stream* stream) {
  error.validate();
  if (error.over_rotation > 0.0 && stream == nullptr)
    throw std::invalid_argument("survival_probability: over-rotation requires a random stream");
  Mat2 rho{1.0, 0.0, 0.0, 0.0};
  const double p = error.depolarizing;
  for (const Gate& g : seq.gates) {
    const Mat2 u = g.matrix(error.over_rotation > 0.0 ? error.over_rotation * stream->normal() : 0.0);
    const Mat2 u_dag{std::conj(u[0]), std::conj(u[2]), std::conj(u[1]), std::conj(u[3])};
    rho = mul(mul(u, rho), u_dag);
    const Complex half_trace = 0.5 * (rho[0] + rho[3]);
    rho = {(1.0 - p) * rho[0] + p * half_trace, (1.0 - p) * rho[1], (1.0 - p) * rho[2],
           (1.0 - p) * rho[3] + p * half_trace};
  }
  const double pop = (seq.target == 0 ? rho[0] : rho[3]).real();
  return std::clamp(pop, 0.0, 1.0);
}

Curve run_rb(const GateErrorModel& error, std::span<const int> lengths, std::size_t sequences, std::size_t shots,
             std::uint64_t seed, unsigned threads) {
  error.validate();
  if (lengths.empty()) throw std::invalid_argument("run_rb: lengths must be nonempty");
  if (sequences == 0 || shots == 0) throw std::invalid_argument("run_rb: sequences and shots must be >= 1");
  for (int l : lengths)
    if (l < 0) throw std::invalid_argument("run_rb: lengths must be >= 0");

  const std::size_t total = lengths.size() * sequences;
  std::vector<double> per_sequence(total);
  parallel_for(total, threads, [&](std::size_t idx) {
    const std::size_t k = idx / sequences;
    const std::size_t s = idx % sequences;
    Stream stream(seed, Stream::derive({k, s}));
    const Sequence seq = generate_sequence(lengths[k], stream);
    std::size_t hits = 0;
    if (error.over_rotation > 0.0) {
      for (std::size_t shot = 0; shot < shots; ++shot) {
        const double prob = survival_probability(seq, error, &stream);
        hits += stream.uniform() < prob ? 1 : 0;
      }
    } else {
      const double prob = survival_probability(seq, error);
      for (std::size_t shot = 0; shot < shots; ++shot) hits += stream.uniform() < prob ? 1 : 0;
    }
    per_sequence[idx] = static_cast<double>(hits) / static_cast<double>(shots);
  });

  Curve curve;
  curve.seed = seed;
  const double n = static_cast<double>(sequences);
  for (std::size_t k = 0; k < lengths.size(); ++k) {
    double sum = 0.0;
    for (std::size_t s = 0; s < sequences; ++s) sum += per_sequence[k * sequences + s];
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t s = 0; s < sequences; ++s) {
      const double d = per_sequence[k * sequences + s] - mean;
      ss += d * d;
    }
    const double err = sequences > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    curve.points.push_back({lengths[k], mean, err, sequences, shots});
  }
  return curve;
}

}  // namespace qudd::rb
