// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qudd/ensemble.hpp"
#include "qudd/evolution.hpp"
#include "qudd/qudit_core.hpp"
#include "qudd/rb_sim.hpp"

namespace qudd {

struct DecayModelParams {
  double T2 = std::numeric_limits<double>::infinity();  // s; +inf disables the Gaussian envelope
  double g = 1.0;                                       // per-repetition contrast
  std::vector<double> harmonic_frequencies{150.0};      // Hz, fixed
  std::vector<double> harmonic_amplitudes{0.0};         // T, one per frequency
  double floor = 1.0 / 3.0;

  void validate() const;
};

struct ModelOptions {
  /// Level populations |c_i|² of the prepared state; empty means uniform.
  std::vector<double> populations;
  /// Uniform α nodes per harmonic (tensor product over harmonics).
  std::size_t quadrature_nodes = 64;
  DwellTable dwell = mldd_dwell();
};

/// c(T)·g^N·(d(T) − floor) + floor with c = exp(−(T/T2)²) and
/// d(T) = ⟨|Σ_i p_i e^{iφ_i}|²⟩_α. N = 0 is bare evolution; N ≥ 1 needs three levels.
double model_fidelity(double T, int N, const DecayModelParams& params, const LevelSystem& system,
                      const ModelOptions& options = {});

/// Σ p_i², the long-time fidelity of a superposition with populations p.
double superposition_floor(const std::vector<double>& populations);

struct Estimate {
  std::string name;
  double value = 0.0;
  double uncertainty = 0.0;  // bootstrap standard deviation
};

struct FitDiagnostics {
  bool converged = false;
  int iterations = 0;
  int evaluations = 0;
  int starts = 0;
  double objective = 0.0;  // Σ weighted residual²
  /// Best objective per solver iteration, before model-based reweighting.
  std::vector<double> history;
  int bootstrap_resamples = 0;
  int bootstrap_failures = 0;
};

struct FitReport {
  std::vector<Estimate> estimates;
  double residual_norm = 0.0;
  /// Weighted residuals (model − data)/σ, one row per dataset.
  std::vector<std::vector<double>> residuals;
  FitDiagnostics diagnostics;

  const Estimate& at(const std::string& name) const;
};

class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, FitDiagnostics diagnostics = {})
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
  const FitDiagnostics& diagnostics() const { return diagnostics_; }

 private:
  FitDiagnostics diagnostics_;
};

struct FitOptions {
  int starts = 8;
  int bootstrap = 200;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  double rel_tol = 1e-9;
};

struct DecayDataset {
  DecayCurve curve;
  int repetitions = 0;
  std::vector<double> populations;  // empty means uniform over the system
};

struct JointFitSpec {
  bool share_g = true;
  bool share_amplitudes = true;
  bool fit_amplitudes = true;
  bool fit_g = true;
  double fixed_g = 1.0;
  std::vector<double> frequencies{150.0};
  /// Used when fit_amplitudes is false.
  std::vector<double> fixed_amplitudes{0.0};
  ModelOptions model;
};

struct JointFit : FitReport {
  /// Point estimates per dataset, in input order.
  std::vector<DecayModelParams> params;
};

/// Weighted joint least squares over all datasets. Per-dataset T2; g and
/// amplitudes shared or per-dataset as requested. Multi-start simplex on
/// (log T2, logit g, log amplitude), Levenberg-Marquardt refinement, then a
/// point bootstrap for uncertainties. Estimates are named T2[k], g or g[k],
/// amp[j] or amp[k][j].
JointFit fit_joint(const std::vector<DecayDataset>& datasets, const LevelSystem& system, const JointFitSpec& spec = {},
                   const FitOptions& options = {});

/// a·exp(−(t/T2)²) + b. Estimates: a, b, T2.
FitReport fit_ramsey(const DecayCurve& curve, const FitOptions& options = {});

using rb::SurvivalPoint;

/// 1/2 + 1/2·(1 − 2ε_im)·(1 − 2ε)^l with ε, ε_im in [0, 1/2). Estimates: epsilon, epsilon_im.
FitReport fit_rb(const std::vector<SurvivalPoint>& survival, const FitOptions& options = {});

/// Curve from model_fidelity; with a seed each point is Binomial(trials, F)/trials,
/// otherwise exact. stderr is the binomial standard error of the reported value.
DecayCurve synthesize_curve(const std::vector<double>& T_grid, int N, const DecayModelParams& params,
                            const LevelSystem& system, std::size_t trials, std::optional<std::uint64_t> seed,
                            const ModelOptions& options = {});

}  // namespace qudd
