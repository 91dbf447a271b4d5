// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "qudd/random.hpp"

namespace qudd::opt {

using Objective = std::function<double(std::span<const double>)>;

/// Fills `r` (resized by the callee) with residuals at `x`. The objective is Σ r².
using ResidualFn = std::function<void(std::span<const double> x, std::vector<double>& r)>;

struct Result {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  /// Best objective after each iteration; non-increasing.
  std::vector<double> history;
};

struct NelderMeadOptions {
  int max_iterations = 3000;
  double rel_tol = 1e-9;
  double initial_step = 0.5;
};

Result nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& options = {});

struct LmOptions {
  int max_iterations = 200;
  double rel_tol = 1e-9;
  double fd_step = 1e-6;
  double initial_lambda = 1e-3;
  /// Also stop once Σ r² falls to this value (exact-fit data).
  double abs_tol = 1e-20;
};

/// Levenberg-Marquardt with a forward-difference Jacobian. Only steps that
/// lower Σ r² are accepted.
Result levenberg_marquardt(const ResidualFn& residuals, std::vector<double> x0, const LmOptions& options = {});

/// `samples` points, one per stratum in every coordinate, jittered inside the stratum.
std::vector<std::vector<double>> latin_hypercube(std::size_t samples,
                                                 std::span<const std::pair<double, double>> bounds, Stream& stream);

}  // namespace qudd::opt
