// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#include "qudd/optimize.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qudd::opt {
namespace {

double finite_or_inf(double v) { return std::isfinite(v) ? v : std::numeric_limits<double>::infinity(); }

bool relative_change_below(double before, double after, double tol) {
  return std::abs(before - after) <= tol * std::max(std::abs(before), std::numeric_limits<double>::min());
}

}  // namespace

Result nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  if (n == 0) throw std::invalid_argument("nelder_mead: empty parameter vector");
  Result res;
  auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    return finite_or_inf(f(x));
  };

  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t k = 0; k < n; ++k) simplex[k + 1][k] += options.initial_step;
  std::vector<double> values(n + 1);
  for (std::size_t k = 0; k <= n; ++k) values[k] = eval(simplex[k]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  auto point = [&](double t, std::vector<double>& out) {
    for (std::size_t k = 0; k < n; ++k) out[k] = centroid[k] + t * (simplex[order[n]][k] - centroid[k]);
  };

  for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const double best = values[order[0]];
    const double worst = values[order[n]];
    res.history.push_back(best);
    if (std::isfinite(worst) && relative_change_below(worst, best, options.rel_tol)) {
      res.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t c = 0; c < n; ++c) centroid[c] += simplex[order[k]][c] / static_cast<double>(n);

    point(-1.0, trial);
    const double fr = eval(trial);
    if (fr < best) {
      point(-2.0, trial2);
      const double fe = eval(trial2);
      if (fe < fr) {
        simplex[order[n]] = trial2;
        values[order[n]] = fe;
      } else {
        simplex[order[n]] = trial;
        values[order[n]] = fr;
      }
      continue;
    }
    if (fr < values[order[n - 1]]) {
      simplex[order[n]] = trial;
      values[order[n]] = fr;
      continue;
    }
    const bool outside = fr < worst;
    point(outside ? -0.5 : 0.5, trial2);
    const double fc = eval(trial2);
    if (fc < (outside ? fr : worst)) {
      simplex[order[n]] = trial2;
      values[order[n]] = fc;
      continue;
    }
    for (std::size_t k = 1; k <= n; ++k) {
      auto& v = simplex[order[k]];
      for (std::size_t c = 0; c < n; ++c) v[c] = simplex[order[0]][c] + 0.5 * (v[c] - simplex[order[0]][c]);
      values[order[k]] = eval(v);
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  res.x = simplex[static_cast<std::size_t>(best_it - values.begin())];
  res.value = *best_it;
  return res;
}

Result levenberg_marquardt(const ResidualFn& residuals, std::vector<double> x0, const LmOptions& options) {
  const std::size_t n = x0.size();
  if (n == 0) throw std::invalid_argument("levenberg_marquardt: empty parameter vector");
  Result res;
  std::vector<double> r, r_step;
  auto objective = [&](const std::vector<double>& x, std::vector<double>& out) {
    ++res.evaluations;
    residuals(x, out);
    double s = 0.0;
    for (double v : out) s += v * v;
    return finite_or_inf(s);
  };

  std::vector<double> x = std::move(x0);
  double value = objective(x, r);
  if (!std::isfinite(value)) throw std::invalid_argument("levenberg_marquardt: non-finite objective at start");
  double lambda = options.initial_lambda;
  res.history.push_back(value);

  for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
    if (value <= options.abs_tol) {
      res.converged = true;
      break;
    }
    const std::size_t m = r.size();
    Eigen::MatrixXd J(m, n);
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<double> xs = x;
      const double h = options.fd_step * std::max(1.0, std::abs(x[c]));
      xs[c] += h;
      objective(xs, r_step);
      if (r_step.size() != m) throw std::logic_error("levenberg_marquardt: residual count changed");
      for (std::size_t k = 0; k < m; ++k) J(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) = (r_step[k] - r[k]) / h;
    }
    const Eigen::Map<const Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(m));
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd grad = J.transpose() * rv;
    if (grad.lpNorm<Eigen::Infinity>() <= 1e-14 * std::max(1.0, value)) {
      res.converged = true;
      break;
    }

    bool accepted = false;
    double new_value = value;
    while (lambda < 1e16) {
      Eigen::MatrixXd A = JtJ;
      for (Eigen::Index c = 0; c < A.rows(); ++c) A(c, c) += lambda * std::max(JtJ(c, c), 1e-12);
      const Eigen::VectorXd step = A.ldlt().solve(-grad);
      std::vector<double> xs(n);
      for (std::size_t c = 0; c < n; ++c) xs[c] = x[c] + step(static_cast<Eigen::Index>(c));
      new_value = objective(xs, r_step);
      if (new_value < value) {
        x = std::move(xs);
        r.swap(r_step);
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) {
      // No descent direction left at any damping: a stationary point.
      res.converged = true;
      break;
    }
    const double before = value;
    value = new_value;
    res.history.push_back(value);
    if (relative_change_below(before, value, options.rel_tol)) {
      res.converged = true;
      ++res.iterations;
      break;
    }
  }
  res.x = std::move(x);
  res.value = value;
  return res;
}

std::vector<std::vector<double>> latin_hypercube(std::size_t samples,
                                                 std::span<const std::pair<double, double>> bounds, Stream& stream) {
  if (samples == 0) throw std::invalid_argument("latin_hypercube: samples must be >= 1");
  std::vector<std::vector<double>> out(samples, std::vector<double>(bounds.size()));
  std::vector<std::size_t> perm(samples);
  for (std::size_t c = 0; c < bounds.size(); ++c) {
    const auto [lo, hi] = bounds[c];
    if (!(hi >= lo)) throw std::invalid_argument("latin_hypercube: bound with hi < lo");
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t k = samples; k > 1; --k) std::swap(perm[k - 1], perm[stream.below(k)]);
    for (std::size_t s = 0; s < samples; ++s) {
      const double u = (static_cast<double>(perm[s]) + stream.uniform()) / static_cast<double>(samples);
      out[s][c] = lo + u * (hi - lo);
    }
  }
  return out;
}

}  // namespace qudd::opt
