// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#include "qudd/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>

#include "qudd/kernels/phasor.hpp"
#include "qudd/optimize.hpp"
#include "qudd/parallel.hpp"

namespace qudd {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

std::vector<double> resolve_populations(const std::vector<double>& populations, std::size_t dim) {
  if (populations.empty()) return std::vector<double>(dim, 1.0 / static_cast<double>(dim));
  if (populations.size() != dim) throw std::invalid_argument("model: populations size must match the system dimension");
  double total = 0.0;
  for (double p : populations) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("model: populations must be >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("model: populations must sum to 1");
  return populations;
}

// Unit-amplitude phases of one (T, N) point on the α grid. φ_i at node k of
// harmonic h with amplitude a_h is a_h·unit[(h·L + i)·M + k]; phases from
// several harmonics add.
class PointModel {
 public:
  PointModel(double T, int N, const LevelSystem& system, const std::vector<double>& frequencies,
             std::vector<double> populations, const ModelOptions& options)
      : levels_(system.dim()), nodes_(options.quadrature_nodes), harmonics_(frequencies.size()),
        weights_(std::move(populations)) {
    if (!(T >= 0.0) || !std::isfinite(T)) throw std::invalid_argument("model_fidelity: T must be >= 0");
    if (N < 0) throw std::invalid_argument("model_fidelity: N must be >= 0");
    if (N > 0 && levels_ != 3) throw std::invalid_argument("model_fidelity: MLDD phases need a three-level system");
    if (nodes_ < 2) throw std::invalid_argument("model_fidelity: quadrature_nodes must be >= 2");
    double total_nodes = 1.0;
    for (std::size_t h = 0; h < harmonics_; ++h) total_nodes *= static_cast<double>(nodes_);
    if (total_nodes > 1 << 22) throw std::invalid_argument("model_fidelity: quadrature tensor grid too large");

    // Segment list: (t0, t1, dwell row). N = 0 is one bare segment.
    struct Segment {
      double t0, t1;
      std::array<std::size_t, 3> dwell;
    };
    std::vector<Segment> segments;
    if (N == 0) {
      segments.push_back({0.0, T, {0, 1, 2}});
    } else {
      const double n = N;
      for (int k = 0; k < N; ++k)
        for (int s = 0; s < 3; ++s)
          segments.push_back({(k / n + s / (3.0 * n)) * T, (k / n + (s + 1) / (3.0 * n)) * T, options.dwell[s]});
    }

    unit_.assign(harmonics_ * levels_ * nodes_, 0.0);
    std::vector<double> cos_a(nodes_), sin_a(nodes_);
    for (std::size_t k = 0; k < nodes_; ++k) {
      const double alpha = kTwoPi * static_cast<double>(k) / static_cast<double>(nodes_);
      cos_a[k] = std::cos(alpha);
      sin_a[k] = std::sin(alpha);
    }
    for (std::size_t h = 0; h < harmonics_; ++h) {
      const double omega = kTwoPi * frequencies[h];
      for (std::size_t i = 0; i < levels_; ++i) {
        double u = 0.0, v = 0.0;
        for (const auto& seg : segments) {
          const double delta = system.sensitivity(N == 0 ? i : seg.dwell[i]);
          u += delta * (std::sin(omega * seg.t1) - std::sin(omega * seg.t0)) / omega;
          v += delta * (std::cos(omega * seg.t1) - std::cos(omega * seg.t0)) / omega;
        }
        double* row = &unit_[(h * levels_ + i) * nodes_];
        for (std::size_t k = 0; k < nodes_; ++k) row[k] = u * cos_a[k] + v * sin_a[k];
      }
    }
  }

  /// ⟨|Σ_i p_i e^{iφ_i}|²⟩ over the α grid.
  double average(const std::vector<double>& amplitudes) const {
    if (amplitudes.size() != harmonics_) throw std::invalid_argument("model_fidelity: amplitude count mismatch");
    const auto& kt = kernels::active();
    if (harmonics_ == 0) return 1.0;  // no oscillating field: all phases vanish
    std::size_t total = 1;
    for (std::size_t h = 0; h < harmonics_; ++h) total *= nodes_;
    std::vector<double> phases(levels_ * total, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
      std::size_t rem = t;
      for (std::size_t h = 0; h < harmonics_; ++h) {
        const std::size_t k = rem % nodes_;
        rem /= nodes_;
        for (std::size_t i = 0; i < levels_; ++i)
          phases[i * total + t] += amplitudes[h] * unit_[(h * levels_ + i) * nodes_ + k];
      }
    }
    return kt.phasor_power_sum(weights_.data(), levels_, phases.data(), total) / static_cast<double>(total);
  }

 private:
  std::size_t levels_, nodes_, harmonics_;
  std::vector<double> weights_;
  std::vector<double> unit_;
};

double envelope(double T, int N, double T2, double g) {
  const double c = std::isinf(T2) ? 1.0 : std::exp(-(T / T2) * (T / T2));
  return c * std::pow(g, N);
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Generic weighted least-squares problem over grouped points. residual(θ, g, i)
// is the weighted residual of point i in group g.
struct Problem {
  std::vector<std::size_t> group_sizes;
  std::function<double(std::span<const double>, std::size_t, std::size_t)> residual;
  /// Maps θ to the reported estimate values.
  std::function<std::vector<double>(std::span<const double>)> report;
  std::vector<std::string> names;
};

using Selection = std::vector<std::vector<std::size_t>>;

Selection all_points(const Problem& p) {
  Selection sel(p.group_sizes.size());
  for (std::size_t g = 0; g < sel.size(); ++g) {
    sel[g].resize(p.group_sizes[g]);
    std::iota(sel[g].begin(), sel[g].end(), 0);
  }
  return sel;
}

opt::ResidualFn residual_fn(const Problem& p, const Selection& sel) {
  return [&p, &sel](std::span<const double> x, std::vector<double>& r) {
    r.clear();
    for (std::size_t g = 0; g < sel.size(); ++g)
      for (std::size_t i : sel[g]) r.push_back(p.residual(x, g, i));
  };
}

double objective(const Problem& p, const Selection& sel, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t g = 0; g < sel.size(); ++g)
    for (std::size_t i : sel[g]) {
      const double r = p.residual(x, g, i);
      s += r * r;
    }
  return s;
}

struct Solved {
  std::vector<double> theta;
  FitDiagnostics diagnostics;
};

// Multi-start simplex, each start refined by Levenberg-Marquardt; the best
// refined start wins (ties broken by start index).
Solved solve(const Problem& p, const std::vector<std::vector<double>>& starts, const FitOptions& options) {
  const Selection sel = all_points(p);
  std::vector<opt::Result> nm(starts.size()), lm(starts.size());
  std::vector<char> ok(starts.size(), 0);
  parallel_for(starts.size(), options.threads, [&](std::size_t s) {
    opt::NelderMeadOptions nmo;
    nmo.rel_tol = 1e-6;
    nm[s] = opt::nelder_mead([&](std::span<const double> x) { return objective(p, sel, x); }, starts[s], nmo);
    if (!std::isfinite(nm[s].value)) return;
    opt::LmOptions lmo;
    lmo.rel_tol = options.rel_tol;
    lm[s] = opt::levenberg_marquardt(residual_fn(p, sel), nm[s].x, lmo);
    ok[s] = 1;
  });

  Solved out;
  FitDiagnostics& d = out.diagnostics;
  d.starts = static_cast<int>(starts.size());
  std::size_t best = starts.size();
  for (std::size_t s = 0; s < starts.size(); ++s) {
    d.evaluations += nm[s].evaluations + lm[s].evaluations;
    if (ok[s] && lm[s].converged && (best == starts.size() || lm[s].value < lm[best].value)) best = s;
  }
  if (best == starts.size()) {
    d.converged = false;
    throw FitError("fit did not converge from any start", d);
  }
  // Best-so-far objective across the winning start's simplex and refinement stages.
  double running = std::numeric_limits<double>::infinity();
  for (double v : nm[best].history) d.history.push_back(running = std::min(running, v));
  for (double v : lm[best].history) d.history.push_back(running = std::min(running, v));
  d.iterations = nm[best].iterations + lm[best].iterations;
  d.objective = lm[best].value;
  d.converged = true;
  out.theta = lm[best].x;
  return out;
}

// Point bootstrap: resample each group with replacement, refit by LM from the
// full-data optimum. Returns the reported values of every successful resample.
std::vector<std::vector<double>> bootstrap(const Problem& p, const std::vector<double>& theta,
                                           const FitOptions& options, int& failures) {
  const std::size_t B = static_cast<std::size_t>(std::max(options.bootstrap, 0));
  std::vector<std::vector<double>> values(B);
  std::vector<char> good(B, 0);
  parallel_for(B, options.threads, [&](std::size_t b) {
    Stream stream(options.seed, Stream::derive({0xB007, b}));
    Selection sel(p.group_sizes.size());
    for (std::size_t g = 0; g < sel.size(); ++g) {
      sel[g].resize(p.group_sizes[g]);
      for (auto& i : sel[g]) i = stream.below(p.group_sizes[g]);
    }
    try {
      opt::LmOptions lmo;
      lmo.rel_tol = options.rel_tol;
      const opt::Result r = opt::levenberg_marquardt(residual_fn(p, sel), theta, lmo);
      if (!r.converged) return;
      std::vector<double> v = p.report(r.x);
      for (double x : v)
        if (!std::isfinite(x)) return;
      values[b] = std::move(v);
      good[b] = 1;
    } catch (const std::exception&) {
    }
  });
  std::vector<std::vector<double>> out;
  failures = 0;
  for (std::size_t b = 0; b < B; ++b) {
    if (good[b])
      out.push_back(std::move(values[b]));
    else
      ++failures;
  }
  return out;
}

FitReport finish(const Problem& p, const Solved& solved, const FitOptions& options) {
  FitReport rep;
  rep.diagnostics = solved.diagnostics;
  const std::vector<double> point = p.report(solved.theta);
  int failures = 0;
  const auto samples = bootstrap(p, solved.theta, options, failures);
  rep.diagnostics.bootstrap_resamples = static_cast<int>(samples.size());
  rep.diagnostics.bootstrap_failures = failures;
  for (std::size_t k = 0; k < point.size(); ++k) {
    std::vector<double> column;
    column.reserve(samples.size());
    for (const auto& s : samples) column.push_back(s[k]);
    rep.estimates.push_back({p.names[k], point[k], sample_std(column)});
  }
  rep.residuals.resize(p.group_sizes.size());
  for (std::size_t g = 0; g < p.group_sizes.size(); ++g)
    for (std::size_t i = 0; i < p.group_sizes[g]; ++i) rep.residuals[g].push_back(p.residual(solved.theta, g, i));
  rep.residual_norm = std::sqrt(solved.diagnostics.objective);
  return rep;
}

double sigma_floor(std::size_t trials) { return trials > 0 ? 0.5 / static_cast<double>(trials) : 1e-6; }

// Binomial σ from the model value rather than the observed one. Observed-value
// weights favour upward fluctuations near F = 1 and bias g and T2.
double binomial_sigma(double f, std::size_t trials) {
  const double p = std::clamp(f, 0.0, 1.0);
  return std::max(std::sqrt(p * (1.0 - p) / static_cast<double>(trials)), sigma_floor(trials));
}

// Alternates weight updates with LM refinement from the current optimum.
// `reweight` recomputes σ at θ and returns false when no σ changed.
void refine_reweighted(const Problem& p, Solved& solved, const FitOptions& options,
                       const std::function<bool(std::span<const double>)>& reweight) {
  const Selection sel = all_points(p);
  for (int pass = 0; pass < 3; ++pass) {
    if (!reweight(solved.theta)) return;
    opt::LmOptions lmo;
    lmo.rel_tol = options.rel_tol;
    const opt::Result r = opt::levenberg_marquardt(residual_fn(p, sel), solved.theta, lmo);
    solved.diagnostics.evaluations += r.evaluations;
    solved.diagnostics.iterations += r.iterations;
    if (!r.converged) throw FitError("reweighted refinement did not converge", solved.diagnostics);
    solved.theta = r.x;
    solved.diagnostics.objective = r.value;
  }
}

void reject_flat(const std::vector<double>& values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*hi - *lo <= 1e-12) throw FitError("degenerate data: all fidelities are equal");
}

std::pair<double, double> positive_span(const std::vector<DecayPoint>& points) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& pt : points) {
    if (pt.T > 0.0) lo = std::min(lo, pt.T);
    hi = std::max(hi, pt.T);
  }
  if (!(hi > 0.0)) throw std::invalid_argument("fit: curve needs at least one point with T > 0");
  return {lo, hi};
}

}  // namespace

void DecayModelParams::validate() const {
  if (!(T2 > 0.0)) throw std::invalid_argument("DecayModelParams: T2 must be > 0");
  if (!(g > 0.0 && g <= 1.0)) throw std::invalid_argument("DecayModelParams: g must be in (0, 1]");
  if (harmonic_frequencies.size() != harmonic_amplitudes.size())
    throw std::invalid_argument("DecayModelParams: one amplitude per harmonic frequency");
  for (double f : harmonic_frequencies)
    if (!(f > 0.0) || !std::isfinite(f)) throw std::invalid_argument("DecayModelParams: frequencies must be > 0");
  for (double a : harmonic_amplitudes)
    if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("DecayModelParams: amplitudes must be >= 0");
  if (!(floor > 0.0 && floor <= 1.0)) throw std::invalid_argument("DecayModelParams: floor must be in (0, 1]");
}

double superposition_floor(const std::vector<double>& populations) {
  double s = 0.0;
  for (double p : populations) s += p * p;
  return s;
}

double model_fidelity(double T, int N, const DecayModelParams& params, const LevelSystem& system,
                      const ModelOptions& options) {
  params.validate();
  const PointModel pm(T, N, system, params.harmonic_frequencies,
                      resolve_populations(options.populations, system.dim()), options);
  const double d = pm.average(params.harmonic_amplitudes);
  return envelope(T, N, params.T2, params.g) * (d - params.floor) + params.floor;
}

const Estimate& FitReport::at(const std::string& name) const {
  for (const auto& e : estimates)
    if (e.name == name) return e;
  throw std::out_of_range("FitReport: no estimate named " + name);
}

JointFit fit_joint(const std::vector<DecayDataset>& datasets, const LevelSystem& system, const JointFitSpec& spec,
                   const FitOptions& options) {
  if (datasets.empty()) throw std::invalid_argument("fit_joint: need at least one dataset");
  const std::size_t K = datasets.size();
  const std::size_t H = spec.frequencies.size();
  if (!spec.fit_amplitudes && spec.fixed_amplitudes.size() != H)
    throw std::invalid_argument("fit_joint: fixed_amplitudes needs one value per frequency");
  if (spec.fit_amplitudes && H == 0) throw std::invalid_argument("fit_joint: no harmonic frequencies to fit");
  if (!spec.fit_g && !(spec.fixed_g > 0.0 && spec.fixed_g <= 1.0)) throw std::invalid_argument("fit_joint: fixed_g out of range");

  struct Data {
    std::vector<PointModel> models;
    std::vector<double> T, y, sigma;
    int N;
    double floor;
    std::size_t trials;
  };
  std::vector<Data> data(K);
  std::vector<double> all_y;
  for (std::size_t k = 0; k < K; ++k) {
    const auto& ds = datasets[k];
    if (ds.curve.points.size() < 4) throw std::invalid_argument("fit_joint: each dataset needs at least 4 points");
    if (ds.repetitions < 0) throw std::invalid_argument("fit_joint: repetitions must be >= 0");
    const auto pops = resolve_populations(ds.populations, system.dim());
    data[k].N = ds.repetitions;
    data[k].floor = superposition_floor(pops);
    data[k].trials = ds.curve.trials;
    for (const auto& pt : ds.curve.points) {
      data[k].models.emplace_back(pt.T, ds.repetitions, system, spec.frequencies, pops, spec.model);
      data[k].T.push_back(pt.T);
      data[k].y.push_back(pt.fidelity);
      data[k].sigma.push_back(std::max(pt.stderr, sigma_floor(ds.curve.trials)));
      all_y.push_back(pt.fidelity);
    }
  }
  reject_flat(all_y);

  // θ layout: log T2 per dataset, then logit g (0, 1 or K), then log amplitudes (0, H or K·H).
  const std::size_t n_g = !spec.fit_g ? 0 : spec.share_g ? 1 : K;
  const std::size_t n_a = !spec.fit_amplitudes ? 0 : spec.share_amplitudes ? H : K * H;
  const std::size_t n_theta = K + n_g + n_a;

  auto unpack = [&, K, H, n_g](std::span<const double> x, std::size_t k, std::vector<double>& amps) {
    const double T2 = std::exp(x[k]);
    const double g = n_g == 0 ? spec.fixed_g : sigmoid(x[K + (n_g == 1 ? 0 : k)]);
    amps.resize(H);
    for (std::size_t h = 0; h < H; ++h) {
      if (!spec.fit_amplitudes)
        amps[h] = spec.fixed_amplitudes[h];
      else
        amps[h] = std::exp(x[K + n_g + (spec.share_amplitudes ? h : k * H + h)]);
    }
    return std::pair{T2, g};
  };

  Problem prob;
  for (const auto& d : data) prob.group_sizes.push_back(d.y.size());
  auto predict = [&](std::span<const double> x, std::size_t k, std::size_t i) {
    thread_local std::vector<double> amps;
    const auto [T2, g] = unpack(x, k, amps);
    const Data& d = data[k];
    return envelope(d.T[i], d.N, T2, g) * (d.models[i].average(amps) - d.floor) + d.floor;
  };
  prob.residual = [&](std::span<const double> x, std::size_t k, std::size_t i) {
    return (predict(x, k, i) - data[k].y[i]) / data[k].sigma[i];
  };
  for (std::size_t k = 0; k < K; ++k) prob.names.push_back("T2[" + std::to_string(k) + "]");
  if (n_g == 1) prob.names.push_back("g");
  for (std::size_t k = 0; k < n_g && n_g > 1; ++k) prob.names.push_back("g[" + std::to_string(k) + "]");
  if (spec.fit_amplitudes) {
    if (spec.share_amplitudes) {
      for (std::size_t h = 0; h < H; ++h) prob.names.push_back("amp[" + std::to_string(h) + "]");
    } else {
      for (std::size_t k = 0; k < K; ++k)
        for (std::size_t h = 0; h < H; ++h)
          prob.names.push_back("amp[" + std::to_string(k) + "][" + std::to_string(h) + "]");
    }
  }
  prob.report = [n_theta, K, n_g](std::span<const double> x) {
    std::vector<double> v(n_theta);
    for (std::size_t c = 0; c < n_theta; ++c) {
      if (c < K)
        v[c] = std::exp(x[c]);
      else if (c < K + n_g)
        v[c] = sigmoid(x[c]);
      else
        v[c] = std::exp(x[c]);
    }
    return v;
  };

  // Start box: log T2 over the sampled span, g in [0.85, 0.999], amplitudes
  // giving a peak differential phase of 0.02 to 6 rad.
  std::vector<std::pair<double, double>> bounds;
  for (const auto& ds : datasets) {
    const auto [lo, hi] = positive_span(ds.curve.points);
    bounds.emplace_back(std::log(lo), std::log(5.0 * hi));
  }
  for (std::size_t c = 0; c < n_g; ++c) bounds.emplace_back(logit(0.85), logit(0.999));
  const auto& sens = system.sensitivities();
  const auto [smin, smax] = std::minmax_element(sens.begin(), sens.end());
  const double spread = std::max(*smax - *smin, 1e-30);
  for (std::size_t c = 0; c < n_a; ++c) {
    const double omega = kTwoPi * spec.frequencies[c % H];
    bounds.emplace_back(std::log(0.02 * omega / spread), std::log(6.0 * omega / spread));
  }
  Stream stream(options.seed, Stream::derive({0x57A7}));
  const auto starts = opt::latin_hypercube(static_cast<std::size_t>(std::max(options.starts, 1)), bounds, stream);

  Solved solved = solve(prob, starts, options);
  refine_reweighted(prob, solved, options, [&](std::span<const double> x) {
    bool changed = false;
    for (std::size_t k = 0; k < K; ++k) {
      if (data[k].trials == 0) continue;
      for (std::size_t i = 0; i < data[k].y.size(); ++i) {
        data[k].sigma[i] = binomial_sigma(predict(x, k, i), data[k].trials);
        changed = true;
      }
    }
    return changed;
  });
  JointFit out;
  static_cast<FitReport&>(out) = finish(prob, solved, options);
  std::vector<double> amps;
  for (std::size_t k = 0; k < K; ++k) {
    const auto [T2, g] = unpack(solved.theta, k, amps);
    DecayModelParams p;
    p.T2 = T2;
    p.g = g;
    p.harmonic_frequencies = spec.frequencies;
    p.harmonic_amplitudes = amps;
    p.floor = data[k].floor;
    out.params.push_back(p);
  }
  return out;
}

FitReport fit_ramsey(const DecayCurve& curve, const FitOptions& options) {
  if (curve.points.size() < 4) throw std::invalid_argument("fit_ramsey: need at least 4 points");
  std::vector<double> ys;
  for (const auto& pt : curve.points) ys.push_back(pt.fidelity);
  reject_flat(ys);
  const auto [lo, hi] = positive_span(curve.points);
  const double sfloor = sigma_floor(curve.trials);

  Problem prob;
  prob.group_sizes = {curve.points.size()};
  prob.residual = [&](std::span<const double> x, std::size_t, std::size_t i) {
    const auto& pt = curve.points[i];
    const double T2 = std::exp(x[2]);
    const double f = x[0] * std::exp(-(pt.T / T2) * (pt.T / T2)) + x[1];
    return (f - pt.fidelity) / std::max(pt.stderr, sfloor);
  };
  prob.names = {"a", "b", "T2"};
  prob.report = [](std::span<const double> x) { return std::vector<double>{x[0], x[1], std::exp(x[2])}; };

  const std::vector<std::pair<double, double>> bounds{{-1.0, 1.0}, {0.0, 1.0}, {std::log(lo), std::log(5.0 * hi)}};
  Stream stream(options.seed, Stream::derive({0x4A45}));
  const auto starts = opt::latin_hypercube(static_cast<std::size_t>(std::max(options.starts, 1)), bounds, stream);
  const Solved solved = solve(prob, starts, options);
  FitReport rep = finish(prob, solved, options);

  // A decay amplitude indistinguishable from zero, or a decay time far outside
  // the sampled span, leaves T2 undetermined.
  const Estimate& a = rep.at("a");
  const Estimate& T2 = rep.at("T2");
  if (std::abs(a.value) <= 2.0 * a.uncertainty || std::abs(a.value) < 1e-9 || T2.value > 100.0 * hi ||
      T2.value < 0.01 * lo) {
    std::ostringstream msg;
    msg << "fit_ramsey: T2 is not identifiable (a = " << a.value << " +/- " << a.uncertainty << ", T2 = " << T2.value
        << " s)";
    FitDiagnostics d = rep.diagnostics;
    d.converged = false;
    throw FitError(msg.str(), d);
  }
  return rep;
}

FitReport fit_rb(const std::vector<SurvivalPoint>& survival, const FitOptions& options) {
  std::vector<int> lengths;
  for (const auto& s : survival) {
    if (s.length < 0) throw std::invalid_argument("fit_rb: lengths must be >= 0");
    if (!(s.mean >= 0.0 && s.mean <= 1.0)) throw std::invalid_argument("fit_rb: survival outside [0, 1]");
    lengths.push_back(s.length);
  }
  std::sort(lengths.begin(), lengths.end());
  if (std::unique(lengths.begin(), lengths.end()) - lengths.begin() < 3)
    throw std::invalid_argument("fit_rb: need at least 3 distinct lengths");

  Problem prob;
  prob.group_sizes = {survival.size()};
  prob.residual = [&](std::span<const double> x, std::size_t, std::size_t i) {
    const auto& s = survival[i];
    const double eps = 0.5 * sigmoid(x[0]);
    const double eps_im = 0.5 * sigmoid(x[1]);
    const double f = 0.5 + 0.5 * (1.0 - 2.0 * eps_im) * std::pow(1.0 - 2.0 * eps, s.length);
    return (f - s.mean) / std::max(s.stderr, sigma_floor(s.sequences * s.shots));
  };
  prob.names = {"epsilon", "epsilon_im"};
  prob.report = [](std::span<const double> x) {
    return std::vector<double>{0.5 * sigmoid(x[0]), 0.5 * sigmoid(x[1])};
  };
  const std::vector<std::pair<double, double>> bounds{{logit(2e-5), logit(0.2)}, {logit(2e-4), logit(0.4)}};
  Stream stream(options.seed, Stream::derive({0x2B}));
  const auto starts = opt::latin_hypercube(static_cast<std::size_t>(std::max(options.starts, 1)), bounds, stream);
  return finish(prob, solve(prob, starts, options), options);
}

DecayCurve synthesize_curve(const std::vector<double>& T_grid, int N, const DecayModelParams& params,
                            const LevelSystem& system, std::size_t trials, std::optional<std::uint64_t> seed,
                            const ModelOptions& options) {
  if (trials == 0) throw std::invalid_argument("synthesize_curve: trials must be >= 1");
  DecayCurve curve;
  curve.repetitions = N;
  curve.trials = trials;
  curve.seed = seed.value_or(0);
  const double n = static_cast<double>(trials);
  for (std::size_t p = 0; p < T_grid.size(); ++p) {
    const double f = model_fidelity(T_grid[p], N, params, system, options);
    double value = f;
    if (seed) {
      Stream stream(*seed, Stream::derive({static_cast<std::uint64_t>(N), p}));
      std::size_t hits = 0;
      for (std::size_t t = 0; t < trials; ++t) hits += stream.uniform() < f ? 1 : 0;
      value = static_cast<double>(hits) / n;
    }
    curve.points.push_back({T_grid[p], value, std::sqrt(std::max(value * (1.0 - value), 0.0) / n)});
  }
  return curve;
}

}  // namespace qudd
