// Copyright 2026 The xwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "xwalk/bayesopt.hpp"

#include "xwalk/errors.hpp"
#include "xwalk/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace xwalk
{

namespace
{

constexpr double kSignalVarMin = 1e-2;
constexpr double kSignalVarMax = 1e2;
constexpr double kNoiseVarMax = 10.0;
constexpr int kNelderMeadEvals = 80;

using Theta = std::array<double, 3>;  // log signal_var, log length_scale, log noise_var

const Theta kLogLo{std::log(kSignalVarMin), std::log(kLengthScaleMin), std::log(kNoiseVarMin)};
const Theta kLogHi{std::log(kSignalVarMax), std::log(kLengthScaleMax), std::log(kNoiseVarMax)};

GpHyper to_hyper(const Theta & t)
{
  // Clamp after exp(): exp(log(b)) can land one ulp outside the bound b.
  const auto bounded = [&](int i, double lo, double hi) { return std::clamp(std::exp(t[i]), lo, hi); };
  GpHyper h;
  h.signal_var = bounded(0, kSignalVarMin, kSignalVarMax);
  h.length_scale = bounded(1, kLengthScaleMin, kLengthScaleMax);
  h.noise_var = bounded(2, kNoiseVarMin, kNoiseVarMax);
  return h;
}

// Distance outside the box; keeps the simplex from drifting off.
double box_excess(const Theta & t)
{
  double e = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    e += std::max(0.0, kLogLo[i] - t[i]) + std::max(0.0, t[i] - kLogHi[i]);
  }
  return e;
}

template <class F>
Theta nelder_mead(const F & f, const Theta & start, double step, int max_evals, double & best_value)
{
  constexpr std::size_t n = 3;
  std::array<Theta, n + 1> simplex;
  std::array<double, n + 1> values{};
  simplex[0] = start;
  for (std::size_t i = 0; i < n; ++i) {
    simplex[i + 1] = start;
    simplex[i + 1][i] += step;
  }
  int evals = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    values[i] = f(simplex[i]);
    ++evals;
  }
  auto order = [&]() {
    std::array<std::size_t, n + 1> idx{0, 1, 2, 3};
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    auto s = simplex;
    auto v = values;
    for (std::size_t i = 0; i <= n; ++i) {
      simplex[i] = s[idx[i]];
      values[i] = v[idx[i]];
    }
  };
  auto blend = [](const Theta & a, const Theta & b, double w) {
    Theta out;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = a[i] + w * (b[i] - a[i]);
    }
    return out;
  };

  while (evals < max_evals) {
    order();
    if (std::abs(values[n] - values[0]) < 1e-7 * (1.0 + std::abs(values[0]))) {
      break;
    }
    Theta centroid{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        centroid[j] += simplex[i][j] / static_cast<double>(n);
      }
    }
    const Theta reflected = blend(centroid, simplex[n], -1.0);
    const double fr = f(reflected);
    ++evals;
    if (fr < values[0]) {
      const Theta expanded = blend(centroid, simplex[n], -2.0);
      const double fe = f(expanded);
      ++evals;
      if (fe < fr) {
        simplex[n] = expanded;
        values[n] = fe;
      } else {
        simplex[n] = reflected;
        values[n] = fr;
      }
      continue;
    }
    if (fr < values[n - 1]) {
      simplex[n] = reflected;
      values[n] = fr;
      continue;
    }
    const bool outside = fr < values[n];
    const Theta contracted = outside ? blend(centroid, reflected, 0.5) : blend(centroid, simplex[n], 0.5);
    const double fc = f(contracted);
    ++evals;
    if (fc < std::min(fr, values[n])) {
      simplex[n] = contracted;
      values[n] = fc;
      continue;
    }
    for (std::size_t i = 1; i <= n; ++i) {
      simplex[i] = blend(simplex[0], simplex[i], 0.5);
      values[i] = f(simplex[i]);
      ++evals;
    }
  }
  order();
  best_value = values[0];
  return simplex[0];
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

std::uint32_t reverse_bits(std::uint32_t v)
{
  std::uint32_t r = 0;
  for (int b = 0; b < 32; ++b) {
    r = (r << 1) | (v & 1U);
    v >>= 1;
  }
  return r;
}

// Infeasible points carry a huge penalty that would flatten the standardised
// feasible values to a constant. The surrogate sees them one range above the
// worst feasible value instead; records keep the raw penalty.
std::vector<double> surrogate_targets(const std::vector<double> & ys, const std::vector<bool> & feasible)
{
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (feasible[i]) {
      lo = std::min(lo, ys[i]);
      hi = std::max(hi, ys[i]);
    }
  }
  if (!std::isfinite(lo)) {
    return ys;
  }
  const double substitute = hi + std::max(hi - lo, 1e-3 * (1.0 + std::abs(hi)));
  std::vector<double> out = ys;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!feasible[i]) {
      out[i] = std::min(out[i], substitute);
    }
  }
  return out;
}

}  // namespace

double matern52(double x1, double x2, double signal_var, double length_scale)
{
  const double r = std::sqrt(5.0) * std::abs(x1 - x2) / length_scale;
  return signal_var * (1.0 + r + r * r / 3.0) * std::exp(-r);
}

GpModel::GpModel(std::vector<double> x, std::vector<double> y, const GpHyper & hyper, bool standardise)
: x_(std::move(x)), hyper_(hyper)
{
  const auto n = static_cast<Eigen::Index>(x_.size());
  if (n == 0 || y.size() != x_.size()) {
    throw ValidationError("GP needs at least one observation and matching x/y lengths");
  }
  if (hyper_.length_scale <= 0.0 || hyper_.signal_var <= 0.0 || hyper_.noise_var < 0.0) {
    throw ValidationError("GP hyperparameters must be positive");
  }
  if (standardise) {
    double mean = 0.0;
    for (double v : y) {
      mean += v;
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : y) {
      var += (v - mean) * (v - mean);
    }
    var /= static_cast<double>(n);
    y_mean_ = mean;
    y_scale_ = (n >= 2 && var > 1e-24) ? std::sqrt(var) : 1.0;
  }
  y_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y_[i] = (y[static_cast<std::size_t>(i)] - y_mean_) / y_scale_;
  }

  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = matern52(x_[static_cast<std::size_t>(i)], x_[static_cast<std::size_t>(j)],
        hyper_.signal_var, hyper_.length_scale);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  bool ok = false;
  for (double jitter : {0.0, 1e-10, 1e-8, 1e-6, kJitterMax}) {
    llt_.compute(k + (hyper_.noise_var + jitter) * identity);
    if (llt_.info() == Eigen::Success) {
      const Eigen::VectorXd diag = llt_.matrixLLT().diagonal();
      if (diag.minCoeff() > 0.0 && diag.allFinite()) {
        jitter_ = jitter;
        ok = true;
        break;
      }
    }
  }
  if (!ok) {
    throw SingularGram("Gram matrix not positive definite with jitter up to 1e-4");
  }
  alpha_ = llt_.solve(y_);
  double log_det = 0.0;
  const auto & l = llt_.matrixLLT();
  for (Eigen::Index i = 0; i < n; ++i) {
    log_det += std::log(l(i, i));
  }
  lml_ = -0.5 * y_.dot(alpha_) - log_det - 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
}

GpPrediction GpModel::predict(double x) const
{
  const auto n = static_cast<Eigen::Index>(x_.size());
  Eigen::VectorXd ks(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ks[i] = matern52(x, x_[static_cast<std::size_t>(i)], hyper_.signal_var, hyper_.length_scale);
  }
  const Eigen::VectorXd v = llt_.matrixL().solve(ks);
  const double var_s = std::max(0.0, hyper_.signal_var - v.squaredNorm());
  GpPrediction p;
  p.mean = y_mean_ + y_scale_ * ks.dot(alpha_);
  p.var = y_scale_ * y_scale_ * var_s;
  return p;
}

GpModel fit_gp(const std::vector<double> & x, const std::vector<double> & y)
{
  // Targets standardised exactly as the final model does.
  const GpModel reference(x, y, GpHyper{});
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::VectorXd ys(n);
  Eigen::MatrixXd dist(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ys[i] = (y[static_cast<std::size_t>(i)] - reference.y_mean()) / reference.y_scale();
    for (Eigen::Index j = 0; j < n; ++j) {
      dist(i, j) = std::abs(x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)]);
    }
  }
  Eigen::MatrixXd k(n, n);
  Eigen::MatrixXd work(n, n);
  Eigen::LLT<Eigen::MatrixXd> llt(n);

  auto negative_lml = [&](const Theta & t) {
    const GpHyper h = to_hyper(t);
    for (Eigen::Index i = 0; i < n; ++i) {
      k(i, i) = h.signal_var;
      for (Eigen::Index j = 0; j < i; ++j) {
        const double r = std::sqrt(5.0) * dist(i, j) / h.length_scale;
        k(i, j) = h.signal_var * (1.0 + r + r * r / 3.0) * std::exp(-r);
      }
    }
    for (double jitter : {0.0, 1e-10, 1e-8, 1e-6, kJitterMax}) {
      work = k.selfadjointView<Eigen::Lower>();
      work.diagonal().array() += h.noise_var + jitter;
      llt.compute(work);
      if (llt.info() != Eigen::Success) {
        continue;
      }
      const auto diag = llt.matrixLLT().diagonal();
      if (!(diag.minCoeff() > 0.0) || !diag.allFinite()) {
        continue;
      }
      const double fit = ys.dot(llt.solve(ys));
      const double log_det = diag.array().log().sum();
      const double v = 0.5 * fit + log_det + 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
      return std::isfinite(v) ? v + 1e3 * box_excess(t) : std::numeric_limits<double>::max();
    }
    return std::numeric_limits<double>::max();
  };

  // Fixed start lattice: restarts are deterministic without an RNG.
  Theta best_theta{0.0, std::log(0.2), std::log(1e-3)};
  double best_value = std::numeric_limits<double>::infinity();
  for (int r = 0; r < kHyperRestarts; ++r) {
    const double u0 = (static_cast<double>(r) + 0.5) / kHyperRestarts;
    const double u1 = std::fmod(0.5 + 0.618033988749895 * r, 1.0);
    const double u2 = std::fmod(0.25 + 0.414213562373095 * r, 1.0);
    const Theta start{
      std::log(0.3) + u0 * (std::log(3.0) - std::log(0.3)),
      kLogLo[1] + u1 * (kLogHi[1] - kLogLo[1]),
      std::log(1e-6) + u2 * (std::log(0.5) - std::log(1e-6)),
    };
    double value = 0.0;
    const Theta t = nelder_mead(negative_lml, start, 0.7, kNelderMeadEvals, value);
    if (value < best_value) {
      best_value = value;
      best_theta = t;
    }
  }
  // The likelihood is nearly flat in the noise for clean data, so the simplex
  // can stall short of the floor; test the bound directly.
  Theta floored = best_theta;
  floored[2] = kLogLo[2];
  if (negative_lml(floored) < best_value) {
    best_theta = floored;
  }
  return GpModel(x, y, to_hyper(best_theta));
}

double expected_improvement(double mean, double sd, double best, double xi)
{
  const double improvement = best - mean - xi;
  if (!(sd > 1e-12)) {
    return std::max(0.0, improvement);
  }
  const double z = improvement / sd;
  return std::max(0.0, improvement * normal_cdf(z) + sd * normal_pdf(z));
}

double expected_improvement(const GpModel & model, double x, double best, double xi)
{
  const GpPrediction p = model.predict(x);
  return expected_improvement(p.mean, std::sqrt(p.var), best, xi);
}

void validate(const OptimizeConfig & cfg)
{
  if (!(cfg.lo < cfg.hi)) {
    throw ValidationError("optimiser bounds must satisfy lo < hi");
  }
  if (cfg.n_initial < 1) {
    throw ValidationError("optimiser.n_initial must be at least 1");
  }
  if (!(cfg.n_initial < cfg.n_iterations)) {
    throw ValidationError("optimiser.n_initial must be below optimiser.n_iterations");
  }
  if (!(cfg.xi >= 0.0)) {
    throw ValidationError("optimiser.xi must be non-negative");
  }
}

std::vector<double> initial_design(int n, std::uint64_t seed)
{
  // Nested uniform (Owen) scramble of the radical inverse, one flip bit per tree node.
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)));
  const std::uint64_t key = mix64(seed ^ 0x5A17C0DEULL);
  for (int i = 0; i < n; ++i) {
    const std::uint32_t v = reverse_bits(static_cast<std::uint32_t>(i));
    std::uint32_t scrambled = 0;
    std::uint64_t node = 1;
    for (int b = 31; b >= 0; --b) {
      const std::uint32_t bit = (v >> b) & 1U;
      const auto flip = static_cast<std::uint32_t>(mix64(key ^ mix64(node)) & 1U);
      scrambled |= (bit ^ flip) << b;
      node = (node << 1) | bit;
    }
    out.push_back((static_cast<double>(scrambled) + 0.5) / 4294967296.0);
  }
  return out;
}

MinimizeResult minimize(const Objective & objective, const OptimizeConfig & cfg)
{
  validate(cfg);
  const double span = cfg.hi - cfg.lo;
  std::vector<double> us;
  std::vector<double> ys;
  std::vector<bool> feasible;
  MinimizeResult result;
  result.records.reserve(static_cast<std::size_t>(cfg.n_iterations));
  const std::vector<double> design = initial_design(cfg.n_initial, cfg.seed);

  std::vector<double> grid(kAcquisitionGrid);
  for (int j = 0; j < kAcquisitionGrid; ++j) {
    grid[static_cast<std::size_t>(j)] = static_cast<double>(j) / (kAcquisitionGrid - 1);
  }

  double best = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < cfg.n_iterations; ++iter) {
    double u = 0.0;
    if (iter < cfg.n_initial) {
      u = design[static_cast<std::size_t>(iter)];
    } else {
      const GpModel model = fit_gp(us, surrogate_targets(ys, feasible));
      double best_ei = -1.0;
      for (double g : grid) {
        const double ei = expected_improvement(model, g, best, cfg.xi);
        if (ei > best_ei) {
          best_ei = ei;
          u = g;
        }
      }
    }
    const double x = cfg.lo + u * span;
    Evaluation e;
    try {
      e = objective(x, iter);
    } catch (const std::exception & ex) {
      throw EvaluationError(ex.what(), iter);
    }
    if (!std::isfinite(e.value)) {
      throw EvaluationError("objective returned a non-finite value", iter);
    }
    us.push_back(u);
    ys.push_back(e.value);
    feasible.push_back(e.feasible);
    if (e.value < best || (e.value == best && x < result.x_best)) {
      best = e.value;
      result.x_best = x;
      result.y_best = e.value;
    }
    result.records.push_back({iter, x, e.value, e.feasible, best});
  }
  return result;
}

}  // namespace xwalk
