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


#ifndef XWALK__BAYESOPT_HPP_
#define XWALK__BAYESOPT_HPP_

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace xwalk
{

inline constexpr double kLengthScaleMin = 0.01;
inline constexpr double kLengthScaleMax = 2.0;
inline constexpr double kNoiseVarMin = 1e-8;
inline constexpr double kJitterMax = 1e-4;
inline constexpr int kHyperRestarts = 8;
inline constexpr int kAcquisitionGrid = 512;

/// Matern-5/2 hyperparameters. Length scale lives in normalised input space.
struct GpHyper
{
  double signal_var = 1.0;
  double length_scale = 0.2;
  double noise_var = 1e-6;
};

double matern52(double x1, double x2, double signal_var, double length_scale);

struct GpPrediction
{
  double mean = 0.0;
  double var = 0.0;  // latent variance, noise excluded
};

/// GP posterior with fixed hyperparameters and a cached Cholesky factor.
///
/// With `standardise` the targets are shifted to zero mean and scaled to unit
/// variance (n >= 2) before conditioning; predictions are mapped back to the
/// original units.
class GpModel
{
public:
  GpModel(std::vector<double> x, std::vector<double> y, const GpHyper & hyper, bool standardise = true);

  GpPrediction predict(double x) const;

  /// Log marginal likelihood of the (standardised) targets.
  double log_marginal_likelihood() const { return lml_; }

  const GpHyper & hyper() const { return hyper_; }
  double jitter() const { return jitter_; }
  double y_mean() const { return y_mean_; }
  double y_scale() const { return y_scale_; }
  std::size_t size() const { return x_.size(); }

private:
  std::vector<double> x_;
  Eigen::VectorXd y_;  // standardised
  GpHyper hyper_;
  double y_mean_ = 0.0;
  double y_scale_ = 1.0;
  double jitter_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
  double lml_ = 0.0;
};

/// Maximum-likelihood hyperparameters from deterministic multi-start
/// Nelder-Mead in log space. Inputs must already lie in [0, 1].
GpModel fit_gp(const std::vector<double> & x, const std::vector<double> & y);

/// Expected improvement for minimisation.
double expected_improvement(double mean, double sd, double best, double xi);
double expected_improvement(const GpModel & model, double x, double best, double xi);

struct OptimizeConfig
{
  double lo = 0.0;
  double hi = 1.0;
  int n_iterations = 60;
  int n_initial = 15;
  std::uint64_t seed = 0;
  double xi = 0.01;
};

void validate(const OptimizeConfig & cfg);

/// Objective value plus whether it was a genuine (non-penalised) evaluation.
struct Evaluation
{
  Evaluation(double v = 0.0, bool f = true) : value(v), feasible(f) {}  // NOLINT: implicit from double
  double value;
  bool feasible;
};

struct OptimisationRecord
{
  int iter = 0;
  double candidate = 0.0;
  double objective = 0.0;
  bool feasible = true;
  double best_so_far = 0.0;
};

struct MinimizeResult
{
  double x_best = 0.0;
  double y_best = 0.0;
  std::vector<OptimisationRecord> records;
};

/// Evaluator receives the candidate in native units and the iteration index.
using Objective = std::function<Evaluation(double x, int iter)>;

/// Scrambled base-2 van der Corput points in [0, 1).
std::vector<double> initial_design(int n, std::uint64_t seed);

/// Quasi-random start, then EI maximised on a uniform grid (ties to lowest x).
/// Returns the best observation, equal values resolved to the lowest x.
/// Evaluator exceptions surface as EvaluationError carrying the iteration.
MinimizeResult minimize(const Objective & objective, const OptimizeConfig & cfg);

}  // namespace xwalk

#endif  // XWALK__BAYESOPT_HPP_
