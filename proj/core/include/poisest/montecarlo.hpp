#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "poisest/estimators.hpp"
#include "poisest/model.hpp"
#include "poisest/synth.hpp"
#include "poisest/theory.hpp"

namespace poisest {

struct McConfig {
  GammaTriple gammas{1.0, 1.0, 1.0};
  std::int64_t n = 20;
  std::int64_t replicates = 10000;
  std::uint64_t master_seed = 0;
  MomentConvention convention = MomentConvention::Corrected;
  /// Worker threads; 0 uses hardware concurrency. Results never depend on it.
  unsigned workers = 0;
  /// When set, a single finite population of this size is generated from
  /// the master seed and every replicate is an SRSWOR sample from it. The
  /// targets then become that population's means. Otherwise replicates are
  /// i.i.d. draws from the model and the targets are lambda1, lambda2.
  std::optional<std::int64_t> population_size;
};

/// Throws ValidationError when R < 2, n < 1 or the population is smaller than n.
void validate(const McConfig& cfg);

/// The replicate samples of one configuration, reduced to their means.
/// Replicate r is drawn from derive_seed(master_seed, r), so the set is
/// identical for every worker count. Reusing one set across parameter
/// values gives common random numbers.
struct ReplicateSet {
  std::vector<SampleMeans> means;
  double xbar_pop;  // known auxiliary mean fed to the estimators
  double target;    // Ybar the estimators aim at
};

ReplicateSet simulate_replicates(const McConfig& cfg);

struct McReport {
  std::string estimator;
  std::int64_t replicates;
  std::int64_t failed_replicates;
  double emp_bias;
  double emp_mse;
  double se_bias;
  double se_mse;
  double theory_bias;
  double theory_mse;
  double z_bias;
  double z_mse;
  MomentConvention convention;

  /// True when failures are within 0.1% of the replicates.
  bool mse_reliable() const noexcept;
};

/// Empirical summary of `spec` on an existing replicate set. Replicates whose
/// evaluation hits a singular denominator are excluded and counted.
/// Throws SimulationError when every replicate fails.
McReport summarize(const ReplicateSet& reps, const EstimatorSpec& spec, const McConfig& cfg);

McReport run_mc(const McConfig& cfg, const EstimatorSpec& spec);

struct Grid1D {
  double lo;
  double hi;
  double step;

  /// lo, lo + step, ... up to hi (inclusive within rounding).
  std::vector<double> points() const;
};

struct GridPoint {
  double value;
  double emp_mse;
  std::int64_t failed;
};

struct EmpiricalOptimum {
  double best;
  double best_mse;
  std::vector<GridPoint> curve;
};

/// Grid search of ExpAlpha{alpha} by empirical MSE, common random numbers.
EmpiricalOptimum empirical_optimum_alpha(const McConfig& cfg, const Grid1D& grid);
/// Grid search of Difference{b} by empirical MSE, common random numbers.
EmpiricalOptimum empirical_optimum_b(const McConfig& cfg, const Grid1D& grid);

struct WeightSearch {
  MemberId member;
  TmCoefficients coefficients;  // under cfg.convention
  Weights theory;
  double theory_emp_mse;  // empirical MSE at the theory weights
  Weights best;
  double best_mse;
  double step_w1;
  double step_w2;
  std::int64_t failed;
};

/// 41 x 41 grid of (w1, w2) centred on the closed-form optimum of `member`'s
/// shape. Half-widths are sqrt(m / A) and sqrt(m / B), m being the theory
/// minimum MSE (or Var(ybar) if that is 0): the distance at which the
/// quadratic alone would double the minimum along each axis.
WeightSearch empirical_optimum_weights(const McConfig& cfg, MemberId member);

/// As above but with w2 pinned to 0: 41 points of w1 around delta^2 / A.
WeightSearch empirical_optimum_w1(const McConfig& cfg, MemberId member);

}  // namespace poisest
