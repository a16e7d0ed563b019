#include "poisest/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "parallel.hpp"
#include "poisest/errors.hpp"

namespace poisest {

namespace {

constexpr int kWeightHalfSteps = 20;  // 41 points per axis

struct Moments2 {
  double mean;
  double se;
};

// Mean and standard error of the mean, summed in index order.
Moments2 mean_and_se(const std::vector<double>& xs) {
  const double m = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / m;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = xs.size() > 1 ? ss / (m - 1.0) : 0.0;
  return {mean, std::sqrt(var / m)};
}

double z_score(double emp, double theory, double se) {
  if (se > 0.0) return (emp - theory) / se;
  if (emp == theory) return 0.0;
  return std::copysign(std::numeric_limits<double>::infinity(), emp - theory);
}

// Empirical MSE of the estimator values `t` against `target`; NaN marks a
// failed replicate.
double emp_mse_of(const std::vector<double>& t, double target, std::int64_t& failed) {
  double sum = 0.0;
  std::int64_t used = 0;
  failed = 0;
  for (double v : t) {
    if (std::isnan(v)) {
      ++failed;
      continue;
    }
    sum += (v - target) * (v - target);
    ++used;
  }
  if (used == 0) throw SimulationError("all replicates failed");
  return sum / static_cast<double>(used);
}

std::vector<double> evaluate_all(const ReplicateSet& reps, const EstimatorSpec& spec) {
  std::vector<double> t(reps.means.size());
  for (std::size_t r = 0; r < t.size(); ++r) {
    try {
      t[r] = evaluate(spec, reps.means[r], reps.xbar_pop);
    } catch (const SingularDenominatorError&) {
      t[r] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return t;
}

template <typename MakeSpec>
EmpiricalOptimum grid_search(const McConfig& cfg, const Grid1D& grid, MakeSpec make_spec) {
  const auto points = grid.points();
  if (points.empty()) throw ValidationError("parameter grid is empty");
  const ReplicateSet reps = simulate_replicates(cfg);
  EmpiricalOptimum out{points.front(), std::numeric_limits<double>::infinity(), {}};
  for (double p : points) {
    GridPoint gp{p, 0.0, 0};
    gp.emp_mse = emp_mse_of(evaluate_all(reps, make_spec(p)), reps.target, gp.failed);
    if (gp.emp_mse < out.best_mse) {
      out.best_mse = gp.emp_mse;
      out.best = p;
    }
    out.curve.push_back(gp);
  }
  return out;
}

struct MemberShape {
  double alpha;
  double eta;
  double theta;
};

MemberShape member_shape(const McConfig& cfg, MemberId member) {
  const ResolvedMember rm = resolve_named_member(member, moments_from_gammas(cfg.gammas));
  double alpha = rm.spec.alpha;
  if (rm.alpha_free) {
    const RelativeMoments e = relative_moments(cfg.gammas, 1, cfg.convention);
    alpha = e.e01 / e.e11;
  }
  return {alpha, rm.spec.eta, rm.spec.theta};
}

// Core term U = ybar (Xbar/xbar)^alpha exp(...) per replicate; the estimator
// at (w1, w2) is w1 U + w2 xbar + (1 - w1 - w2) Xbar.
std::vector<double> core_terms(const ReplicateSet& reps, const MemberShape& s) {
  return evaluate_all(reps, General{1.0, 0.0, s.alpha, s.eta, s.theta});
}

double weighted_mse(const ReplicateSet& reps, const std::vector<double>& core, Weights w,
                    std::int64_t& failed) {
  double sum = 0.0;
  std::int64_t used = 0;
  failed = 0;
  for (std::size_t r = 0; r < core.size(); ++r) {
    if (std::isnan(core[r])) {
      ++failed;
      continue;
    }
    const double t =
        w.w1 * core[r] + w.w2 * reps.means[r].xbar + (1.0 - w.w1 - w.w2) * reps.xbar_pop;
    sum += (t - reps.target) * (t - reps.target);
    ++used;
  }
  if (used == 0) throw SimulationError("all replicates failed");
  return sum / static_cast<double>(used);
}

double scale_for(double min_mse, const McConfig& cfg) {
  return min_mse > 0.0 ? min_mse : var_base(cfg.gammas, cfg.n, cfg.convention);
}

}  // namespace

void validate(const McConfig& cfg) {
  if (cfg.n < 1) throw ValidationError("sample size n must be >= 1");
  if (cfg.replicates < 2) throw ValidationError("replicates must be >= 2");
  if (cfg.population_size && *cfg.population_size < cfg.n) {
    throw ValidationError("population size must be >= sample size n");
  }
}

ReplicateSet simulate_replicates(const McConfig& cfg) {
  validate(cfg);
  ReplicateSet reps;
  reps.means.resize(static_cast<std::size_t>(cfg.replicates));

  if (!cfg.population_size) {
    reps.xbar_pop = cfg.gammas.gamma1() + cfg.gammas.gamma3();
    reps.target = cfg.gammas.gamma2() + cfg.gammas.gamma3();
    detail::parallel_chunks(reps.means.size(), cfg.workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t r = begin; r < end; ++r) {
        reps.means[r] = draw_bivariate_means(cfg.gammas, cfg.n, SeedSpec{derive_seed(cfg.master_seed, r)});
      }
    });
    return reps;
  }

  // The population comes from a child seed outside the replicate index range.
  const Sample population = generate_finite_population(
      cfg.gammas, *cfg.population_size,
      SeedSpec{derive_seed(cfg.master_seed, std::numeric_limits<std::uint64_t>::max())},
      cfg.workers);
  const SampleStats pop = sample_stats(population);
  if (!(pop.xbar > 0.0)) throw SimulationError("generated population has zero auxiliary mean");
  reps.xbar_pop = pop.xbar;
  reps.target = pop.ybar;
  detail::parallel_chunks(reps.means.size(), cfg.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const Sample s = srswor(population, cfg.n, SeedSpec{derive_seed(cfg.master_seed, r)});
      reps.means[r] = sample_stats(s).means();
    }
  });
  return reps;
}

bool McReport::mse_reliable() const noexcept {
  return static_cast<double>(failed_replicates) <= 0.001 * static_cast<double>(replicates);
}

McReport summarize(const ReplicateSet& reps, const EstimatorSpec& spec, const McConfig& cfg) {
  validate(spec);
  const std::vector<double> t = evaluate_all(reps, spec);
  std::vector<double> err;
  std::vector<double> sq;
  err.reserve(t.size());
  sq.reserve(t.size());
  std::int64_t failed = 0;
  for (double v : t) {
    if (std::isnan(v)) {
      ++failed;
      continue;
    }
    err.push_back(v - reps.target);
    sq.push_back((v - reps.target) * (v - reps.target));
  }
  if (err.empty()) throw SimulationError("all " + std::to_string(t.size()) + " replicates failed");

  const Moments2 bias = mean_and_se(err);
  const Moments2 mse = mean_and_se(sq);
  const TheoryValue tv = theory_of(spec, cfg.gammas, cfg.n, cfg.convention);

  McReport r{};
  r.estimator = describe(spec);
  r.replicates = static_cast<std::int64_t>(t.size());
  r.failed_replicates = failed;
  r.emp_bias = bias.mean;
  r.emp_mse = mse.mean;
  r.se_bias = bias.se;
  r.se_mse = mse.se;
  r.theory_bias = tv.bias;
  r.theory_mse = tv.mse;
  r.z_bias = z_score(r.emp_bias, r.theory_bias, r.se_bias);
  r.z_mse = z_score(r.emp_mse, r.theory_mse, r.se_mse);
  r.convention = cfg.convention;
  return r;
}

McReport run_mc(const McConfig& cfg, const EstimatorSpec& spec) {
  validate(spec);
  return summarize(simulate_replicates(cfg), spec, cfg);
}

std::vector<double> Grid1D::points() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step) || !(step > 0.0) || hi < lo) {
    throw ValidationError("grid needs finite lo <= hi and step > 0");
  }
  const auto count = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) pts.push_back(lo + static_cast<double>(i) * step);
  return pts;
}

EmpiricalOptimum empirical_optimum_alpha(const McConfig& cfg, const Grid1D& grid) {
  return grid_search(cfg, grid, [](double a) { return EstimatorSpec{ExpAlpha{a}}; });
}

EmpiricalOptimum empirical_optimum_b(const McConfig& cfg, const Grid1D& grid) {
  return grid_search(cfg, grid, [](double b) { return EstimatorSpec{Difference{b}}; });
}

WeightSearch empirical_optimum_weights(const McConfig& cfg, MemberId member) {
  const MemberShape shape = member_shape(cfg, member);
  WeightSearch out{};
  out.member = member;
  out.coefficients = tm_coefficients(shape.alpha, shape.eta, shape.theta, cfg.gammas, cfg.n, cfg.convention);
  out.theory = optimum_weights(out.coefficients);
  const double scale = scale_for(min_mse_tm(out.coefficients), cfg);
  out.step_w1 = std::sqrt(scale / out.coefficients.A) / kWeightHalfSteps;
  out.step_w2 = std::sqrt(scale / out.coefficients.B) / kWeightHalfSteps;

  const ReplicateSet reps = simulate_replicates(cfg);
  const std::vector<double> core = core_terms(reps, shape);
  out.theory_emp_mse = weighted_mse(reps, core, out.theory, out.failed);
  out.best = out.theory;
  out.best_mse = out.theory_emp_mse;
  std::int64_t failed = 0;
  for (int i = -kWeightHalfSteps; i <= kWeightHalfSteps; ++i) {
    for (int j = -kWeightHalfSteps; j <= kWeightHalfSteps; ++j) {
      const Weights w{out.theory.w1 + i * out.step_w1, out.theory.w2 + j * out.step_w2};
      const double m = weighted_mse(reps, core, w, failed);
      if (m < out.best_mse) {
        out.best_mse = m;
        out.best = w;
      }
    }
  }
  return out;
}

WeightSearch empirical_optimum_w1(const McConfig& cfg, MemberId member) {
  const MemberShape shape = member_shape(cfg, member);
  WeightSearch out{};
  out.member = member;
  out.coefficients = tm_coefficients(shape.alpha, shape.eta, shape.theta, cfg.gammas, cfg.n, cfg.convention);
  out.theory = {optimum_w1_only(out.coefficients), 0.0};
  const double scale = scale_for(min_mse_tm_w1_only(out.coefficients), cfg);
  out.step_w1 = std::sqrt(scale / out.coefficients.A) / kWeightHalfSteps;
  out.step_w2 = 0.0;

  const ReplicateSet reps = simulate_replicates(cfg);
  const std::vector<double> core = core_terms(reps, shape);
  out.theory_emp_mse = weighted_mse(reps, core, out.theory, out.failed);
  out.best = out.theory;
  out.best_mse = out.theory_emp_mse;
  std::int64_t failed = 0;
  for (int i = -kWeightHalfSteps; i <= kWeightHalfSteps; ++i) {
    const Weights w{out.theory.w1 + i * out.step_w1, 0.0};
    const double m = weighted_mse(reps, core, w, failed);
    if (m < out.best_mse) {
      out.best_mse = m;
      out.best = w;
    }
  }
  return out;
}

}  // namespace poisest
