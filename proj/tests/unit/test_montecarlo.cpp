#include <doctest.h>

#include <cmath>

#include "poisest/errors.hpp"
#include "poisest/montecarlo.hpp"

using namespace poisest;

namespace {

McConfig base_config() {
  McConfig cfg;
  cfg.gammas = GammaTriple(4.1813, 8.104, 2.112);
  cfg.n = 20;
  cfg.replicates = 20000;
  cfg.master_seed = 99;
  cfg.workers = 1;
  return cfg;
}

bool same_means(const ReplicateSet& a, const ReplicateSet& b) {
  if (a.means.size() != b.means.size()) return false;
  for (std::size_t i = 0; i < a.means.size(); ++i) {
    if (a.means[i].xbar != b.means[i].xbar || a.means[i].ybar != b.means[i].ybar) return false;
  }
  return a.xbar_pop == b.xbar_pop && a.target == b.target;
}

}  // namespace

TEST_CASE("configuration is validated") {
  McConfig cfg = base_config();
  cfg.replicates = 1;
  CHECK_THROWS_AS(simulate_replicates(cfg), ValidationError);
  cfg = base_config();
  cfg.n = 0;
  CHECK_THROWS_AS(simulate_replicates(cfg), ValidationError);
  cfg = base_config();
  cfg.population_size = 10;
  CHECK_THROWS_AS(simulate_replicates(cfg), ValidationError);
}

TEST_CASE("replicate sets do not depend on the worker count") {
  McConfig cfg = base_config();
  cfg.replicates = 5000;
  const auto one = simulate_replicates(cfg);
  cfg.workers = 3;
  CHECK(same_means(one, simulate_replicates(cfg)));
  cfg.workers = 0;
  CHECK(same_means(one, simulate_replicates(cfg)));
  cfg.master_seed = 100;
  CHECK_FALSE(same_means(one, simulate_replicates(cfg)));

  McConfig fp = base_config();
  fp.replicates = 500;
  fp.population_size = 2000;
  const auto p1 = simulate_replicates(fp);
  fp.workers = 4;
  CHECK(same_means(p1, simulate_replicates(fp)));
}

TEST_CASE("replicate r is the sample drawn from its derived seed") {
  McConfig cfg = base_config();
  cfg.replicates = 10;
  const auto reps = simulate_replicates(cfg);
  for (std::uint64_t r = 0; r < 10; ++r) {
    const auto st = sample_stats(draw_bivariate_sample(cfg.gammas, cfg.n, {derive_seed(cfg.master_seed, r)}));
    CHECK(reps.means[r].xbar == st.xbar);
    CHECK(reps.means[r].ybar == st.ybar);
  }
  CHECK(reps.xbar_pop == 6.2933);
  CHECK(reps.target == 10.216);
}

TEST_CASE("unbiased estimators have empirical bias within noise") {
  const McConfig cfg = base_config();
  const auto reps = simulate_replicates(cfg);
  for (const EstimatorSpec& spec : {EstimatorSpec{MeanOnly{}}, EstimatorSpec{Difference{0.33559}}}) {
    const auto r = summarize(reps, spec, cfg);
    CHECK(r.failed_replicates == 0);
    CHECK(std::abs(r.z_bias) < 4.0);
    CHECK(std::abs(r.z_mse) < 4.0);
    CHECK(r.mse_reliable());
  }
}

TEST_CASE("standard errors shrink with the square root of the replicate count") {
  McConfig cfg = base_config();
  cfg.replicates = 10000;
  const auto small = run_mc(cfg, MeanOnly{});
  cfg.replicates = 40000;
  const auto large = run_mc(cfg, MeanOnly{});
  CHECK(small.se_mse / large.se_mse == doctest::Approx(2.0).epsilon(0.1));
  CHECK(small.se_bias / large.se_bias == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("failed replicates are counted and excluded") {
  McConfig cfg;
  cfg.gammas = GammaTriple(0.05, 1.0, 0.05);
  cfg.n = 2;
  cfg.replicates = 4000;
  cfg.master_seed = 3;
  cfg.workers = 1;
  const auto reps = simulate_replicates(cfg);
  std::int64_t zeros = 0;
  for (const auto& m : reps.means) zeros += m.xbar == 0.0;
  REQUIRE(zeros > 0);
  REQUIRE(zeros < cfg.replicates);
  const auto r = summarize(reps, Ratio{}, cfg);
  CHECK(r.failed_replicates == zeros);
  CHECK_FALSE(r.mse_reliable());
  CHECK(summarize(reps, MeanOnly{}, cfg).failed_replicates == 0);

  cfg.gammas = GammaTriple(1e-12, 1.0, 1e-12);
  cfg.replicates = 20;
  CHECK_THROWS_AS(run_mc(cfg, Ratio{}), SimulationError);
}

TEST_CASE("grids") {
  const auto pts = Grid1D{0.0, 1.0, 0.01}.points();
  CHECK(pts.size() == 101);
  CHECK(pts.back() == doctest::Approx(1.0));
  CHECK(Grid1D{2.0, 2.0, 0.5}.points().size() == 1);
  CHECK_THROWS_AS(Grid1D({1.0, 0.0, 0.1}).points(), ValidationError);
  CHECK_THROWS_AS(Grid1D({0.0, 1.0, 0.0}).points(), ValidationError);
}

TEST_CASE("alpha and b searches find the empirical minimiser") {
  McConfig cfg = base_config();
  cfg.n = 200;
  cfg.replicates = 20000;
  const auto a = empirical_optimum_alpha(cfg, {0.0, 1.0, 0.01});
  CHECK(a.curve.size() == 101);
  for (const auto& p : a.curve) CHECK(p.emp_mse >= a.best_mse);
  CHECK(a.best == doctest::Approx(optimum_alpha(cfg.gammas, MomentConvention::Corrected)).epsilon(0.1));

  const auto b = empirical_optimum_b(cfg, {0.0, 1.0, 0.01});
  CHECK(b.best == doctest::Approx(optimum_b(cfg.gammas, MomentConvention::Corrected)).epsilon(0.1));
}

TEST_CASE("w1 grid agrees with the exact empirical minimiser") {
  McConfig cfg = base_config();
  cfg.n = 50;
  cfg.replicates = 20000;
  for (MemberId id : {MemberId::q1, MemberId::q4, MemberId::m5}) {
    CAPTURE(to_string(id));
    const auto s = empirical_optimum_w1(cfg, id);
    // The empirical MSE is an exact quadratic in w1; its minimiser is a
    // least-squares slope.
    const auto reps = simulate_replicates(cfg);
    const General shape{1.0, 0.0, s.coefficients.alpha, s.coefficients.eta, s.coefficients.theta};
    double num = 0.0;
    double den = 0.0;
    for (const auto& m : reps.means) {
      const double u = evaluate(shape, m, reps.xbar_pop) - reps.xbar_pop;
      num += u * (reps.target - reps.xbar_pop);
      den += u * u;
    }
    const double w1_star = num / den;
    REQUIRE(std::abs(w1_star - s.theory.w1) < 20 * s.step_w1);
    CHECK(std::abs(s.best.w1 - w1_star) <= 0.5 * s.step_w1 * (1 + 1e-9));
    CHECK(s.best.w2 == 0.0);
  }
}

TEST_CASE("weight grid") {
  McConfig cfg = base_config();
  cfg.n = 100;
  cfg.replicates = 5000;
  const auto s = empirical_optimum_weights(cfg, MemberId::q4);
  CHECK(s.step_w1 > 0.0);
  CHECK(s.step_w2 > 0.0);
  CHECK(s.best_mse <= s.theory_emp_mse);
  CHECK(std::abs(s.best.w1 - s.theory.w1) <= 20 * s.step_w1 * (1 + 1e-9));
  CHECK(std::abs(s.best.w2 - s.theory.w2) <= 20 * s.step_w2 * (1 + 1e-9));
  CHECK(s.theory_emp_mse <= 1.05 * s.best_mse);

  SUBCASE("equal means make the anchor exact") {
    McConfig eq = cfg;
    eq.gammas = GammaTriple(3, 3, 1);
    const auto e = empirical_optimum_weights(eq, MemberId::q4);
    CHECK(e.theory.w1 == 0.0);
    CHECK(e.theory.w2 == 0.0);
    CHECK(e.theory_emp_mse == 0.0);
    CHECK(e.best_mse == 0.0);
  }
}

TEST_CASE("finite population targets") {
  McConfig cfg = base_config();
  cfg.replicates = 2000;
  cfg.population_size = 500;
  const auto reps = simulate_replicates(cfg);
  const auto pop = sample_stats(generate_finite_population(
      cfg.gammas, 500, {derive_seed(cfg.master_seed, std::numeric_limits<std::uint64_t>::max())}));
  CHECK(reps.xbar_pop == pop.xbar);
  CHECK(reps.target == pop.ybar);
  const auto r = summarize(reps, MeanOnly{}, cfg);
  CHECK(std::abs(r.emp_bias) < 4 * r.se_bias);

  cfg.population_size = cfg.n;
  const auto census = simulate_replicates(cfg);
  for (const auto& m : census.means) REQUIRE(m.ybar == doctest::Approx(census.target));
}
