// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli/cli.hpp"
#include "poisest/fit.hpp"
#include "poisest/montecarlo.hpp"
#include "poisest/theory.hpp"
#include "support/oracles.hpp"

using namespace poisest;

namespace {

constexpr auto kPrinted = MomentConvention::AsPrinted;
constexpr auto kCorrected = MomentConvention::Corrected;
const GammaTriple kEmp{4.1813, 8.104, 2.112};

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

GammaTriple random_triple(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.01, 50.0);
  return {u(rng), u(rng), u(rng)};
}

Outcome a1_formula_fidelity() {
  const auto r = oracle::rates(4.1813, 8.104, 2.112, 20);
  struct Item {
    const char* name;
    double got;
    oracle::hp want;
  };
  const std::vector<Item> items = {
      {"MSE ratio", mse_exp_alpha(2.0, kEmp, 20, kPrinted), oracle::mse_ratio(r)},
      {"MSE exp-ratio", mse_exp_alpha(1.0, kEmp, 20, kPrinted), oracle::mse_exp_ratio(r)},
      {"MSE exp-product", mse_exp_alpha(-1.0, kEmp, 20, kPrinted), oracle::mse_exp_product(r)},
      {"alpha*", optimum_alpha(kEmp, kPrinted), oracle::optimum_alpha(r)},
      {"min MSE exp", min_mse_exp(kEmp, 20, kPrinted), oracle::min_mse_exp(r)},
      {"b*", optimum_b(kEmp, kPrinted), oracle::optimum_b(r)},
      {"min MSE difference", min_mse_difference(kEmp, 20, kPrinted), oracle::min_mse_difference(r)},
  };
  double worst = 0.0;
  std::string worst_name;
  for (const auto& it : items) {
    const double e = oracle::rel_err(it.got, it.want);
    if (e >= worst) {
      worst = e;
      worst_name = it.name;
    }
  }
  const double a = optimum_alpha(kEmp, kPrinted);
  const double b = optimum_b(kEmp, kPrinted);
  const bool values = std::abs(a - 0.67119) < 1e-5 && std::abs(b - 0.54477) < 1e-5;
  return {worst <= 1e-12 && values,
          fmt("max rel err %.2e (%s); alpha* = %.6f, b* = %.6f", worst, worst_name.c_str(), a, b)};
}

Outcome a2_identity() {
  std::mt19937_64 rng(1002);
  std::uniform_int_distribution<std::int64_t> size(1, 2000);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const GammaTriple g = random_triple(rng);
    const std::int64_t n = size(rng);
    for (auto conv : {kPrinted, kCorrected}) {
      const double e = min_mse_exp(g, n, conv);
      const double d = min_mse_difference(g, n, conv);
      worst = std::max(worst, std::abs(e - d) / std::abs(e));
    }
  }
  return {worst <= 1e-12, fmt("max rel diff %.2e over 10^4 triples, both conventions", worst)};
}

Outcome a3_tautologies() {
  std::mt19937_64 rng(1003);
  int fails = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto r = efficiency_report(random_triple(rng), 20, kPrinted);
    fails += !r.exp_vs_exp_ratio.holds + !r.exp_vs_exp_product.holds;
  }
  return {fails == 0, fmt("%d violations over 10^4 positive triples", fails)};
}

Outcome a4_pre_table() {
  const auto rep = pre_table(kEmp, 20, kPrinted);
  const auto r = oracle::rates(4.1813, 8.104, 2.112, 20);
  const oracle::hp base = oracle::var_ybar(r);
  auto pre = [&](const oracle::hp& mse) { return static_cast<double>(100 * base / mse); };
  const std::vector<std::pair<const char*, double>> want = {
      {"t_r", pre(oracle::mse_ratio(r))},      {"t_k1", pre(oracle::mse_exp_ratio(r))},
      {"t_k2", pre(oracle::mse_exp_product(r))}, {"t_p", pre(oracle::min_mse_exp(r))},
      {"t_R", pre(oracle::min_mse_difference(r))}};
  const std::vector<double> quoted = {83.156, 105.566, 73.489, 107.455, 107.455};
  bool ok = true;
  std::string values;
  for (std::size_t i = 0; i < want.size(); ++i) {
    const double got = rep.row(want[i].first).pre;
    ok &= std::abs(got - want[i].second) <= 0.01 && std::abs(got - quoted[i]) <= 0.01;
    values += fmt("%s %.3f ", want[i].first, got);
  }

  const double tk1 = rep.row("t_k1").pre;
  const double tk2 = rep.row("t_k2").pre;
  const double tp = rep.row("t_p").pre;
  const double tR = rep.row("t_R").pre;
  const double tm = rep.row("t_m").pre;
  const bool ordering = tk2 < tk1 && tk1 < tp && std::abs(tp - tR) <= 1e-9 * tp && tR <= tm;
  values += fmt("t_m %.3f", tm);

  // The rendered table must carry the published column as reference.
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run({"pre-table", "--gamma1", "4.1813", "--gamma2", "8.104", "--gamma3", "2.112",
                             "--n", "20", "--convention", "as-printed", "--format", "tsv"},
                            out, err);
  bool shown = code == 0;
  for (const char* p : {"\t100.0\t", "\t103.25\t", "\t72.31\t", "\t106.73\t", "\t9937.42\t"}) {
    shown &= out.str().find(p) != std::string::npos;
  }
  shown &= out.str().find("not reproduced") != std::string::npos;
  return {ok && ordering && shown,
          values + (ordering ? "; ordering t_k2 < t_k1 < t_p = t_R <= t_m holds" : "; ordering violated") +
              (shown ? "; published column annotated" : "; published column missing")};
}

McConfig reference_config(std::int64_t n, std::int64_t reps, std::uint64_t seed) {
  McConfig cfg;
  cfg.gammas = kEmp;
  cfg.n = n;
  cfg.replicates = reps;
  cfg.master_seed = seed;
  cfg.workers = 0;
  return cfg;
}

Outcome a5_mc_vs_theory() {
  McConfig cfg = reference_config(200, 200000, 5005);
  const ReplicateSet reps = simulate_replicates(cfg);
  bool ok = true;
  std::string detail;
  for (const EstimatorSpec& spec :
       {EstimatorSpec{MeanOnly{}}, EstimatorSpec{ExpAlpha{0.41346}}, EstimatorSpec{Difference{0.33559}}}) {
    cfg.convention = kCorrected;
    const McReport c = summarize(reps, spec, cfg);
    cfg.convention = kPrinted;
    const McReport p = summarize(reps, spec, cfg);
    const double rel = std::abs(c.emp_mse / c.theory_mse - 1.0);
    ok &= rel <= 0.02 && std::abs(c.z_mse) <= 3.0 && std::abs(p.z_mse) > 10.0;
    detail += fmt("%s: rel %.4f z %.2f (as-printed z %.3g); ", std::string(family_name(spec)).c_str(), rel,
                  c.z_mse, p.z_mse);
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

Outcome a6_bias_arbitration() {
  McConfig cfg = reference_config(200, 1000000, 6006);
  const McReport r = run_mc(cfg, ExpProduct{});
  const double generic = bias_exp_alpha(-1.0, kEmp, 200, kCorrected);
  const double printed = bias_exp_product_as_printed(kEmp, 200, kCorrected);
  const double z_generic = (r.emp_bias - generic) / r.se_bias;
  const double z_printed = (r.emp_bias - printed) / r.se_bias;
  // The printed form predicts a larger, positive bias; the data must sit
  // below it and on the generic form.
  const bool ok = std::abs(z_generic) <= 3.0 && z_printed < -3.0 && generic < printed;
  return {ok, fmt("emp %.3e +- %.1e; generic %.3e (z %.2f); printed-form analogue %.3e (z %.2f); "
                  "data support the %s form",
                  r.emp_bias, r.se_bias, generic, z_generic, printed, z_printed,
                  ok ? "generic exponential-class" : "(undetermined)")};
}

Outcome a7_optimum_alpha() {
  const McConfig cfg = reference_config(200, 100000, 7007);
  const auto opt = empirical_optimum_alpha(cfg, {0.0, 1.0, 0.01});
  const double target = 2 * 2.112 / 10.216;
  const double printed = optimum_alpha(kEmp, kPrinted);
  const bool ok = std::abs(opt.best - target) <= 0.02 && std::abs(opt.best - printed) > 0.2;
  return {ok, fmt("empirical alpha %.2f; corrected %.5f; printed %.5f", opt.best, target, printed)};
}

Outcome a8_weights() {
  const McConfig cfg = reference_config(200, 50000, 8008);
  const auto s = empirical_optimum_weights(cfg, MemberId::q4);
  const double ratio = s.theory_emp_mse / s.best_mse;
  return {ratio <= 1.02, fmt("theory (%.5f, %.5f) MSE %.6g; best grid (%.5f, %.5f) MSE %.6g; ratio %.4f",
                             s.theory.w1, s.theory.w2, s.theory_emp_mse, s.best.w1, s.best.w2, s.best_mse,
                             ratio)};
}

Outcome a9_unbiasedness() {
  const McConfig cfg = reference_config(20, 100000, 9009);
  const ReplicateSet reps = simulate_replicates(cfg);
  bool ok = true;
  std::string detail;
  const double bstar = optimum_b(kEmp, kCorrected);
  for (const EstimatorSpec& spec : {EstimatorSpec{MeanOnly{}}, EstimatorSpec{Difference{0.0}},
                                    EstimatorSpec{Difference{bstar}}, EstimatorSpec{Difference{1.0}}}) {
    const McReport r = summarize(reps, spec, cfg);
    const double z = r.emp_bias / r.se_bias;
    ok &= std::abs(z) <= 3.0;
    detail += fmt("%s %.2f; ", r.estimator.c_str(), z);
  }
  detail.resize(detail.size() - 2);
  return {ok, "bias/se: " + detail};
}

Outcome a10_gof_calibration() {
  int rejections = 0;
  const int datasets = 2000;
  PoissonSampler sampler(5.0);
  std::vector<std::int64_t> values(500);
  for (int d = 0; d < datasets; ++d) {
    Stream s = derive_stream(10010, static_cast<std::uint64_t>(d));
    for (auto& v : values) v = sampler(s);
    rejections += poisson_gof(values).pvalue < 0.05;
  }
  const double rate = static_cast<double>(rejections) / datasets;
  return {rate >= 0.03 && rate <= 0.08, fmt("rejection rate %.2f%% over %d datasets", 100 * rate, datasets)};
}

Outcome a11_determinism() {
  auto simulate = [](const char* workers) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run({"simulate", "--gamma1", "4.1813", "--gamma2", "8.104", "--gamma3", "2.112",
                               "--n", "50", "--replicates", "20000", "--seed", "11011", "--estimator",
                               "exp-alpha", "--params", "alpha=0.41346", "--workers", workers},
                              out, err);
    return std::to_string(code) + "\n" + out.str();
  };
  const std::string first = simulate("1");
  bool ok = first.rfind("0\n", 0) == 0;
  for (const char* w : {"1", "2", "4", "0"}) ok &= simulate(w) == first;
  return {ok, fmt("%zu output bytes identical across runs and workers 1, 2, 4, auto", first.size() - 2)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"A1", a1_formula_fidelity}, {"A2", a2_identity},          {"A3", a3_tautologies},
      {"A4", a4_pre_table},        {"A5", a5_mc_vs_theory},      {"A6", a6_bias_arbitration},
      {"A7", a7_optimum_alpha},    {"A8", a8_weights},           {"A9", a9_unbiasedness},
      {"A10", a10_gof_calibration}, {"A11", a11_determinism},
  };
  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::printf("%-4s %s  %s [%.2fs]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
