#include "cli/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/csv.hpp"
#include "poisest/errors.hpp"
#include "poisest/fit.hpp"
#include "poisest/montecarlo.hpp"
#include "poisest/theory.hpp"

namespace poisest::cli {

namespace {

using nlohmann::ordered_json;

constexpr const char* kCsvHelp =
    "Input CSV: one record per line, two non-negative integers 'x,y' (x auxiliary count, "
    "y study count), comma-delimited, no spaces or quotes; optional first line header 'x,y'; "
    "blank lines ignored; LF or CRLF endings. Sample variances and the covariance use the "
    "n - 1 divisor.";

struct Common {
  double gamma1 = std::numeric_limits<double>::quiet_NaN();
  double gamma2 = std::numeric_limits<double>::quiet_NaN();
  double gamma3 = std::numeric_limits<double>::quiet_NaN();
  std::int64_t n = 20;
  std::string convention = "corrected";
  std::string format_name = "json";

  GammaTriple gammas() const { return GammaTriple(gamma1, gamma2, gamma3); }
  MomentConvention conv() const { return parse_convention(convention); }
  OutputFormat format() const { return format_name == "tsv" ? OutputFormat::tsv : OutputFormat::json; }
};

void add_gamma_flags(CLI::App& cmd, Common& c) {
  cmd.add_option("--gamma1", c.gamma1, "rate of the auxiliary-only component")->required();
  cmd.add_option("--gamma2", c.gamma2, "rate of the study-only component")->required();
  cmd.add_option("--gamma3", c.gamma3, "rate of the shared component")->required();
}

void add_format_flag(CLI::App& cmd, Common& c) {
  cmd.add_option("--format", c.format_name, "output format: json or tsv")
      ->check(CLI::IsMember({"json", "tsv"}));
}

void add_convention_flag(CLI::App& cmd, Common& c) {
  cmd.add_option("--convention", c.convention, "moment convention: as-printed or corrected")
      ->check(CLI::IsMember({"as-printed", "corrected"}));
}

ordered_json gammas_json(const GammaTriple& g) {
  return {{"gamma1", g.gamma1()}, {"gamma2", g.gamma2()}, {"gamma3", g.gamma3()}};
}

// Doubles in TSV use the shortest round-trip representation, as the JSON
// writer does.
std::string num(double v) { return ordered_json(v).dump(); }

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : ""; }

void write_json(std::ostream& out, const ordered_json& doc) { out << doc.dump(2) << '\n'; }

void write_kv_tsv(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& kv) {
  out << "key\tvalue\n";
  for (const auto& [k, v] : kv) out << k << '\t' << v << '\n';
}

ordered_json condition_json(const ConditionCheck& c) {
  return {{"condition", c.label}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}, {"note", c.note}};
}

ordered_json gof_json(const GofReport& r) {
  ordered_json bins = ordered_json::array();
  for (const auto& b : r.bins) {
    bins.push_back({{"lo", b.lo},
                    {"hi", b.hi ? ordered_json(*b.hi) : ordered_json(nullptr)},
                    {"observed", b.observed},
                    {"expected", b.expected}});
  }
  return {{"n", r.n},         {"lambda_hat", r.lambda_hat}, {"chi2", r.chi2},
          {"df", r.df},       {"pvalue", r.pvalue},         {"degenerate", r.degenerate},
          {"bins", bins}};
}

std::vector<std::int64_t> column(const Sample& s, bool take_x) {
  std::vector<std::int64_t> v;
  v.reserve(s.size());
  for (const auto& p : s.pairs()) v.push_back(take_x ? p.x : p.y);
  return v;
}

// ---------------------------------------------------------------- fit

int cmd_fit(const std::string& path, bool clamp, const Common& c, std::ostream& out,
            std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  const Sample sample = read_count_csv(in);
  const FitResult fit = fit_gammas(sample, clamp);
  for (const auto& w : fit.warnings) err << "warning: " << w << '\n';
  const PopulationMoments pm = moments_from_gammas(fit.gammas);

  std::optional<GofReport> gx;
  std::optional<GofReport> gy;
  if (sample.size() >= 10) {
    gx = poisson_gof(column(sample, true));
    gy = poisson_gof(column(sample, false));
  } else {
    err << "note: goodness-of-fit skipped (needs at least 10 rows, got " << sample.size() << ")\n";
  }

  if (c.format() == OutputFormat::json) {
    ordered_json doc{{"command", "fit"},
                     {"n", fit.stats.n},
                     {"gammas", gammas_json(fit.gammas)},
                     {"lambda1", pm.lambda1},
                     {"lambda2", pm.lambda2},
                     {"rho", pm.rho},
                     {"sample", {{"xbar", fit.stats.xbar},
                                 {"ybar", fit.stats.ybar},
                                 {"s2x", *fit.stats.s2x},
                                 {"s2y", *fit.stats.s2y},
                                 {"sxy", *fit.stats.sxy}}},
                     {"gof_x", gx ? gof_json(*gx) : ordered_json(nullptr)},
                     {"gof_y", gy ? gof_json(*gy) : ordered_json(nullptr)},
                     {"warnings", fit.warnings}};
    write_json(out, doc);
    return kOk;
  }
  std::vector<std::pair<std::string, std::string>> kv{
      {"n", std::to_string(fit.stats.n)},   {"gamma1", num(fit.gammas.gamma1())},
      {"gamma2", num(fit.gammas.gamma2())}, {"gamma3", num(fit.gammas.gamma3())},
      {"lambda1", num(pm.lambda1)},         {"lambda2", num(pm.lambda2)},
      {"rho", num(pm.rho)}};
  for (const auto& [name, g] : {std::pair{"gof_x", gx}, std::pair{"gof_y", gy}}) {
    if (!g) continue;
    const std::string p = name;
    kv.emplace_back(p + ".lambda_hat", num(g->lambda_hat));
    kv.emplace_back(p + ".chi2", num(g->chi2));
    kv.emplace_back(p + ".df", std::to_string(g->df));
    kv.emplace_back(p + ".pvalue", num(g->pvalue));
    for (std::size_t i = 0; i < g->bins.size(); ++i) {
      const auto& b = g->bins[i];
      kv.emplace_back(p + ".bin" + std::to_string(i),
                      std::to_string(b.lo) + "-" + (b.hi ? std::to_string(*b.hi) : std::string("inf")) +
                          ":" + std::to_string(b.observed) + ":" + num(b.expected));
    }
  }
  write_kv_tsv(out, kv);
  return kOk;
}

// ---------------------------------------------------------------- pre-table

int cmd_pre_table(const Common& c, std::ostream& out, std::ostream& err) {
  if (c.n < 1) throw ValidationError("--n must be >= 1");
  const GammaTriple g = c.gammas();
  const TheoryReport rep = pre_table(g, c.n, c.conv());
  const PopulationMoments pm = moments_from_gammas(g);

  if (c.format() == OutputFormat::json) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : rep.rows) {
      rows.push_back({{"key", r.key},
                      {"estimator", r.estimator},
                      {"bias", r.bias},
                      {"mse", r.mse},
                      {"pre", r.pre},
                      {"published_pre", r.printed_pre ? ordered_json(*r.printed_pre) : ordered_json(nullptr)},
                      {"note", r.note}});
    }
    ordered_json direct = ordered_json::array();
    for (const auto& d : rep.efficiency.direct) direct.push_back(condition_json(d));
    ordered_json doc{
        {"command", "pre-table"},
        {"gammas", gammas_json(g)},
        {"n", c.n},
        {"convention", to_string(rep.convention)},
        {"rho", pm.rho},
        {"base_variance", rep.base_variance},
        {"rows", rows},
        {"efficiency", {{"exp_vs_exp_ratio", condition_json(rep.efficiency.exp_vs_exp_ratio)},
                        {"exp_vs_exp_product", condition_json(rep.efficiency.exp_vs_exp_product)},
                        {"tm_vs_exp", condition_json(rep.efficiency.tm_vs_exp)},
                        {"direct", direct}}},
        {"tm_min_mse", rep.tm_min_mse},
        {"tm_min_mse_as_printed", rep.tm_min_mse_as_printed ? ordered_json(*rep.tm_min_mse_as_printed)
                                                            : ordered_json("not comparable")},
        {"annotations", rep.annotations}};
    write_json(out, doc);
    return kOk;
  }
  out << "key\testimator\tbias\tmse\tpre\tpublished_pre\tnote\n";
  for (const auto& r : rep.rows) {
    out << r.key << '\t' << r.estimator << '\t' << num(r.bias) << '\t' << num(r.mse) << '\t'
        << num(r.pre) << '\t' << opt_num(r.printed_pre) << '\t' << r.note << '\n';
  }
  auto diag = [&err](const ConditionCheck& cc) {
    err << "condition: " << cc.label << ": " << num(cc.lhs) << " >= " << num(cc.rhs) << " -> "
        << (cc.holds ? "true" : "false") << (cc.note.empty() ? "" : " (" + cc.note + ")") << '\n';
  };
  diag(rep.efficiency.exp_vs_exp_ratio);
  diag(rep.efficiency.exp_vs_exp_product);
  diag(rep.efficiency.tm_vs_exp);
  for (const auto& d : rep.efficiency.direct) diag(d);
  for (const auto& a : rep.annotations) err << "note: " << a << '\n';
  return kOk;
}

// ---------------------------------------------------------------- simulate

struct McFlags {
  std::int64_t replicates = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::int64_t population = 0;
};

McConfig make_config(const Common& c, const McFlags& f) {
  McConfig cfg;
  cfg.gammas = c.gammas();
  cfg.n = c.n;
  cfg.replicates = f.replicates;
  cfg.master_seed = f.seed;
  cfg.convention = c.conv();
  cfg.workers = f.workers;
  if (f.population > 0) cfg.population_size = f.population;
  validate(cfg);
  return cfg;
}

ordered_json config_json(const McConfig& cfg) {
  // Worker count is deliberately absent: output must not depend on it.
  ordered_json j{{"gammas", gammas_json(cfg.gammas)},
                 {"n", cfg.n},
                 {"replicates", cfg.replicates},
                 {"seed", cfg.master_seed},
                 {"convention", to_string(cfg.convention)}};
  if (cfg.population_size) j["population_size"] = *cfg.population_size;
  return j;
}

int cmd_simulate(const Common& c, const McFlags& f, const std::string& estimator,
                 const std::vector<std::string>& params, std::ostream& out, std::ostream& err) {
  const McConfig cfg = make_config(c, f);
  const EstimatorSpec spec = make_estimator(estimator, parse_params(params), cfg.gammas, cfg.n, cfg.convention);
  McReport r;
  try {
    r = run_mc(cfg, spec);
  } catch (const SimulationError& e) {
    err << "error: " << e.what() << '\n';
    return kSimulationQuality;
  }
  if (!r.mse_reliable()) {
    err << "error: " << r.failed_replicates << " of " << r.replicates
        << " replicates failed (xbar = 0 singularity), above the 0.1% limit; MSE not reported\n";
    return kSimulationQuality;
  }
  if (c.format() == OutputFormat::json) {
    ordered_json doc{{"command", "simulate"},
                     {"config", config_json(cfg)},
                     {"estimator", r.estimator},
                     {"replicates", r.replicates},
                     {"failed_replicates", r.failed_replicates},
                     {"emp_bias", r.emp_bias},
                     {"emp_mse", r.emp_mse},
                     {"se_bias", r.se_bias},
                     {"se_mse", r.se_mse},
                     {"theory_bias", r.theory_bias},
                     {"theory_mse", r.theory_mse},
                     {"z_bias", r.z_bias},
                     {"z_mse", r.z_mse},
                     {"convention", to_string(r.convention)}};
    write_json(out, doc);
    return kOk;
  }
  out << "estimator\treplicates\tfailed_replicates\temp_bias\temp_mse\tse_bias\tse_mse\t"
         "theory_bias\ttheory_mse\tz_bias\tz_mse\tconvention\n";
  out << r.estimator << '\t' << r.replicates << '\t' << r.failed_replicates << '\t'
      << num(r.emp_bias) << '\t' << num(r.emp_mse) << '\t' << num(r.se_bias) << '\t'
      << num(r.se_mse) << '\t' << num(r.theory_bias) << '\t' << num(r.theory_mse) << '\t'
      << num(r.z_bias) << '\t' << num(r.z_mse) << '\t' << to_string(r.convention) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- optimize

int cmd_optimize(const Common& c, const McFlags& f, const std::string& family, Grid1D grid,
                 const std::string& member, std::ostream& out) {
  const McConfig cfg = make_config(c, f);
  ordered_json doc{{"command", "optimize"}, {"family", family}, {"config", config_json(cfg)}};

  if (family == "alpha" || family == "b") {
    const bool is_alpha = family == "alpha";
    const EmpiricalOptimum e = is_alpha ? empirical_optimum_alpha(cfg, grid) : empirical_optimum_b(cfg, grid);
    const double printed = is_alpha ? optimum_alpha(cfg.gammas, MomentConvention::AsPrinted)
                                    : optimum_b(cfg.gammas, MomentConvention::AsPrinted);
    const double corrected = is_alpha ? optimum_alpha(cfg.gammas, MomentConvention::Corrected)
                                      : optimum_b(cfg.gammas, MomentConvention::Corrected);
    if (c.format() == OutputFormat::tsv) {
      write_kv_tsv(out, {{"empirical", num(e.best)},
                         {"empirical_mse", num(e.best_mse)},
                         {"theory_as_printed", num(printed)},
                         {"theory_corrected", num(corrected)},
                         {"grid_lo", num(grid.lo)},
                         {"grid_hi", num(grid.hi)},
                         {"grid_step", num(grid.step)}});
      return kOk;
    }
    ordered_json curve = ordered_json::array();
    for (const auto& p : e.curve) curve.push_back({{"value", p.value}, {"emp_mse", p.emp_mse}, {"failed", p.failed}});
    doc["grid"] = {{"lo", grid.lo}, {"hi", grid.hi}, {"step", grid.step}};
    doc["empirical"] = e.best;
    doc["empirical_mse"] = e.best_mse;
    doc["theory_as_printed"] = printed;
    doc["theory_corrected"] = corrected;
    doc["curve"] = curve;
    write_json(out, doc);
    return kOk;
  }

  if (family != "weights") throw ValidationError("unknown family '" + family + "' (alpha, b or weights)");
  const MemberId id = parse_member(member);
  const WeightSearch ws = empirical_optimum_weights(cfg, id);
  auto theory_under = [&](MomentConvention conv) {
    const ResolvedMember rm = resolve_named_member(id, moments_from_gammas(cfg.gammas));
    double alpha = rm.spec.alpha;
    if (rm.alpha_free) {
      const RelativeMoments e = relative_moments(cfg.gammas, 1, conv);
      alpha = e.e01 / e.e11;
    }
    return optimum_weights(tm_coefficients(alpha, rm.spec.eta, rm.spec.theta, cfg.gammas, cfg.n, conv));
  };
  const Weights wp = theory_under(MomentConvention::AsPrinted);
  const Weights wc = theory_under(MomentConvention::Corrected);
  if (c.format() == OutputFormat::tsv) {
    write_kv_tsv(out, {{"member", std::string(to_string(id))},
                       {"empirical_w1", num(ws.best.w1)},
                       {"empirical_w2", num(ws.best.w2)},
                       {"empirical_mse", num(ws.best_mse)},
                       {"theory_emp_mse", num(ws.theory_emp_mse)},
                       {"theory_as_printed_w1", num(wp.w1)},
                       {"theory_as_printed_w2", num(wp.w2)},
                       {"theory_corrected_w1", num(wc.w1)},
                       {"theory_corrected_w2", num(wc.w2)},
                       {"step_w1", num(ws.step_w1)},
                       {"step_w2", num(ws.step_w2)}});
    return kOk;
  }
  doc["member"] = to_string(id);
  doc["empirical"] = {{"w1", ws.best.w1}, {"w2", ws.best.w2}, {"emp_mse", ws.best_mse}};
  doc["grid_centre"] = {{"w1", ws.theory.w1}, {"w2", ws.theory.w2}, {"emp_mse", ws.theory_emp_mse},
                        {"step_w1", ws.step_w1}, {"step_w2", ws.step_w2}};
  doc["theory_as_printed"] = {{"w1", wp.w1}, {"w2", wp.w2}};
  doc["theory_corrected"] = {{"w1", wc.w1}, {"w2", wc.w2}};
  write_json(out, doc);
  return kOk;
}

// ---------------------------------------------------------------- members

int cmd_members(const Common& c, std::ostream& out) {
  const GammaTriple g = c.gammas();
  const PopulationMoments pm = moments_from_gammas(g);
  if (c.format() == OutputFormat::tsv) {
    out << "member\tw1\tw2\talpha\teta\ttheta\n";
    for (MemberId id : kAllMembers) {
      const ResolvedMember m = resolve_named_member(id, pm);
      out << to_string(id) << '\t' << (m.w1_free ? "free" : num(m.spec.w1)) << '\t' << num(m.spec.w2)
          << '\t' << (m.alpha_free ? "free" : num(m.spec.alpha)) << '\t' << num(m.spec.eta) << '\t'
          << num(m.spec.theta) << '\n';
    }
    return kOk;
  }
  ordered_json rows = ordered_json::array();
  for (MemberId id : kAllMembers) {
    const ResolvedMember m = resolve_named_member(id, pm);
    rows.push_back({{"member", to_string(id)},
                    {"w1", m.w1_free ? ordered_json(nullptr) : ordered_json(m.spec.w1)},
                    {"w2", m.spec.w2},
                    {"alpha", m.alpha_free ? ordered_json(nullptr) : ordered_json(m.spec.alpha)},
                    {"eta", m.spec.eta},
                    {"theta", m.spec.theta},
                    {"w1_free", m.w1_free},
                    {"alpha_free", m.alpha_free}});
  }
  write_json(out, {{"command", "members"}, {"gammas", gammas_json(g)}, {"rho", pm.rho}, {"xbar", pm.xbar}, {"members", rows}});
  return kOk;
}

}  // namespace

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ValidationError("malformed parameter '" + item + "' (want key=value)");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size() || !std::isfinite(v)) {
      throw ValidationError("parameter '" + key + "' needs a finite number, got '" + value + "'");
    }
    if (!out.emplace(key, v).second) throw ValidationError("duplicate parameter '" + key + "'");
  }
  return out;
}

EstimatorSpec make_estimator(const std::string& name, const std::map<std::string, double>& params,
                             const GammaTriple& g, std::int64_t n, MomentConvention conv) {
  auto allow = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : params) {
      bool ok = false;
      for (const char* a : keys) ok = ok || k == a;
      if (!ok) throw ValidationError("parameter '" + k + "' does not apply to estimator '" + name + "'");
    }
  };
  auto need = [&](const char* key) {
    const auto it = params.find(key);
    if (it == params.end()) throw ValidationError("estimator '" + name + "' needs --params " + key + "=<value>");
    return it->second;
  };
  auto get = [&](const char* key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };

  EstimatorSpec spec;
  if (name == "mean") {
    allow({});
    spec = MeanOnly{};
  } else if (name == "ratio") {
    allow({});
    spec = Ratio{};
  } else if (name == "product") {
    allow({});
    spec = Product{};
  } else if (name == "exp-ratio") {
    allow({});
    spec = ExpRatio{};
  } else if (name == "exp-product") {
    allow({});
    spec = ExpProduct{};
  } else if (name == "exp-alpha") {
    allow({"alpha"});
    spec = ExpAlpha{need("alpha")};
  } else if (name == "difference") {
    allow({"b"});
    spec = Difference{need("b")};
  } else if (name == "general") {
    allow({"w1", "w2", "alpha", "eta", "theta"});
    const General d;
    spec = General{get("w1", d.w1), get("w2", d.w2), get("alpha", d.alpha), get("eta", d.eta), get("theta", d.theta)};
  } else if (name.rfind("member:", 0) == 0) {
    allow({"w1", "alpha"});
    const ResolvedMember m = resolve_named_member(parse_member(name.substr(7)), moments_from_gammas(g));
    General s = m.spec;
    if (params.count("alpha") && !m.alpha_free) throw ValidationError("member alpha is fixed by the table");
    if (params.count("w1") && !m.w1_free) throw ValidationError("member w1 is fixed by the table");
    if (m.alpha_free) {
      const RelativeMoments e = relative_moments(g, 1, conv);
      s.alpha = get("alpha", e.e01 / e.e11);
    }
    if (m.w1_free) {
      s.w1 = params.count("w1") ? params.at("w1")
                                : optimum_w1_only(tm_coefficients(s.alpha, s.eta, s.theta, g, n, conv));
    }
    spec = s;
  } else {
    throw ValidationError("unknown estimator '" + name + "'");
  }
  validate(spec);
  return spec;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"poisest: mean estimators for bivariate Poisson populations"};
  app.require_subcommand(1);
  app.footer(kCsvHelp);

  Common common;
  McFlags mc;
  std::string csv_path;
  bool clamp = false;
  std::string estimator = "mean";
  std::vector<std::string> params;
  std::string family = "alpha";
  std::string member = "q4";
  Grid1D grid{0.0, 1.0, 0.01};
  std::function<int()> action;

  auto* fit = app.add_subcommand("fit", "fit gamma1..3 by moments and test Poisson marginals");
  fit->add_option("input", csv_path, "CSV file of x,y counts")->required();
  fit->add_flag("--clamp", clamp, "clamp infeasible components to 0 instead of failing");
  add_format_flag(*fit, common);
  fit->footer(kCsvHelp);
  fit->callback([&] { action = [&] { return cmd_fit(csv_path, clamp, common, out, err); }; });

  auto* pre = app.add_subcommand("pre-table", "first-order bias, MSE and PRE of every estimator");
  add_gamma_flags(*pre, common);
  pre->add_option("--n", common.n, "sample size");
  add_convention_flag(*pre, common);
  add_format_flag(*pre, common);
  pre->callback([&] { action = [&] { return cmd_pre_table(common, out, err); }; });

  auto add_mc_flags = [&](CLI::App& cmd) {
    add_gamma_flags(cmd, common);
    cmd.add_option("--n", common.n, "sample size per replicate");
    cmd.add_option("--replicates", mc.replicates, "Monte Carlo replicates");
    cmd.add_option("--seed", mc.seed, "master seed (uint64)");
    cmd.add_option("--workers", mc.workers, "worker threads, 0 = all cores (output is identical)");
    cmd.add_option("--population", mc.population,
                   "draw SRSWOR samples from one finite population of this size");
    add_convention_flag(cmd, common);
    add_format_flag(cmd, common);
  };

  auto* sim = app.add_subcommand("simulate", "Monte Carlo bias/MSE of one estimator against theory");
  add_mc_flags(*sim);
  sim->add_option("--estimator", estimator,
                  "mean|ratio|product|exp-ratio|exp-product|exp-alpha|difference|general|member:<id>");
  sim->add_option("--params", params, "key=value list, e.g. alpha=0.41 or w1=1,eta=1")->delimiter(',');
  sim->callback([&] { action = [&] { return cmd_simulate(common, mc, estimator, params, out, err); }; });

  auto* opt = app.add_subcommand("optimize", "empirical optimum vs closed-form optima");
  add_mc_flags(*opt);
  opt->add_option("--family", family, "alpha, b or weights")->check(CLI::IsMember({"alpha", "b", "weights"}));
  opt->add_option("--lo", grid.lo, "grid start (alpha/b)");
  opt->add_option("--hi", grid.hi, "grid end (alpha/b)");
  opt->add_option("--step", grid.step, "grid step (alpha/b)");
  opt->add_option("--member", member, "member shape for the weights family");
  opt->callback([&] { action = [&] { return cmd_optimize(common, mc, family, grid, member, out); }; });

  auto* mem = app.add_subcommand("members", "named members of the generalised class");
  add_gamma_flags(*mem, common);
  add_format_flag(*mem, common);
  mem->callback([&] { action = [&] { return cmd_members(common, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    return action();
  } catch (const SimulationError& e) {
    err << "error: " << e.what() << '\n';
    return kSimulationQuality;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"poisest"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace poisest::cli
