#include "poisest/theory.hpp"

#include <cassert>
#include <cmath>
#include <sstream>

#include "poisest/errors.hpp"

namespace poisest {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

struct Context {
  RelativeMoments e;
  double ybar;
  double xbar;
};

Context context(const GammaTriple& g, std::int64_t n, MomentConvention conv) {
  return {relative_moments(g, n, conv), g.gamma2() + g.gamma3(), g.gamma1() + g.gamma3()};
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

// Published PRE column, in row order ybar, t_r, t_k1, t_k2, t_p, t_R, t_m.
struct PublishedPre {
  const char* key;
  double value;
};
constexpr PublishedPre kPublishedPre[] = {
    {"ybar", 100.00}, {"t_r", 100.00},  {"t_k1", 103.25},  {"t_k2", 72.31},
    {"t_p", 106.73},  {"t_R", 106.73},  {"t_m", 9937.42},
};

// The published column belongs to one input only.
bool is_published_input(const GammaTriple& g, std::int64_t n) {
  return n == 20 && g == GammaTriple(4.1813, 8.104, 2.112);
}

std::optional<double> published_pre(std::string_view key) {
  for (const auto& p : kPublishedPre) {
    if (key == p.key) return p.value;
  }
  return std::nullopt;
}

ConditionCheck check(std::string label, double lhs, double rhs, std::string note = {}) {
  return {std::move(label), lhs, rhs, lhs >= rhs, std::move(note)};
}

}  // namespace

double var_base(const GammaTriple& g, std::int64_t n, MomentConvention conv) {
  const Context c = context(g, n, conv);
  return c.ybar * c.ybar * c.e.e00;
}

double bias_exp_alpha(double alpha, const GammaTriple& g, std::int64_t n, MomentConvention conv) {
  const Context c = context(g, n, conv);
  return c.ybar * (alpha * (alpha + 2.0) / 8.0 * c.e.e11 - alpha / 2.0 * c.e.e01);
}

double mse_exp_alpha(double alpha, const GammaTriple& g, std::int64_t n, MomentConvention conv) {
  const Context c = context(g, n, conv);
  return c.ybar * c.ybar * (c.e.e00 + alpha * alpha / 4.0 * c.e.e11 - alpha * c.e.e01);
}

double optimum_alpha(const GammaTriple& g, MomentConvention conv) {
  const Context c = context(g, 1, conv);
  return 2.0 * c.e.e01 / c.e.e11;
}

double min_mse_exp(const GammaTriple& g, std::int64_t n, MomentConvention conv) {
  const Context c = context(g, n, conv);
  return c.ybar * c.ybar * (c.e.e00 - c.e.e01 * c.e.e01 / c.e.e11);
}

double bias_exp_product_as_printed(const GammaTriple& g, std::int64_t n, MomentConvention conv) {
  const Context c = context(g, n, conv);
  return c.ybar * (c.e.e11 / 8.0 + c.e.e01 / 2.0);
}

double mse_difference(double b, const GammaTriple& g, std::int64_t n, MomentConvention conv) {
  const Context c = context(g, n, conv);
  return c.ybar * c.ybar * c.e.e00 + b * b * c.xbar * c.xbar * c.e.e11 -
         2.0 * b * c.ybar * c.xbar * c.e.e01;
}

double optimum_b(const GammaTriple& g, MomentConvention conv) {
  const Context c = context(g, 1, conv);
  return c.ybar * c.e.e01 / (c.xbar * c.e.e11);
}

double min_mse_difference(const GammaTriple& g, std::int64_t n, MomentConvention conv) {
  const Context c = context(g, n, conv);
  const double cov = c.ybar * c.xbar * c.e.e01;
  const double var_x = c.xbar * c.xbar * c.e.e11;
  return c.ybar * c.ybar * c.e.e00 - cov * cov / var_x;
}

TmCoefficients tm_coefficients(double alpha, double eta, double theta, const GammaTriple& g,
                               std::int64_t n, MomentConvention conv) {
  const Context ctx = context(g, n, conv);
  const double denom = eta * ctx.xbar + theta;
  if (denom == 0.0) {
    throw SingularDenominatorError("singular denominator: eta Xbar + theta = 0 in k");
  }
  TmCoefficients c{};
  c.convention = conv;
  c.alpha = alpha;
  c.eta = eta;
  c.theta = theta;
  c.k = conv == MomentConvention::AsPrinted ? eta / (2.0 * denom)
                                            : eta * ctx.xbar / (2.0 * denom);
  c.a = alpha + c.k;
  c.d_quad = 1.5 * c.k * c.k + alpha * c.k + alpha * (alpha + 1.0) / 2.0;
  c.delta = ctx.ybar - ctx.xbar;
  const auto& e = ctx.e;
  c.A = c.delta * c.delta + ctx.ybar * ctx.ybar * (e.e00 + c.a * c.a * e.e11 - 2.0 * c.a * e.e01);
  c.B = ctx.xbar * ctx.xbar * e.e11;
  c.C = ctx.ybar * ctx.xbar * (e.e01 - c.a * e.e11);
  c.ybar = ctx.ybar;
  c.xbar = ctx.xbar;
  c.moments = e;
  return c;
}

Weights optimum_weights(const TmCoefficients& c) {
  const double det = c.determinant();
  if (!(det > 0.0)) {
    throw DegenerateFormError("t_m quadratic form is not positive definite (AB - C^2 = " +
                              fmt(det) + "); optimum weights undefined");
  }
  const double d2 = c.delta * c.delta;
  return {d2 * c.B / det, -d2 * c.C / det};
}

double min_mse_tm(const TmCoefficients& c) {
  const double det = c.determinant();
  if (!(det > 0.0)) {
    throw DegenerateFormError("t_m quadratic form is not positive definite (AB - C^2 = " +
                              fmt(det) + "); minimum MSE undefined");
  }
  const double d2 = c.delta * c.delta;
  // 1 - d2 B / det = ((A - d2) B - C^2) / det; the right side avoids cancelling
  // against d2 when delta dominates.
  const double slack = (c.A - d2) * c.B - c.C * c.C;
  const double value = d2 * slack / det;
  assert(value >= -1e-12 * d2 && value <= d2 * (1.0 + 1e-12));
  return value;
}

double optimum_w1_only(const TmCoefficients& c) {
  if (!(c.A > 0.0)) throw DegenerateFormError("A <= 0; optimum w1 undefined");
  return c.delta * c.delta / c.A;
}

double min_mse_tm_w1_only(const TmCoefficients& c) {
  if (!(c.A > 0.0)) throw DegenerateFormError("A <= 0; minimum MSE undefined");
  const double d2 = c.delta * c.delta;
  return d2 * (c.A - d2) / c.A;
}

double mse_tm(const TmCoefficients& c, Weights w) {
  const double d2 = c.delta * c.delta;
  return (1.0 - 2.0 * w.w1) * d2 + w.w1 * w.w1 * c.A + w.w2 * w.w2 * c.B +
         2.0 * w.w1 * w.w2 * c.C;
}

double bias_tm(const TmCoefficients& c, Weights w) {
  return (w.w1 - 1.0) * c.delta +
         w.w1 * c.ybar * (c.d_quad * c.moments.e11 - c.a * c.moments.e01);
}

std::optional<double> min_mse_tm_as_printed(const GammaTriple& g, std::int64_t n) {
  if (n < 1) throw ValidationError("sample size n must be >= 1");
  const double l1 = g.gamma1() + g.gamma3();
  const double l2 = g.gamma2() + g.gamma3();
  const double d = l2 - l1;
  if (d == 0.0) return std::nullopt;
  const double core = l1 * l2 - g.gamma2() * g.gamma2();
  const double denom = l1 + l2 * l2 / (d * d * static_cast<double>(n)) * core;
  if (denom == 0.0) {
    throw SingularDenominatorError("singular denominator in published minimum-MSE closed form");
  }
  return l2 * l2 * core / denom;
}

EfficiencyReport efficiency_report(const GammaTriple& g, std::int64_t n, MomentConvention conv) {
  const double g1 = g.gamma1();
  const double g2 = g.gamma2();
  const double g3 = g.gamma3();
  const double l1 = g1 + g3;
  const double l2 = g2 + g3;
  const double d = l2 - l1;
  const double nn = static_cast<double>(n);

  EfficiencyReport r;
  r.exp_vs_exp_ratio = check("(gamma1 + gamma3)^2 >= 4 gamma1 gamma3", l1 * l1, 4.0 * g1 * g3,
                             "t_p at optimum alpha vs exponential ratio estimator");
  r.exp_vs_exp_product =
      check("gamma1 + 5 gamma3 >= -4 gamma3^2 / (gamma1 + gamma3)", g1 + 5.0 * g3,
            -4.0 * g3 * g3 / l1, "t_p at optimum alpha vs exponential product estimator");
  r.tm_vs_exp = check("lambda2^2 (lambda1 lambda2 - gamma2^2) >= (n - 1) lambda1 d^2 n",
                      l2 * l2 * (l1 * l2 - g2 * g2), (nn - 1.0) * l1 * d * d * nn,
                      "as printed; derivation unverified");

  const double min_exp = min_mse_exp(g, n, conv);
  r.direct.push_back(check("MSE(t_k1) >= min MSE(t_p)", mse_exp_alpha(1.0, g, n, conv), min_exp));
  r.direct.push_back(check("MSE(t_k2) >= min MSE(t_p)", mse_exp_alpha(-1.0, g, n, conv), min_exp));
  r.direct.push_back(check("min MSE(t_p) >= min MSE(t_m)", min_exp,
                           best_tm_optimum(g, n, conv).min_mse));
  return r;
}

TheoryValue theory_of(const EstimatorSpec& spec, const GammaTriple& g, std::int64_t n,
                      MomentConvention conv) {
  auto exp_class = [&](double alpha) {
    return TheoryValue{bias_exp_alpha(alpha, g, n, conv), mse_exp_alpha(alpha, g, n, conv)};
  };
  return std::visit(
      Overloaded{
          [&](const MeanOnly&) { return TheoryValue{0.0, var_base(g, n, conv)}; },
          [&](const Ratio&) { return exp_class(2.0); },
          [&](const Product&) { return exp_class(-2.0); },
          [&](const ExpRatio&) { return exp_class(1.0); },
          [&](const ExpProduct&) { return exp_class(-1.0); },
          [&](const ExpAlpha& e) { return exp_class(e.alpha); },
          [&](const Difference& d) { return TheoryValue{0.0, mse_difference(d.b, g, n, conv)}; },
          [&](const General& s) {
            const TmCoefficients c = tm_coefficients(s.alpha, s.eta, s.theta, g, n, conv);
            const Weights w{s.w1, s.w2};
            return TheoryValue{bias_tm(c, w), mse_tm(c, w)};
          },
      },
      spec);
}

namespace {

double free_alpha(const GammaTriple& g, MomentConvention conv) {
  const RelativeMoments e = relative_moments(g, 1, conv);
  return e.e01 / e.e11;
}

}  // namespace

MemberTheory member_theory(MemberId id, const GammaTriple& g, std::int64_t n,
                           MomentConvention conv) {
  const ResolvedMember rm = resolve_named_member(id, moments_from_gammas(g));
  General spec = rm.spec;
  if (rm.alpha_free) spec.alpha = free_alpha(g, conv);
  const TmCoefficients c = tm_coefficients(spec.alpha, spec.eta, spec.theta, g, n, conv);
  if (rm.w1_free) spec.w1 = optimum_w1_only(c);
  const Weights w{spec.w1, spec.w2};
  return {rm, spec, bias_tm(c, w), mse_tm(c, w)};
}

TmOptimum best_tm_optimum(const GammaTriple& g, std::int64_t n, MomentConvention conv) {
  const PopulationMoments pop = moments_from_gammas(g);
  std::optional<TmOptimum> best;
  for (MemberId id : kAllMembers) {
    const ResolvedMember rm = resolve_named_member(id, pop);
    const double alpha = rm.alpha_free ? free_alpha(g, conv) : rm.spec.alpha;
    const TmCoefficients c = tm_coefficients(alpha, rm.spec.eta, rm.spec.theta, g, n, conv);
    const double value = min_mse_tm(c);
    if (!best || value < best->min_mse) best = TmOptimum{id, c, optimum_weights(c), value};
  }
  return *best;
}

const TheoryRow& TheoryReport::row(std::string_view key) const {
  for (const auto& r : rows) {
    if (r.key == key) return r;
  }
  throw ValidationError("no theory row '" + std::string(key) + "'");
}

TheoryReport pre_table(const GammaTriple& g, std::int64_t n, MomentConvention conv) {
  TheoryReport report;
  report.convention = conv;
  const bool published = is_published_input(g, n);
  report.base_variance = var_base(g, n, conv);

  auto add = [&](std::string key, const EstimatorSpec& spec, TheoryValue tv, std::string note) {
    TheoryRow row{key, describe(spec), tv.bias, tv.mse, 100.0 * report.base_variance / tv.mse,
                  published ? published_pre(key) : std::nullopt, std::move(note)};
    if (row.printed_pre && std::abs(row.pre - *row.printed_pre) > 0.005) {
      if (!row.note.empty()) row.note += "; ";
      row.note += "published PRE " + fmt(*row.printed_pre) + " not reproduced";
    }
    report.rows.push_back(std::move(row));
  };

  add("ybar", MeanOnly{}, theory_of(MeanOnly{}, g, n, conv), "");
  add("t_r", Ratio{}, theory_of(Ratio{}, g, n, conv), "exponential class at alpha = 2");
  add("t_k1", ExpRatio{}, theory_of(ExpRatio{}, g, n, conv), "");
  add("t_k2", ExpProduct{}, theory_of(ExpProduct{}, g, n, conv),
      "bias from the exponential-class form at alpha = -1; published bias (gamma1 + 5 gamma3) "
      "Ybar/(8n) = " + fmt(bias_exp_product_as_printed(g, n, conv)) + " disagrees");
  const ExpAlpha tp{optimum_alpha(g, conv)};
  add("t_p", tp, theory_of(tp, g, n, conv), "alpha* = " + fmt(tp.alpha));
  const Difference tr{optimum_b(g, conv)};
  add("t_R", tr, theory_of(tr, g, n, conv), "b* = " + fmt(tr.b));

  const TmOptimum best = best_tm_optimum(g, n, conv);
  report.tm_min_mse = best.min_mse;
  const General tm{best.weights.w1, best.weights.w2, best.coefficients.alpha,
                   best.coefficients.eta, best.coefficients.theta};
  add("t_m", tm, TheoryValue{bias_tm(best.coefficients, best.weights), best.min_mse},
      "jointly optimal (w1, w2) on the shape of member " + std::string(to_string(best.shape)));

  for (MemberId id : kAllMembers) {
    const MemberTheory mt = member_theory(id, g, n, conv);
    std::string note;
    if (mt.member.w1_free) note = "w1 optimised with w2 = 0";
    if (mt.member.alpha_free) note += std::string(note.empty() ? "" : "; ") + "alpha optimised";
    add("t_m[" + std::string(to_string(id)) + "]", mt.spec, TheoryValue{mt.bias, mt.mse}, note);
  }

  report.efficiency = efficiency_report(g, n, conv);
  report.tm_min_mse_as_printed = min_mse_tm_as_printed(g, n);
  if (report.tm_min_mse_as_printed) {
    report.annotations.push_back(
        "published closed-form t_m minimum MSE = " + fmt(*report.tm_min_mse_as_printed) +
        " vs re-derived delta^2 [1 - delta^2 B/(AB - C^2)] = " + fmt(report.tm_min_mse) +
        " (discrepancy " + fmt(*report.tm_min_mse_as_printed - report.tm_min_mse) + ")");
  } else {
    report.annotations.push_back(
        "published closed-form t_m minimum MSE not comparable (Ybar = Xbar makes it singular)");
  }
  if (published) {
    report.annotations.push_back(
        "published PRE column (100.00, 100.00, 103.25, 72.31, 106.73, 106.73, 9937.42) is shown "
        "for reference; it does not follow from the stated rates");
  }
  report.annotations.push_back(std::string("moment convention: ") + std::string(to_string(conv)));
  return report;
}

}  // namespace poisest
