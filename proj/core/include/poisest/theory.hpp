#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "poisest/estimators.hpp"
#include "poisest/model.hpp"

namespace poisest {

// First-order (O(1/n)) bias and MSE expressions. Every estimator-specific
// result is obtained by evaluating one of four parametric forms with the
// relative moments of the selected MomentConvention:
//
//   exponential class  Bias = Ybar [alpha(alpha+2)/8 E(e1^2) - alpha/2 E(e0e1)]
//                      MSE  = Ybar^2 [E(e0^2) + alpha^2/4 E(e1^2) - alpha E(e0e1)]
//   difference         MSE  = Ybar^2 E(e0^2) + b^2 Xbar^2 E(e1^2) - 2 b Ybar Xbar E(e0e1)
//   generalised class  MSE  = (1 - 2 w1) delta^2 + w1^2 A + w2^2 B + 2 w1 w2 C
//
// The ratio and product estimators are the exponential class at alpha = 2
// and alpha = -2.

/// Var(ybar) in the convention's units; the PRE reference.
double var_base(const GammaTriple& g, std::int64_t n, MomentConvention conv);

double bias_exp_alpha(double alpha, const GammaTriple& g, std::int64_t n, MomentConvention conv);
double mse_exp_alpha(double alpha, const GammaTriple& g, std::int64_t n, MomentConvention conv);

/// 2 E(e0e1) / E(e1^2). Independent of n.
double optimum_alpha(const GammaTriple& g, MomentConvention conv);
double min_mse_exp(const GammaTriple& g, std::int64_t n, MomentConvention conv);

/// The published bias of the exponential product estimator,
/// Ybar [E(e1^2)/8 + E(e0e1)/2]. Under AsPrinted this is
/// Ybar (gamma1 + 5 gamma3) / (8n). It differs from bias_exp_alpha(-1) in the
/// sign of the E(e1^2) term and is kept only as a comparator.
double bias_exp_product_as_printed(const GammaTriple& g, std::int64_t n, MomentConvention conv);

double mse_difference(double b, const GammaTriple& g, std::int64_t n, MomentConvention conv);
/// Ybar E(e0e1) / (Xbar E(e1^2)). Independent of n.
double optimum_b(const GammaTriple& g, MomentConvention conv);
double min_mse_difference(const GammaTriple& g, std::int64_t n, MomentConvention conv);

/// Coefficients of the generalised-class MSE quadratic in (w1, w2).
///
/// k is the linear coefficient of e1 in the exponent term. AsPrinted keeps
/// the published k = eta / (2 (eta Xbar + theta)); Corrected uses the
/// expansion's actual value k = eta Xbar / (2 (eta Xbar + theta)).
/// A and C use E(e0e1) where the expansion requires it.
struct TmCoefficients {
  MomentConvention convention;
  double alpha;
  double eta;
  double theta;
  double k;
  double a;       // alpha + k
  double d_quad;  // 3/2 k^2 + alpha k + alpha (alpha + 1) / 2
  double delta;   // Ybar - Xbar
  double A;
  double B;
  double C;
  double ybar;
  double xbar;
  RelativeMoments moments;

  double determinant() const noexcept { return A * B - C * C; }
};

struct Weights {
  double w1;
  double w2;
};

/// Throws SingularDenominatorError when eta Xbar + theta = 0.
TmCoefficients tm_coefficients(double alpha, double eta, double theta, const GammaTriple& g,
                               std::int64_t n, MomentConvention conv);

/// Stationary point of the quadratic: solves A w1 + C w2 = delta^2,
/// C w1 + B w2 = 0. Throws DegenerateFormError when AB - C^2 <= 0.
Weights optimum_weights(const TmCoefficients& c);

/// delta^2 [1 - delta^2 B / (AB - C^2)].
double min_mse_tm(const TmCoefficients& c);

/// Optimum with w2 pinned to 0: w1 = delta^2 / A.
double optimum_w1_only(const TmCoefficients& c);
double min_mse_tm_w1_only(const TmCoefficients& c);

/// The quadratic form at arbitrary (w1, w2).
double mse_tm(const TmCoefficients& c, Weights w);
/// (w1 - 1) delta + w1 Ybar (d_quad E(e1^2) - a E(e0e1)).
double bias_tm(const TmCoefficients& c, Weights w);

/// The published closed form
///   lambda2^2 (lambda1 lambda2 - gamma2^2) /
///     [lambda1 + lambda2^2 (lambda1 lambda2 - gamma2^2) / (delta^2 n)]
/// evaluated literally for side-by-side reporting. Returns nullopt when
/// delta = 0 (the expression has no finite comparator there).
std::optional<double> min_mse_tm_as_printed(const GammaTriple& g, std::int64_t n);

struct ConditionCheck {
  std::string label;
  double lhs;
  double rhs;
  bool holds;  // lhs >= rhs
  std::string note;
};

struct EfficiencyReport {
  ConditionCheck exp_vs_exp_ratio;    // (gamma1 + gamma3)^2 >= 4 gamma1 gamma3
  ConditionCheck exp_vs_exp_product;  // gamma1 + 5 gamma3 >= -4 gamma3^2 / (gamma1 + gamma3)
  ConditionCheck tm_vs_exp;           // literal published inequality, unverified
  // The same comparisons made directly on the convention's MSE values.
  std::vector<ConditionCheck> direct;
};

EfficiencyReport efficiency_report(const GammaTriple& g, std::int64_t n, MomentConvention conv);

struct TheoryValue {
  double bias;
  double mse;
};

/// First-order bias and MSE of any estimator. General specs use the
/// generalised-class quadratic with their own (w1, w2).
TheoryValue theory_of(const EstimatorSpec& spec, const GammaTriple& g, std::int64_t n,
                      MomentConvention conv);

/// A named member with its free parameters optimised under `conv`:
/// a free alpha becomes E(e0e1)/E(e1^2), a free w1 becomes delta^2 / A.
struct MemberTheory {
  ResolvedMember member;
  General spec;
  double bias;
  double mse;
};

MemberTheory member_theory(MemberId id, const GammaTriple& g, std::int64_t n,
                           MomentConvention conv);

/// The member shape (alpha, eta, theta) whose jointly optimised (w1, w2)
/// gives the smallest minimum MSE.
struct TmOptimum {
  MemberId shape;
  TmCoefficients coefficients;
  Weights weights;
  double min_mse;
};

TmOptimum best_tm_optimum(const GammaTriple& g, std::int64_t n, MomentConvention conv);

struct TheoryRow {
  std::string key;  // stable identifier: ybar, t_r, t_k1, ...
  std::string estimator;
  double bias;
  double mse;
  double pre;
  std::optional<double> printed_pre;  // only for the published rates at n = 20
  std::string note;
};

struct TheoryReport {
  MomentConvention convention;
  double base_variance;
  std::vector<TheoryRow> rows;
  EfficiencyReport efficiency;
  double tm_min_mse;
  std::optional<double> tm_min_mse_as_printed;
  std::vector<std::string> annotations;

  /// Row by key; throws ValidationError when missing.
  const TheoryRow& row(std::string_view key) const;
};

/// Rows ybar, t_r, t_k1, t_k2, t_p (alpha*), t_R (b*), t_m (jointly optimal)
/// followed by one row per named member. pre = 100 base_variance / mse.
TheoryReport pre_table(const GammaTriple& g, std::int64_t n, MomentConvention conv);

}  // namespace poisest
