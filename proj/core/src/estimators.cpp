#include "poisest/estimators.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "poisest/errors.hpp"

namespace poisest {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw ValidationError(std::string("estimator parameter ") + name + " must be finite");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

double exp_term(double scale, double xbar_pop, double xbar) {
  if (xbar == 0.0) {
    throw SingularDenominatorError("singular denominator: exp(alpha (Xbar - xbar) / (Xbar + xbar)) with xbar = 0");
  }
  return std::exp(scale * (xbar_pop - xbar) / (xbar_pop + xbar));
}

double evaluate_general(const General& g, SampleMeans m, double xbar_pop) {
  double power = 1.0;
  if (g.alpha != 0.0) {
    if (m.xbar == 0.0) {
      throw SingularDenominatorError("singular denominator: (Xbar/xbar)^alpha with xbar = 0");
    }
    power = std::pow(xbar_pop / m.xbar, g.alpha);
  }
  const double denom = g.eta * (xbar_pop + m.xbar) + 2.0 * g.theta;
  if (denom == 0.0) {
    throw SingularDenominatorError("singular denominator: eta (Xbar + xbar) + 2 theta = 0");
  }
  const double expo = std::exp(g.eta * (xbar_pop - m.xbar) / denom);
  return g.w1 * m.ybar * power * expo + g.w2 * m.xbar + (1.0 - g.w1 - g.w2) * xbar_pop;
}

}  // namespace

void validate(const EstimatorSpec& spec) {
  std::visit(Overloaded{
                 [](const ExpAlpha& e) { require_finite(e.alpha, "alpha"); },
                 [](const Difference& d) { require_finite(d.b, "b"); },
                 [](const General& g) {
                   require_finite(g.w1, "w1");
                   require_finite(g.w2, "w2");
                   require_finite(g.alpha, "alpha");
                   require_finite(g.eta, "eta");
                   require_finite(g.theta, "theta");
                 },
                 [](const auto&) {},
             },
             spec);
}

std::string_view family_name(const EstimatorSpec& spec) noexcept {
  return std::visit(Overloaded{
                        [](const MeanOnly&) -> std::string_view { return "mean"; },
                        [](const Ratio&) -> std::string_view { return "ratio"; },
                        [](const Product&) -> std::string_view { return "product"; },
                        [](const ExpRatio&) -> std::string_view { return "exp-ratio"; },
                        [](const ExpProduct&) -> std::string_view { return "exp-product"; },
                        [](const ExpAlpha&) -> std::string_view { return "exp-alpha"; },
                        [](const Difference&) -> std::string_view { return "difference"; },
                        [](const General&) -> std::string_view { return "general"; },
                    },
                    spec);
}

std::string describe(const EstimatorSpec& spec) {
  return std::visit(Overloaded{
                        [](const ExpAlpha& e) { return "exp-alpha(alpha=" + fmt(e.alpha) + ")"; },
                        [](const Difference& d) { return "difference(b=" + fmt(d.b) + ")"; },
                        [](const General& g) {
                          return "general(w1=" + fmt(g.w1) + ", w2=" + fmt(g.w2) +
                                 ", alpha=" + fmt(g.alpha) + ", eta=" + fmt(g.eta) +
                                 ", theta=" + fmt(g.theta) + ")";
                        },
                        [&spec](const auto&) { return std::string(family_name(spec)); },
                    },
                    spec);
}

double evaluate(const EstimatorSpec& spec, SampleMeans m, double xbar_pop) {
  if (!std::isfinite(xbar_pop) || !(xbar_pop > 0.0)) {
    throw ValidationError("population auxiliary mean Xbar must be finite and > 0");
  }
  return std::visit(
      Overloaded{
          [&](const MeanOnly&) { return m.ybar; },
          [&](const Ratio&) {
            if (m.xbar == 0.0) throw SingularDenominatorError("singular denominator: Xbar/xbar with xbar = 0");
            return m.ybar * (xbar_pop / m.xbar);
          },
          [&](const Product&) { return m.ybar * m.xbar / xbar_pop; },
          [&](const ExpRatio&) { return m.ybar * exp_term(1.0, xbar_pop, m.xbar); },
          [&](const ExpProduct&) { return m.ybar * exp_term(-1.0, xbar_pop, m.xbar); },
          [&](const ExpAlpha& e) {
            if (e.alpha == 0.0) return m.ybar;
            return m.ybar * exp_term(e.alpha, xbar_pop, m.xbar);
          },
          [&](const Difference& d) { return m.ybar + d.b * (xbar_pop - m.xbar); },
          [&](const General& g) { return evaluate_general(g, m, xbar_pop); },
      },
      spec);
}

double evaluate(const EstimatorSpec& spec, const SampleStats& stats, double xbar_pop) {
  if (stats.n < 1) throw ValidationError("sample statistics need n >= 1");
  return evaluate(spec, stats.means(), xbar_pop);
}

std::string_view to_string(MemberId id) noexcept {
  static constexpr std::array<std::string_view, 16> names = {
      "m1", "m2", "m3", "m4", "m5", "m6", "m7", "q1",
      "q2", "q3", "q4", "q5", "q6", "q7", "q8", "q9"};
  return names[static_cast<std::size_t>(id)];
}

MemberId parse_member(std::string_view text) {
  for (MemberId id : kAllMembers) {
    if (to_string(id) == text) return id;
  }
  throw ValidationError("unknown member id '" + std::string(text) + "' (expected m1..m7 or q1..q9)");
}

ResolvedMember resolve_named_member(MemberId id, const PopulationMoments& pop) {
  const double rho = pop.rho;
  const double xbar = pop.xbar;
  // {w1_free, w1, alpha_free, alpha, eta, theta}
  auto make = [id](bool w1_free, double w1, bool alpha_free, double alpha, double eta,
                   double theta) {
    return ResolvedMember{id, General{w1, 0.0, alpha, eta, theta}, w1_free, alpha_free};
  };
  switch (id) {
    case MemberId::m1: return make(false, 1.0, false, 0.0, 0.0, 1.0);
    case MemberId::m2: return make(false, 1.0, false, 1.0, 0.0, 1.0);
    case MemberId::m3: return make(false, 1.0, true, 1.0, 0.0, 1.0);
    case MemberId::m4: return make(false, 1.0, false, -1.0, 0.0, 1.0);
    // The m5 row prints w1 = 1 but its estimator carries a free w1.
    case MemberId::m5: return make(true, 1.0, false, 1.0, 0.0, 1.0);
    case MemberId::m6: return make(true, 1.0, false, -1.0, 0.0, 1.0);
    case MemberId::m7: return make(true, 1.0, false, 0.0, 0.0, 1.0);
    case MemberId::q1: return make(true, 1.0, false, 1.0, 1.0, 1.0);
    case MemberId::q2: return make(true, 1.0, false, 1.0, 1.0, rho);
    case MemberId::q3: return make(true, 1.0, false, 1.0, 1.0, xbar);
    case MemberId::q4: return make(true, 1.0, false, 1.0, 1.0, 0.0);
    case MemberId::q5: return make(true, 1.0, false, -1.0, 1.0, 1.0);
    case MemberId::q6: return make(true, 1.0, false, 1.0, xbar, rho);
    case MemberId::q7: return make(true, 1.0, false, 0.0, xbar, rho);
    case MemberId::q8: return make(true, 1.0, false, 1.0, rho, xbar);
    case MemberId::q9: return make(true, 1.0, false, -1.0, rho, xbar);
  }
  throw ValidationError("unknown member id");
}

}  // namespace poisest
