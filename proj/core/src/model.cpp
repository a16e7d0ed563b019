#include "poisest/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "poisest/errors.hpp"

namespace poisest {

namespace {

void require_rate(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0) {
    throw ValidationError(std::string(name) + " must be finite and >= 0, got " +
                          std::to_string(value));
  }
}

}  // namespace

GammaTriple::GammaTriple(double gamma1, double gamma2, double gamma3)
    : gamma1_(gamma1), gamma2_(gamma2), gamma3_(gamma3) {
  require_rate(gamma1, "gamma1");
  require_rate(gamma2, "gamma2");
  require_rate(gamma3, "gamma3");
  if (!(gamma1 + gamma3 > 0.0)) {
    throw ValidationError("gamma1 + gamma3 must be > 0 (auxiliary marginal is degenerate)");
  }
  if (!(gamma2 + gamma3 > 0.0)) {
    throw ValidationError("gamma2 + gamma3 must be > 0 (study marginal is degenerate)");
  }
}

std::string_view to_string(MomentConvention conv) noexcept {
  return conv == MomentConvention::AsPrinted ? "as-printed" : "corrected";
}

MomentConvention parse_convention(std::string_view text) {
  if (text == "as-printed") return MomentConvention::AsPrinted;
  if (text == "corrected") return MomentConvention::Corrected;
  throw ValidationError("unknown convention '" + std::string(text) +
                        "' (expected as-printed or corrected)");
}

PopulationMoments moments_from_gammas(const GammaTriple& g) {
  PopulationMoments m{};
  m.lambda1 = g.gamma1() + g.gamma3();
  m.lambda2 = g.gamma2() + g.gamma3();
  m.xbar = m.lambda1;
  m.ybar = m.lambda2;
  m.cov_xy = g.gamma3();
  m.rho = m.cov_xy / std::sqrt(m.lambda1 * m.lambda2);
  m.cx = 1.0 / std::sqrt(m.lambda1);
  m.cy = 1.0 / std::sqrt(m.lambda2);
  m.skew_x = 1.0 / std::sqrt(m.lambda1);
  m.kurt_x = 3.0 + 1.0 / m.lambda1;
  return m;
}

GammaTriple gammas_from_moments(double lambda1, double lambda2, double cov) {
  if (!std::isfinite(lambda1) || !(lambda1 > 0.0)) {
    throw ValidationError("lambda1 must be finite and > 0");
  }
  if (!std::isfinite(lambda2) || !(lambda2 > 0.0)) {
    throw ValidationError("lambda2 must be finite and > 0");
  }
  if (!std::isfinite(cov)) throw ValidationError("cov must be finite");
  if (cov < 0.0) {
    throw InfeasibleError("cov = " + std::to_string(cov) +
                          " violates lower bound cov >= 0 (trivariate reduction cannot "
                          "produce negative covariance)");
  }
  const double upper = std::min(lambda1, lambda2);
  if (cov > upper) {
    throw InfeasibleError("cov = " + std::to_string(cov) +
                          " violates upper bound cov <= min(lambda1, lambda2) = " +
                          std::to_string(upper));
  }
  return GammaTriple(lambda1 - cov, lambda2 - cov, cov);
}

RelativeMoments relative_moments(const GammaTriple& g, std::int64_t n, MomentConvention conv) {
  if (n < 1) throw ValidationError("sample size n must be >= 1");
  const double nn = static_cast<double>(n);
  const double l1 = g.gamma1() + g.gamma3();
  const double l2 = g.gamma2() + g.gamma3();
  if (conv == MomentConvention::AsPrinted) {
    return {l2 / nn, l1 / nn, g.gamma3() / nn, n};
  }
  return {1.0 / (nn * l2), 1.0 / (nn * l1), g.gamma3() / (nn * l1 * l2), n};
}

}  // namespace poisest
