#pragma once

#include <cstdint>
#include <string_view>

namespace poisest {

/// Rates of the three independent latent Poisson components of the
/// trivariate-reduction model: x = k + z, y = w + z with k ~ P(gamma1),
/// w ~ P(gamma2) and z ~ P(gamma3).
///
/// Construction validates the invariants (finite, non-negative, both
/// marginals non-degenerate) and throws ValidationError otherwise.
class GammaTriple {
 public:
  GammaTriple(double gamma1, double gamma2, double gamma3);

  double gamma1() const noexcept { return gamma1_; }
  double gamma2() const noexcept { return gamma2_; }
  double gamma3() const noexcept { return gamma3_; }

  friend bool operator==(const GammaTriple&, const GammaTriple&) = default;

 private:
  double gamma1_;
  double gamma2_;
  double gamma3_;
};

/// Population quantities implied by a GammaTriple. x is the auxiliary
/// variable, y the study variable.
struct PopulationMoments {
  double lambda1;  // E(x) = Var(x)
  double lambda2;  // E(y) = Var(y)
  double xbar;
  double ybar;
  double cov_xy;
  double rho;
  double cx;
  double cy;
  double skew_x;
  double kurt_x;
};

/// Which set of relative moments E(e0^2), E(e1^2), E(e0 e1) drives the
/// closed-form theory.
///
/// AsPrinted uses the published values lambda2/n, lambda1/n, gamma3/n and
/// reproduces every published bias/MSE expression literally. Corrected uses
/// the moments that actually follow from e0 = (ybar - Ybar)/Ybar for i.i.d.
/// Poisson pairs: 1/(n lambda2), 1/(n lambda1), gamma3/(n lambda1 lambda2).
enum class MomentConvention { AsPrinted, Corrected };

std::string_view to_string(MomentConvention conv) noexcept;

/// Parses "as-printed" or "corrected"; throws ValidationError otherwise.
MomentConvention parse_convention(std::string_view text);

struct RelativeMoments {
  double e00;  // E(e0^2)
  double e11;  // E(e1^2)
  double e01;  // E(e0 e1)
  std::int64_t n;
};

PopulationMoments moments_from_gammas(const GammaTriple& g);

/// Inverts the moment map: (lambda1 - cov, lambda2 - cov, cov).
/// Throws InfeasibleError when cov is outside [0, min(lambda1, lambda2)].
GammaTriple gammas_from_moments(double lambda1, double lambda2, double cov);

RelativeMoments relative_moments(const GammaTriple& g, std::int64_t n, MomentConvention conv);

}  // namespace poisest
