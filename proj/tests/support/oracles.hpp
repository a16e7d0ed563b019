#pragma once

// Test-only reference computations. Nothing here calls into poisest; the
// published closed forms are re-typed and evaluated in 50-digit decimal
// arithmetic so that agreement with the library is a genuine cross-check.

#include <cmath>
#include <cstdint>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

namespace oracle {

using hp = boost::multiprecision::cpp_dec_float_50;

struct Rates {
  hp g1, g2, g3, n;
  hp l1() const { return g1 + g3; }
  hp l2() const { return g2 + g3; }
};

inline Rates rates(double g1, double g2, double g3, std::int64_t n) {
  return {hp(g1), hp(g2), hp(g3), hp(n)};
}

inline double rel_err(double got, const hp& want) {
  const hp diff = abs(hp(got) - want);
  return static_cast<double>(diff / abs(want));
}

// Printed closed forms (as-printed moments).
inline hp mse_ratio(const Rates& r) { return r.l2() * r.l2() * (r.g1 + r.g2) / r.n; }
inline hp bias_ratio(const Rates& r) { return r.l2() * r.g1 / r.n; }
inline hp mse_exp_ratio(const Rates& r) { return r.l2() * r.l2() * (r.g1 + 4 * r.g2 + r.g3) / (4 * r.n); }
inline hp bias_exp_ratio(const Rates& r) { return r.l2() * (3 * r.g1 - r.g3) / (8 * r.n); }
inline hp mse_exp_product(const Rates& r) { return r.l2() * r.l2() * (r.g1 + 4 * r.g2 + 9 * r.g3) / (4 * r.n); }
inline hp bias_exp_product_printed(const Rates& r) { return r.l2() * (r.g1 + 5 * r.g3) / (8 * r.n); }
inline hp optimum_alpha(const Rates& r) { return 2 * r.g3 / (r.g1 + r.g3); }
inline hp min_mse_exp(const Rates& r) {
  return r.l2() * r.l2() / r.n * (r.g2 + r.g3 * (1 - r.g3 / (r.g1 + r.g3)));
}
inline hp optimum_b(const Rates& r) { return r.l2() / r.l1() * r.g3 / (r.g1 + r.g3); }
inline hp min_mse_difference(const Rates& r) { return min_mse_exp(r); }
inline hp var_ybar(const Rates& r) { return r.l2() * r.l2() * r.l2() / r.n; }

/// Upper tail of chi-square(df) by exp-sinh quadrature of the density over
/// [x, inf); independent of any incomplete-gamma routine.
inline double chi_square_sf_quadrature(double x, int df) {
  const double k = 0.5 * df;
  const double log_norm = k * std::log(2.0) + std::lgamma(k);
  auto density = [&](double t) {
    return std::exp((k - 1.0) * std::log(t) - 0.5 * t - log_norm);
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate([&](double u) { return density(x + u); }, 0.0,
                              std::numeric_limits<double>::infinity(), 1e-14);
}

}  // namespace oracle
