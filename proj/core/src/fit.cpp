#include "poisest/fit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "poisest/errors.hpp"

namespace poisest {

namespace {

constexpr double kMinExpected = 5.0;
constexpr std::size_t kMinGofValues = 10;

void merge_into(std::vector<GofBin>& bins, std::size_t from, std::size_t into) {
  GofBin& dst = bins[into];
  const GofBin& src = bins[from];
  dst.lo = std::min(dst.lo, src.lo);
  if (!dst.hi || !src.hi) {
    dst.hi.reset();
  } else {
    dst.hi = std::max(*dst.hi, *src.hi);
  }
  dst.observed += src.observed;
  dst.expected += src.expected;
  bins.erase(bins.begin() + static_cast<std::ptrdiff_t>(from));
}

}  // namespace

FitResult fit_gammas(const Sample& s, bool clamp) {
  SampleStats st = sample_stats(s);
  st.require_second_moments();
  std::vector<std::string> warnings;

  double g3 = *st.sxy;
  double g1 = st.xbar - g3;
  double g2 = st.ybar - g3;
  if (g1 < 0.0 || g2 < 0.0 || g3 < 0.0) {
    const std::string what = "sample moments (xbar = " + std::to_string(st.xbar) +
                             ", ybar = " + std::to_string(st.ybar) +
                             ", sxy = " + std::to_string(*st.sxy) + ") give gamma1 = " +
                             std::to_string(g1) + ", gamma2 = " + std::to_string(g2) +
                             ", gamma3 = " + std::to_string(g3);
    if (!clamp) throw InfeasibleError("infeasible moments: " + what);
    g3 = std::clamp(g3, 0.0, std::min(st.xbar, st.ybar));
    g1 = st.xbar - g3;
    g2 = st.ybar - g3;
    warnings.push_back("clamped " + what + " to (" + std::to_string(g1) + ", " +
                       std::to_string(g2) + ", " + std::to_string(g3) + ")");
  }
  return {GammaTriple(g1, g2, g3), st, std::move(warnings)};
}

double pearson_chi2(std::span<const GofBin> bins) {
  double chi2 = 0.0;
  for (const auto& b : bins) {
    const double d = static_cast<double>(b.observed) - b.expected;
    chi2 += d * d / b.expected;
  }
  return chi2;
}

double chi_square_sf(double x, int df) {
  if (df < 1) throw ValidationError("chi-square degrees of freedom must be >= 1");
  if (std::isnan(x) || x < 0.0) throw ValidationError("chi-square statistic must be >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

GofReport poisson_gof(std::span<const std::int64_t> values) {
  if (values.size() < kMinGofValues) {
    throw ValidationError("goodness-of-fit needs at least 10 observations, got " +
                          std::to_string(values.size()));
  }
  std::int64_t total = 0;
  std::int64_t max_value = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0) throw ValidationError("negative count at index " + std::to_string(i));
    total += values[i];
    max_value = std::max(max_value, values[i]);
  }
  GofReport r{};
  r.n = static_cast<std::int64_t>(values.size());
  const double nn = static_cast<double>(r.n);
  r.lambda_hat = static_cast<double>(total) / nn;

  if (r.lambda_hat == 0.0) {
    r.bins = {GofBin{0, std::nullopt, r.n, nn}};
    r.chi2 = 0.0;
    r.df = 1;
    r.pvalue = 1.0;
    r.degenerate = true;
    return r;
  }

  const boost::math::poisson_distribution<double> law(r.lambda_hat);
  const auto top = std::max<std::int64_t>(
      max_value, static_cast<std::int64_t>(std::ceil(r.lambda_hat + 10.0 * std::sqrt(r.lambda_hat) + 10.0)));
  std::vector<GofBin> bins;
  bins.reserve(static_cast<std::size_t>(top) + 1);
  for (std::int64_t k = 0; k < top; ++k) {
    bins.push_back({k, k, 0, nn * boost::math::pdf(law, static_cast<double>(k))});
  }
  bins.push_back({top, std::nullopt, 0,
                  nn * boost::math::cdf(boost::math::complement(law, static_cast<double>(top - 1)))});
  for (std::int64_t v : values) {
    bins[static_cast<std::size_t>(std::min(v, top))].observed += 1;
  }

  while (bins.size() > 1 && bins.front().expected < kMinExpected) merge_into(bins, 0, 1);
  while (bins.size() > 1 && bins.back().expected < kMinExpected) {
    merge_into(bins, bins.size() - 1, bins.size() - 2);
  }
  for (;;) {
    auto it = std::find_if(bins.begin(), bins.end(),
                           [](const GofBin& b) { return b.expected < kMinExpected; });
    if (it == bins.end() || bins.size() == 1) break;
    const auto i = static_cast<std::size_t>(it - bins.begin());
    const bool use_right =
        i == 0 || (i + 1 < bins.size() && bins[i + 1].expected < bins[i - 1].expected);
    merge_into(bins, i, use_right ? i + 1 : i - 1);
  }

  r.bins = std::move(bins);
  r.chi2 = pearson_chi2(r.bins);
  r.df = std::max(1, static_cast<int>(r.bins.size()) - 2);
  r.pvalue = chi_square_sf(r.chi2, r.df);
  return r;
}

}  // namespace poisest
