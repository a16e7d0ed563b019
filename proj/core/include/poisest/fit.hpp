#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "poisest/model.hpp"
#include "poisest/synth.hpp"

namespace poisest {

struct FitResult {
  GammaTriple gammas;
  SampleStats stats;
  std::vector<std::string> warnings;
};

/// Method of moments: gamma3 = sxy, gamma1 = xbar - sxy, gamma2 = ybar - sxy.
///
/// When the moments admit no non-negative triple, throws InfeasibleError
/// unless `clamp` is set; then gamma3 is clamped into [0, min(xbar, ybar)]
/// (which pins the offending component to 0 and keeps both means) and a
/// warning is recorded. Throws InsufficientDataError when n < 2.
FitResult fit_gammas(const Sample& s, bool clamp = false);

struct GofBin {
  std::int64_t lo;
  std::optional<std::int64_t> hi;  // nullopt: open upper tail
  std::int64_t observed;
  double expected;
};

struct GofReport {
  std::int64_t n;
  double lambda_hat;
  double chi2;
  int df;
  double pvalue;
  std::vector<GofBin> bins;
  bool degenerate = false;
};

/// Pearson chi-square test of a Poisson law with lambda estimated by the
/// sample mean. Cells start as single values 0, 1, 2, ... with an open
/// upper tail; tails are merged inward, then any remaining interior cell,
/// until every expected count is >= 5. df = cells - 2, floored at 1.
/// Throws ValidationError for fewer than 10 values or a negative value.
GofReport poisson_gof(std::span<const std::int64_t> values);

/// sum (observed - expected)^2 / expected.
double pearson_chi2(std::span<const GofBin> bins);

/// Upper tail P(X > x) for X ~ chi-square(df), i.e. Q(df/2, x/2).
double chi_square_sf(double x, int df);

}  // namespace poisest
