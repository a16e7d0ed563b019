#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "poisest/model.hpp"
#include "poisest/rng.hpp"

namespace poisest {

struct CountPair {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend bool operator==(const CountPair&, const CountPair&) = default;
  friend auto operator<=>(const CountPair&, const CountPair&) = default;
};

/// Non-empty ordered sequence of (x, y) count pairs.
class Sample {
 public:
  /// Throws ValidationError if `pairs` is empty or holds a negative count.
  explicit Sample(std::vector<CountPair> pairs);

  std::span<const CountPair> pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }

  friend bool operator==(const Sample&, const Sample&) = default;

 private:
  std::vector<CountPair> pairs_;
};

struct SampleMeans {
  double xbar = 0.0;
  double ybar = 0.0;
};

/// Means are always present. The second moments (divisor n - 1) exist only
/// when n >= 2.
struct SampleStats {
  std::int64_t n = 0;
  double xbar = 0.0;
  double ybar = 0.0;
  std::optional<double> s2x;
  std::optional<double> s2y;
  std::optional<double> sxy;

  SampleMeans means() const noexcept { return {xbar, ybar}; }
  bool has_second_moments() const noexcept { return sxy.has_value(); }
  /// Throws InsufficientDataError when n < 2.
  void require_second_moments() const;
};

/// Exact Poisson(lambda) variate generator with its constants precomputed.
///
/// lambda < 10 uses inversion: one uniform is located in a CDF table built
/// once by the pmf recurrence p(k) = p(k-1) lambda / k, starting from a guide
/// table entry (Chen & Asau) so the search takes O(1) steps on average. lambda >= 10 uses Hormann's transformed rejection with squeeze
/// (PTRS, 1993), which is exact: every accepted k satisfies the full
/// log-pmf test unless it lies inside the proven squeeze region.
class PoissonSampler {
 public:
  /// Throws ValidationError for negative or non-finite lambda.
  explicit PoissonSampler(double lambda);

  std::int64_t operator()(Stream& stream) const;

  double lambda() const noexcept { return lambda_; }

 private:
  std::int64_t inversion(Stream& stream) const;
  std::int64_t ptrs(Stream& stream) const;

  double lambda_;
  std::vector<double> cdf_;
  std::vector<std::uint32_t> guide_;
  double log_lambda_ = 0.0;
  double b_ = 0.0;
  double a_ = 0.0;
  double inv_alpha_ = 0.0;
  double v_r_ = 0.0;
};

std::int64_t poisson_draw(double lambda, Stream& stream);

/// Draws n i.i.d. pairs (k + z, w + z). Unit i uses the stream
/// derive_stream(seed.master_seed, i) and draws k, w, z in that order.
Sample draw_bivariate_sample(const GammaTriple& g, std::int64_t n, SeedSpec seed);

/// Sample means of draw_bivariate_sample(g, n, seed) without materialising
/// the pairs. Bit-identical to sample_stats(draw_bivariate_sample(...)).
SampleMeans draw_bivariate_means(const GammaTriple& g, std::int64_t n, SeedSpec seed);

/// Finite population of N trivariate-reduction pairs. Uses the same per-unit
/// streams as draw_bivariate_sample, so the result does not depend on
/// `workers` (0 = hardware concurrency).
Sample generate_finite_population(const GammaTriple& g, std::int64_t N, SeedSpec seed,
                                  unsigned workers = 1);

/// Simple random sample without replacement; each unit is included with
/// probability n/N. Population order is preserved.
Sample srswor(const Sample& population, std::int64_t n, SeedSpec seed);

SampleStats sample_stats(const Sample& s);

}  // namespace poisest
