#include "poisest/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iterator>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "parallel.hpp"
#include "poisest/errors.hpp"

namespace poisest {

namespace {

// Below this rate inversion is cheaper than PTRS; PTRS constants are only
// validated for lambda >= 10.
constexpr double kPtrsThreshold = 10.0;

// The CDF table stops once it has converged in double precision. A uniform
// above its last entry (mass below 1e-16) is redrawn.
constexpr std::size_t kMaxTable = 256;

struct UnitDraw {
  std::int64_t x;
  std::int64_t y;
};

class TrivariateDrawer {
 public:
  explicit TrivariateDrawer(const GammaTriple& g)
      : k_(g.gamma1()), w_(g.gamma2()), z_(g.gamma3()) {}

  UnitDraw operator()(std::uint64_t seed, std::uint64_t index) const {
    Stream stream = derive_stream(seed, index);
    const std::int64_t k = k_(stream);
    const std::int64_t w = w_(stream);
    const std::int64_t z = z_(stream);
    return {k + z, w + z};
  }

 private:
  PoissonSampler k_;
  PoissonSampler w_;
  PoissonSampler z_;
};

// log(k!) for the PTRS acceptance test; small k come from a table.
double log_factorial(double k) {
  static const std::array<double, 1024> table = [] {
    std::array<double, 1024> t{};
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = boost::math::lgamma(static_cast<double>(i) + 1.0);
    return t;
  }();
  if (k < static_cast<double>(table.size())) return table[static_cast<std::size_t>(k)];
  return boost::math::lgamma(k + 1.0);
}

void require_size(std::int64_t n, const char* name) {
  if (n < 1) throw ValidationError(std::string(name) + " must be >= 1, got " + std::to_string(n));
}

}  // namespace

Sample::Sample(std::vector<CountPair> pairs) : pairs_(std::move(pairs)) {
  if (pairs_.empty()) throw ValidationError("a sample needs at least one pair");
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    if (pairs_[i].x < 0 || pairs_[i].y < 0) {
      throw ValidationError("negative count at index " + std::to_string(i));
    }
  }
}

void SampleStats::require_second_moments() const {
  if (!has_second_moments()) {
    throw InsufficientDataError("insufficient data: variances and covariance need n >= 2, got n = " +
                                std::to_string(n));
  }
}

PoissonSampler::PoissonSampler(double lambda) : lambda_(lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw ValidationError("Poisson rate must be finite and >= 0, got " + std::to_string(lambda));
  }
  if (lambda == 0.0) return;
  if (lambda < kPtrsThreshold) {
    double p = std::exp(-lambda);
    double cdf = p;
    cdf_.push_back(cdf);
    for (std::size_t k = 1; k < kMaxTable; ++k) {
      p *= lambda / static_cast<double>(k);
      const double next = cdf + p;
      if (next == cdf) break;
      cdf = next;
      cdf_.push_back(cdf);
    }
    // guide_[j] = first k with cdf_[k] >= j / size, so the answer for u lies
    // at or after guide_[floor(u size)].
    guide_.resize(cdf_.size());
    std::size_t k = 0;
    for (std::size_t j = 0; j < guide_.size(); ++j) {
      const double level = static_cast<double>(j) / static_cast<double>(guide_.size());
      while (k + 1 < cdf_.size() && cdf_[k] < level) ++k;
      guide_[j] = static_cast<std::uint32_t>(k);
    }
  } else {
    log_lambda_ = std::log(lambda);
    b_ = 0.931 + 2.53 * std::sqrt(lambda);
    a_ = -0.059 + 0.02483 * b_;
    inv_alpha_ = 1.1239 + 1.1328 / (b_ - 3.4);
    v_r_ = 0.9277 - 3.6224 / (b_ - 2.0);
  }
}

std::int64_t PoissonSampler::operator()(Stream& stream) const {
  if (lambda_ == 0.0) return 0;
  return lambda_ < kPtrsThreshold ? inversion(stream) : ptrs(stream);
}

std::int64_t PoissonSampler::inversion(Stream& stream) const {
  for (;;) {
    const double u = stream.uniform01();
    std::size_t x = guide_[static_cast<std::size_t>(u * static_cast<double>(guide_.size()))];
    while (x < cdf_.size() && u > cdf_[x]) ++x;
    if (x < cdf_.size()) return static_cast<std::int64_t>(x);
  }
}

std::int64_t PoissonSampler::ptrs(Stream& stream) const {
  for (;;) {
    const double u = stream.uniform01() - 0.5;
    const double v = stream.uniform01();
    const double us = 0.5 - std::abs(u);
    const double kd = std::floor((2.0 * a_ / us + b_) * u + lambda_ + 0.43);
    if (us >= 0.07 && v <= v_r_) return static_cast<std::int64_t>(kd);
    if (kd < 0.0 || (us < 0.013 && v > us)) continue;
    const double lhs = std::log(v * inv_alpha_ / (a_ / (us * us) + b_));
    const double rhs = -lambda_ + kd * log_lambda_ - log_factorial(kd);
    if (lhs <= rhs) return static_cast<std::int64_t>(kd);
  }
}

std::int64_t poisson_draw(double lambda, Stream& stream) {
  return PoissonSampler(lambda)(stream);
}

Sample draw_bivariate_sample(const GammaTriple& g, std::int64_t n, SeedSpec seed) {
  require_size(n, "sample size n");
  const TrivariateDrawer draw(g);
  std::vector<CountPair> pairs(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const UnitDraw d = draw(seed.master_seed, i);
    pairs[i] = {d.x, d.y};
  }
  return Sample(std::move(pairs));
}

SampleMeans draw_bivariate_means(const GammaTriple& g, std::int64_t n, SeedSpec seed) {
  require_size(n, "sample size n");
  const TrivariateDrawer draw(g);
  std::int64_t sx = 0;
  std::int64_t sy = 0;
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(n); ++i) {
    const UnitDraw d = draw(seed.master_seed, i);
    sx += d.x;
    sy += d.y;
  }
  const double nn = static_cast<double>(n);
  return {static_cast<double>(sx) / nn, static_cast<double>(sy) / nn};
}

Sample generate_finite_population(const GammaTriple& g, std::int64_t N, SeedSpec seed,
                                  unsigned workers) {
  require_size(N, "population size N");
  const TrivariateDrawer draw(g);
  std::vector<CountPair> pairs(static_cast<std::size_t>(N));
  detail::parallel_chunks(pairs.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const UnitDraw d = draw(seed.master_seed, i);
      pairs[i] = {d.x, d.y};
    }
  });
  return Sample(std::move(pairs));
}

Sample srswor(const Sample& population, std::int64_t n, SeedSpec seed) {
  require_size(n, "sample size n");
  const auto N = static_cast<std::int64_t>(population.size());
  if (n > N) {
    throw ValidationError("sample size n = " + std::to_string(n) +
                          " exceeds population size N = " + std::to_string(N));
  }
  Stream stream = derive_stream(seed.master_seed, 0);
  std::vector<CountPair> chosen;
  chosen.reserve(static_cast<std::size_t>(n));
  std::ranges::sample(population.pairs(), std::back_inserter(chosen), n, stream);
  return Sample(std::move(chosen));
}

SampleStats sample_stats(const Sample& s) {
  SampleStats st;
  st.n = static_cast<std::int64_t>(s.size());
  std::int64_t sx = 0;
  std::int64_t sy = 0;
  for (const auto& p : s.pairs()) {
    sx += p.x;
    sy += p.y;
  }
  const double nn = static_cast<double>(st.n);
  st.xbar = static_cast<double>(sx) / nn;
  st.ybar = static_cast<double>(sy) / nn;
  if (st.n >= 2) {
    double cxx = 0.0;
    double cyy = 0.0;
    double cxy = 0.0;
    for (const auto& p : s.pairs()) {
      const double dx = static_cast<double>(p.x) - st.xbar;
      const double dy = static_cast<double>(p.y) - st.ybar;
      cxx += dx * dx;
      cyy += dy * dy;
      cxy += dx * dy;
    }
    st.s2x = cxx / (nn - 1.0);
    st.s2y = cyy / (nn - 1.0);
    st.sxy = cxy / (nn - 1.0);
  }
  return st;
}

}  // namespace poisest
