#include <doctest.h>

#include <cmath>
#include <random>

#include "poisest/errors.hpp"
#include "poisest/estimators.hpp"
#include "poisest/model.hpp"

using namespace poisest;

TEST_CASE("point estimates") {
  const SampleMeans m{5.0, 10.0};
  CHECK(evaluate(Ratio{}, m, 6.0) == 12.0);
  CHECK(evaluate(Product{}, m, 4.0) == 12.5);
  CHECK(evaluate(MeanOnly{}, m, 6.0) == 10.0);
  CHECK(evaluate(Difference{2.0}, m, 6.0) == 12.0);
  CHECK(evaluate(ExpAlpha{0.0}, m, 6.0) == 10.0);
  CHECK(evaluate(ExpRatio{}, SampleMeans{6.0, 10.0}, 6.0) == 10.0);
  CHECK(evaluate(ExpProduct{}, SampleMeans{6.0, 10.0}, 6.0) == 10.0);
  CHECK(evaluate(ExpRatio{}, m, 6.0) == doctest::Approx(10.0 * std::exp(1.0 / 11.0)));
  CHECK(evaluate(ExpProduct{}, m, 6.0) == doctest::Approx(10.0 * std::exp(-1.0 / 11.0)));
  CHECK(evaluate(General{1, 0, 1, 0, 1}, m, 6.0) == evaluate(Ratio{}, m, 6.0));
  CHECK(evaluate(General{0.5, 0.25, 0, 0, 1}, m, 6.0) == doctest::Approx(5.0 + 1.25 + 1.5));

  SampleStats st;
  st.n = 4;
  st.xbar = 5.0;
  st.ybar = 10.0;
  CHECK(evaluate(Ratio{}, st, 6.0) == 12.0);
  st.n = 0;
  CHECK_THROWS_AS(evaluate(Ratio{}, st, 6.0), ValidationError);
}

TEST_CASE("singular denominators are reported") {
  const SampleMeans zero{0.0, 3.0};
  CHECK_THROWS_AS(evaluate(Ratio{}, zero, 2.0), SingularDenominatorError);
  CHECK_THROWS_AS(evaluate(ExpAlpha{0.5}, zero, 2.0), SingularDenominatorError);
  CHECK_THROWS_AS(evaluate(ExpRatio{}, zero, 2.0), SingularDenominatorError);
  CHECK_THROWS_AS(evaluate(General{1, 0, -1, 0, 1}, zero, 2.0), SingularDenominatorError);
  CHECK_THROWS_AS(evaluate(General{1, 0, 1, 1, -2}, SampleMeans{2.0, 3.0}, 2.0),
                  SingularDenominatorError);
  try {
    evaluate(General{1, 0, 1, 0, 1}, zero, 2.0);
  } catch (const SingularDenominatorError& e) {
    CHECK(std::string(e.what()).find("(Xbar/xbar)^alpha") != std::string::npos);
  }
  CHECK(evaluate(MeanOnly{}, zero, 2.0) == 3.0);
  CHECK(evaluate(ExpAlpha{0.0}, zero, 2.0) == 3.0);
  CHECK(evaluate(Product{}, zero, 2.0) == 0.0);
  CHECK(evaluate(Difference{1.0}, zero, 2.0) == 5.0);
  CHECK(evaluate(General{1, 0, 0, 1, 1}, zero, 2.0) == doctest::Approx(3.0 * std::exp(0.5)));
  CHECK_THROWS_AS(evaluate(MeanOnly{}, zero, 0.0), ValidationError);
}

TEST_CASE("validation and naming") {
  CHECK_THROWS_AS(validate(ExpAlpha{NAN}), ValidationError);
  CHECK_THROWS_AS(validate(Difference{INFINITY}), ValidationError);
  CHECK_THROWS_AS(validate(General{1, 0, 0, NAN, 1}), ValidationError);
  CHECK_NOTHROW(validate(Ratio{}));
  CHECK(family_name(ExpProduct{}) == "exp-product");
  CHECK(describe(ExpAlpha{0.5}) == "exp-alpha(alpha=0.5)");
  CHECK(describe(Difference{0.25}) == "difference(b=0.25)");
}

TEST_CASE("named members") {
  const auto pop = moments_from_gammas(GammaTriple(4.1813, 8.104, 2.112));

  const auto m1 = resolve_named_member(MemberId::m1, pop);
  CHECK(m1.spec.w1 == 1.0);
  CHECK(m1.spec.alpha == 0.0);
  CHECK(m1.spec.eta == 0.0);
  CHECK_FALSE(m1.w1_free);

  const auto q2 = resolve_named_member(MemberId::q2, pop);
  CHECK(q2.w1_free);
  CHECK(q2.spec.w2 == 0.0);
  CHECK(q2.spec.alpha == 1.0);
  CHECK(q2.spec.eta == 1.0);
  CHECK(q2.spec.theta == pop.rho);

  const auto q6 = resolve_named_member(MemberId::q6, pop);
  CHECK(q6.w1_free);
  CHECK(q6.spec.alpha == 1.0);
  CHECK(q6.spec.eta == pop.xbar);
  CHECK(q6.spec.theta == pop.rho);

  CHECK(resolve_named_member(MemberId::m3, pop).alpha_free);
  CHECK(resolve_named_member(MemberId::m5, pop).w1_free);

  for (MemberId id : kAllMembers) {
    CHECK(parse_member(to_string(id)) == id);
    CHECK(resolve_named_member(id, pop).spec.w2 == 0.0);
  }
  CHECK_THROWS_AS(parse_member("q10"), ValidationError);
  CHECK_THROWS_AS(parse_member(""), ValidationError);
}

TEST_CASE("property: estimator identities over random samples") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.05, 40.0);
  for (int i = 0; i < 10000; ++i) {
    const SampleMeans m{u(rng), u(rng)};
    const double X = u(rng);
    REQUIRE(evaluate(ExpAlpha{1.0}, m, X) == evaluate(ExpRatio{}, m, X));
    REQUIRE(evaluate(ExpAlpha{-1.0}, m, X) == evaluate(ExpProduct{}, m, X));
    REQUIRE(evaluate(Difference{0.0}, m, X) == evaluate(MeanOnly{}, m, X));
    REQUIRE(evaluate(General{1, 0, 0, 0, u(rng)}, m, X) == evaluate(MeanOnly{}, m, X));
    REQUIRE(evaluate(General{1, 0, 1, 0, 1}, m, X) == evaluate(Ratio{}, m, X));

    // n does not enter: only the means matter.
    SampleStats a;
    a.n = 3;
    a.xbar = m.xbar;
    a.ybar = m.ybar;
    SampleStats b = a;
    b.n = 3000;
    b.s2x = 1.0;
    b.s2y = 2.0;
    b.sxy = 0.5;
    REQUIRE(evaluate(General{0.7, 0.1, 0.3, 2.0, 1.5}, a, X) ==
            evaluate(General{0.7, 0.1, 0.3, 2.0, 1.5}, b, X));
  }
}
