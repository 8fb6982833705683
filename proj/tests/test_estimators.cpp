#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "helpers.hpp"
#include "ivpi/estimators.hpp"

using namespace ivpi;
using namespace ivpi::testing;

namespace {
const ObservedLaw kFluLaw = law_from_counts(flu_counts());
}

TEST_CASE("flu trial Wald estimate") {
  const IvEstimates est = iv_estimates(kFluLaw);
  REQUIRE(est.wald);
  CHECK(std::abs(*est.wald - (-0.121992550586)) < 1e-9);
  CHECK(std::round(*est.wald * 100.0) / 100.0 == doctest::Approx(-0.12));
  CHECK(est.complier_share + est.always_taker_share + est.never_taker_share ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Wald is the ITT ratio") {
  ObservedLaw law;
  law.at(0, 0, 1) = 0.3;
  law.at(0, 0, 0) = 0.7;
  law.at(1, 1, 1) = 0.1;
  law.at(1, 1, 0) = 0.4;
  law.at(1, 0, 1) = 0.1;
  law.at(1, 0, 0) = 0.4;
  const IvEstimates est = iv_estimates(law);
  CHECK(est.itt_y == doctest::Approx(-0.1));
  CHECK(est.itt_x == doctest::Approx(0.5));
  REQUIRE(est.wald);
  CHECK(*est.wald == doctest::Approx(-0.2));
}

TEST_CASE("identical arms flag a weak instrument") {
  ObservedLaw law;
  for (int z = 0; z < 2; ++z) {
    law.at(z, 1, 1) = 0.2;
    law.at(z, 1, 0) = 0.3;
    law.at(z, 0, 1) = 0.1;
    law.at(z, 0, 0) = 0.4;
  }
  const IvEstimates est = iv_estimates(law);
  CHECK(est.weak_instrument);
  CHECK(!est.wald);
}

TEST_CASE("perfect compliance") {
  ObservedLaw law;
  law.at(1, 1, 1) = 0.4;
  law.at(1, 1, 0) = 0.6;
  law.at(0, 0, 1) = 0.5;
  law.at(0, 0, 0) = 0.5;
  const IvEstimates est = iv_estimates(law);
  CHECK(est.complier_share == doctest::Approx(1.0));
  REQUIRE(est.wald);
  CHECK(*est.wald == doctest::Approx(est.itt_y));
}

TEST_CASE("flipping the outcome coding negates ITT_Y and Wald") {
  ObservedLaw flipped;
  for (int z = 0; z < 2; ++z)
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) flipped.at(z, x, y) = kFluLaw.at(z, x, 1 - y);
  const IvEstimates a = iv_estimates(kFluLaw);
  const IvEstimates b = iv_estimates(flipped);
  CHECK(std::abs(a.itt_y + b.itt_y) < 1e-15);
  CHECK(a.itt_x == b.itt_x);
  CHECK(std::abs(*a.wald + *b.wald) < 1e-12);
}

TEST_CASE("sensitivity: degenerate ranges recover the point estimate") {
  const IvEstimates est = iv_estimates(kFluLaw);
  const double lambda = *est.wald;
  StrataEffectRanges ranges;
  ranges.always_taker_effect = {lambda, lambda};
  ranges.never_taker_effect = {lambda, lambda};
  const EffectInterval interval = ate_sensitivity(kFluLaw, ranges);
  // pi_CO*lambda + (pi_AT + pi_NT)*lambda = lambda since the shares sum to 1.
  CHECK(interval.lo == doctest::Approx(lambda).epsilon(1e-12));
  CHECK(interval.hi == doctest::Approx(lambda).epsilon(1e-12));
}

TEST_CASE("sensitivity: perfect compliance ignores the ranges") {
  ObservedLaw law;
  law.at(1, 1, 1) = 0.4;
  law.at(1, 1, 0) = 0.6;
  law.at(0, 0, 1) = 0.5;
  law.at(0, 0, 0) = 0.5;
  StrataEffectRanges ranges;  // full [-1,1] x [-1,1]
  const EffectInterval interval = ate_sensitivity(law, ranges);
  const double lambda = *iv_estimates(law).wald;
  CHECK(interval.lo == doctest::Approx(lambda));
  CHECK(interval.hi == doctest::Approx(lambda));
}

TEST_CASE("sensitivity: width identity and Wald containment on the flu law") {
  const IvEstimates est = iv_estimates(kFluLaw);
  StrataEffectRanges ranges;  // full ranges
  const EffectInterval interval = ate_sensitivity(kFluLaw, ranges);
  const double width = interval.hi - interval.lo;
  CHECK(width ==
        doctest::Approx(est.always_taker_share * 2.0 + est.never_taker_share * 2.0).epsilon(1e-12));
  CHECK(interval.lo <= *est.wald);
  CHECK(*est.wald <= interval.hi);
  // Independent recomputation from the shares.
  const double core = est.complier_share * *est.wald;
  CHECK(interval.lo ==
        doctest::Approx(core - est.always_taker_share - est.never_taker_share).epsilon(1e-12));
}

TEST_CASE("sensitivity width is exactly the cap-weighted range widths") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const ResponseTypeDistribution q = random_q(rng, true);
    const ObservedLaw law = q.induced_law();
    const IvEstimates est = iv_estimates(law);
    if (!est.wald) continue;
    StrataEffectRanges ranges;
    double a = unif(rng), b = unif(rng);
    ranges.always_taker_effect = {std::min(a, b), std::max(a, b)};
    a = unif(rng), b = unif(rng);
    ranges.never_taker_effect = {std::min(a, b), std::max(a, b)};
    const EffectInterval interval = ate_sensitivity(law, ranges);
    const double expected =
        est.always_taker_share * (ranges.always_taker_effect.hi - ranges.always_taker_effect.lo) +
        est.never_taker_share * (ranges.never_taker_effect.hi - ranges.never_taker_effect.lo);
    CHECK(interval.hi - interval.lo == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("decomposition identity on monotone generators") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const ResponseTypeDistribution q = random_q(rng, true);
    const ObservedLaw law = q.induced_law();
    const IvEstimates est = iv_estimates(law);
    if (!est.wald) continue;
    CHECK(std::abs(*est.wald - stratum_effect(q, ComplianceType::Complier)) <= 1e-9);
    const double recomposed = est.complier_share * *est.wald +
                              est.always_taker_share * stratum_effect(q, ComplianceType::AlwaysTaker) +
                              est.never_taker_share * stratum_effect(q, ComplianceType::NeverTaker);
    CHECK(std::abs(recomposed - q.ate()) <= 1e-9);
  }
}

TEST_CASE("sensitivity error paths") {
  ObservedLaw weak;
  for (int z = 0; z < 2; ++z) {
    weak.at(z, 1, 1) = 0.25;
    weak.at(z, 1, 0) = 0.25;
    weak.at(z, 0, 1) = 0.25;
    weak.at(z, 0, 0) = 0.25;
  }
  StrataEffectRanges ranges;
  CHECK_THROWS_AS(ate_sensitivity(weak, ranges), std::domain_error);

  StrataEffectRanges bad;
  bad.always_taker_effect = {-2.0, 0.5};
  CHECK_THROWS_AS(ate_sensitivity(kFluLaw, bad), std::invalid_argument);
  bad = StrataEffectRanges{};
  bad.never_taker_effect = {0.5, 0.1};  // lo > hi
  CHECK_THROWS_AS(ate_sensitivity(kFluLaw, bad), std::invalid_argument);
}
