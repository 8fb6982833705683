#pragma once

#include <cmath>
#include <random>

#include "ivpi/bounds.hpp"
#include "ivpi/model.hpp"

// Shared generators for the property tests: random response-type
// distributions, the laws they induce, and their identified quantities.
namespace ivpi::testing {

inline TrialCounts flu_counts() {
  TrialCounts c{};
  c.at(0, 0, 0) = 1027;
  c.at(0, 0, 1) = 101;
  c.at(0, 1, 0) = 234;
  c.at(0, 1, 1) = 26;
  c.at(1, 0, 0) = 934;
  c.at(1, 0, 1) = 84;
  c.at(1, 1, 0) = 417;
  c.at(1, 1, 1) = 29;
  return c;
}

inline ResponseTypeDistribution random_q(std::mt19937_64& rng, bool monotone) {
  std::exponential_distribution<double> exp(1.0);
  ResponseTypeDistribution q;
  double total = 0.0;
  for (ComplianceType c : kComplianceTypes) {
    if (monotone && c == ComplianceType::Defier) continue;
    for (OutcomeType r : kOutcomeTypes) {
      q.at(c, r) = exp(rng);
      total += q.at(c, r);
    }
  }
  for (double& v : q.q) v /= total;
  return q;
}

// Counterfactual risks of the strata the caps constrain.
inline double never_taker_treated_risk(const ResponseTypeDistribution& q) {
  const double mass = q.compliance_share(ComplianceType::NeverTaker);
  if (mass <= 0.0) return 0.0;
  return (q.at(ComplianceType::NeverTaker, OutcomeType::Doomed) +
          q.at(ComplianceType::NeverTaker, OutcomeType::Helped)) /
         mass;
}

inline double always_taker_untreated_risk(const ResponseTypeDistribution& q) {
  const double mass = q.compliance_share(ComplianceType::AlwaysTaker);
  if (mass <= 0.0) return 0.0;
  return (q.at(ComplianceType::AlwaysTaker, OutcomeType::Doomed) +
          q.at(ComplianceType::AlwaysTaker, OutcomeType::Hurt)) /
         mass;
}

// Stratum-level ATE of a compliance type (0 when the stratum is empty).
inline double stratum_effect(const ResponseTypeDistribution& q, ComplianceType c) {
  const double mass = q.compliance_share(c);
  if (mass <= 0.0) return 0.0;
  return (q.at(c, OutcomeType::Helped) - q.at(c, OutcomeType::Hurt)) / mass;
}

// Caps the generator satisfies with some slack, clamped to [0,1].
inline AssumptionSet feasible_caps(const ResponseTypeDistribution& q, double margin = 0.02) {
  AssumptionSet a;
  a.monotonicity = true;
  a.cap_never_taker_treated = std::min(1.0, never_taker_treated_risk(q) + margin);
  a.cap_always_taker_untreated = std::min(1.0, always_taker_untreated_risk(q) + margin);
  return a;
}

}  // namespace ivpi::testing
