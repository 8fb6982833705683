#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "ivpi/lp.hpp"
#include "ivpi/model.hpp"

// Response-type LPs bounding the global average treatment effect under the
// instrumental conditions, optionally with monotonicity and counterfactual
// outcome-risk caps, plus the observable falsification check.
namespace ivpi {

enum class ComplianceType { AlwaysTaker = 0, NeverTaker = 1, Complier = 2, Defier = 3 };
enum class OutcomeType { Doomed = 0, Helped = 1, Hurt = 2, Immune = 3 };

inline constexpr std::array<ComplianceType, 4> kComplianceTypes = {
    ComplianceType::AlwaysTaker, ComplianceType::NeverTaker, ComplianceType::Complier,
    ComplianceType::Defier};
inline constexpr std::array<OutcomeType, 4> kOutcomeTypes = {
    OutcomeType::Doomed, OutcomeType::Helped, OutcomeType::Hurt, OutcomeType::Immune};

inline constexpr int response_index(ComplianceType c, OutcomeType r) {
  return 4 * static_cast<int>(c) + static_cast<int>(r);
}

// Treatment taken at instrument level z for each compliance type.
inline constexpr int treatment_under(ComplianceType c, int z) {
  switch (c) {
    case ComplianceType::AlwaysTaker: return 1;
    case ComplianceType::NeverTaker: return 0;
    case ComplianceType::Complier: return z;
    case ComplianceType::Defier: return 1 - z;
  }
  return 0;
}

// Outcome realized at treatment level x for each outcome type.
inline constexpr int outcome_under(OutcomeType r, int x) {
  switch (r) {
    case OutcomeType::Doomed: return 1;
    case OutcomeType::Helped: return x;
    case OutcomeType::Hurt: return 1 - x;
    case OutcomeType::Immune: return 0;
  }
  return 0;
}

// Joint distribution over the 16 (compliance type, outcome type) strata.
struct ResponseTypeDistribution {
  std::array<double, 16> q{};

  double& at(ComplianceType c, OutcomeType r) { return q[response_index(c, r)]; }
  double at(ComplianceType c, OutcomeType r) const { return q[response_index(c, r)]; }

  double compliance_share(ComplianceType c) const {
    double s = 0.0;
    for (OutcomeType r : kOutcomeTypes) s += at(c, r);
    return s;
  }

  // ATE(q) = P(helped) - P(hurt).
  double ate() const {
    double s = 0.0;
    for (ComplianceType c : kComplianceTypes) s += at(c, OutcomeType::Helped) - at(c, OutcomeType::Hurt);
    return s;
  }

  // The observed law this stratum distribution induces.
  ObservedLaw induced_law() const;
};

struct AssumptionSet {
  bool monotonicity = false;
  // P(Y=1 | never-taker, treatment forced on) <= cap.
  std::optional<double> cap_never_taker_treated;
  // P(Y=1 | always-taker, treatment forced off) <= cap.
  std::optional<double> cap_always_taker_untreated;

  void validate() const;  // throws std::invalid_argument on a cap outside [0,1]
};

enum class BoundsStatus { Bounded, Infeasible };

struct BoundsResult {
  BoundsStatus status = BoundsStatus::Infeasible;
  double lower = 0.0;
  double upper = 0.0;
  std::optional<ResponseTypeDistribution> lower_witness;
  std::optional<ResponseTypeDistribution> upper_witness;
};

// The 16-variable response-type LP: normalization, the 8 observed-cell
// equalities, zero-fixing rows under monotonicity, and homogeneous risk-cap
// rows. The objective is the ATE; min/max sense is chosen by the solver call.
LinearProgram build_bounds_lp(const ObservedLaw& law, const AssumptionSet& assumptions);

// Sharp ATE bounds; infeasibility signals model falsification.
BoundsResult ate_bounds(const ObservedLaw& law, const AssumptionSet& assumptions);

// Instrumental inequalities: for each x, sum_y max_z p(x,y|z) <= 1. Passing
// is equivalent to cap-free LP feasibility.
ValidationReport check_instrumental_inequalities(const ObservedLaw& law);

enum class RiskCap { NeverTakerTreated, AlwaysTakerUntreated };

// One BoundsResult per grid point, sweeping the named cap over a strictly
// increasing grid. Grid points are solved in parallel when OpenMP is enabled;
// bounds_curve_serial is the reference path.
std::vector<std::pair<double, BoundsResult>> bounds_curve(const ObservedLaw& law,
                                                          const AssumptionSet& base,
                                                          RiskCap cap_name,
                                                          const std::vector<double>& grid);
std::vector<std::pair<double, BoundsResult>> bounds_curve_serial(const ObservedLaw& law,
                                                                 const AssumptionSet& base,
                                                                 RiskCap cap_name,
                                                                 const std::vector<double>& grid);

}  // namespace ivpi
