#include "ivpi/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ivpi {

ObservedLaw ResponseTypeDistribution::induced_law() const {
  ObservedLaw law;
  for (int z = 0; z < 2; ++z) {
    for (ComplianceType c : kComplianceTypes) {
      const int x = treatment_under(c, z);
      for (OutcomeType r : kOutcomeTypes) law.at(z, x, outcome_under(r, x)) += at(c, r);
    }
  }
  return law;
}

void AssumptionSet::validate() const {
  for (const auto& cap : {cap_never_taker_treated, cap_always_taker_untreated}) {
    if (cap && (!(*cap >= 0.0) || !(*cap <= 1.0)))
      throw std::invalid_argument("risk cap outside [0,1]");
  }
}

namespace {

// Homogeneous cap row: sum of capped-risk strata <= cap * stratum mass,
// i.e. (1-cap) * risky entries - cap * safe entries <= 0. Vacuous when the
// stratum has zero mass.
std::vector<double> cap_row(ComplianceType c, OutcomeType risky_a, OutcomeType risky_b, double cap) {
  std::vector<double> row(16, 0.0);
  for (OutcomeType r : kOutcomeTypes)
    row[response_index(c, r)] = (r == risky_a || r == risky_b) ? 1.0 - cap : -cap;
  return row;
}

}  // namespace

LinearProgram build_bounds_lp(const ObservedLaw& law, const AssumptionSet& assumptions) {
  assumptions.validate();
  LinearProgram lp;
  lp.objective.assign(16, 0.0);
  for (ComplianceType c : kComplianceTypes) {
    lp.objective[response_index(c, OutcomeType::Helped)] = 1.0;
    lp.objective[response_index(c, OutcomeType::Hurt)] = -1.0;
  }

  lp.eq_lhs.emplace_back(16, 1.0);  // normalization
  lp.eq_rhs.push_back(1.0);
  for (int z = 0; z < 2; ++z) {
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        std::vector<double> row(16, 0.0);
        for (ComplianceType c : kComplianceTypes) {
          if (treatment_under(c, z) != x) continue;
          for (OutcomeType r : kOutcomeTypes)
            if (outcome_under(r, x) == y) row[response_index(c, r)] = 1.0;
        }
        lp.eq_lhs.push_back(std::move(row));
        lp.eq_rhs.push_back(law.at(z, x, y));
      }
    }
  }
  if (assumptions.monotonicity) {
    for (OutcomeType r : kOutcomeTypes) {
      std::vector<double> row(16, 0.0);
      row[response_index(ComplianceType::Defier, r)] = 1.0;
      lp.eq_lhs.push_back(std::move(row));
      lp.eq_rhs.push_back(0.0);
    }
  }
  if (assumptions.cap_never_taker_treated) {
    lp.le_lhs.push_back(cap_row(ComplianceType::NeverTaker, OutcomeType::Doomed,
                                OutcomeType::Helped, *assumptions.cap_never_taker_treated));
    lp.le_rhs.push_back(0.0);
  }
  if (assumptions.cap_always_taker_untreated) {
    lp.le_lhs.push_back(cap_row(ComplianceType::AlwaysTaker, OutcomeType::Doomed,
                                OutcomeType::Hurt, *assumptions.cap_always_taker_untreated));
    lp.le_rhs.push_back(0.0);
  }
  return lp;
}

BoundsResult ate_bounds(const ObservedLaw& law, const AssumptionSet& assumptions) {
  const LinearProgram lp = build_bounds_lp(law, assumptions);
  const LpSolution lo = solve_min(lp);
  const LpSolution hi = solve_max(lp);
  BoundsResult result;
  if (lo.status == LpStatus::Infeasible || hi.status == LpStatus::Infeasible) return result;
  if (lo.status != LpStatus::Optimal || hi.status != LpStatus::Optimal)
    throw std::logic_error("bounds LP cannot be unbounded: variables live in a simplex");
  result.status = BoundsStatus::Bounded;
  result.lower = lo.value;
  result.upper = hi.value;
  ResponseTypeDistribution qlo, qhi;
  std::copy(lo.witness.begin(), lo.witness.end(), qlo.q.begin());
  std::copy(hi.witness.begin(), hi.witness.end(), qhi.q.begin());
  result.lower_witness = qlo;
  result.upper_witness = qhi;
  return result;
}

ValidationReport check_instrumental_inequalities(const ObservedLaw& law) {
  ValidationReport report;
  for (int x = 0; x < 2; ++x) {
    double sum = 0.0;
    for (int y = 0; y < 2; ++y) sum += std::max(law.at(0, x, y), law.at(1, x, y));
    if (sum > 1.0 + kLpFeasTol) {
      std::ostringstream msg;
      msg << "instrumental inequality violated for x=" << x << ": sum_y max_z p(" << x
          << ",y|z) = " << sum << " exceeds 1 by " << sum - 1.0;
      report.add(true, msg.str());
    }
  }
  return report;
}

namespace {

void validate_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("bounds_curve: empty grid");
  double prev = -1.0;
  for (double g : grid) {
    if (!(g >= 0.0) || !(g <= 1.0)) throw std::invalid_argument("bounds_curve: grid value outside [0,1]");
    if (g <= prev) throw std::invalid_argument("bounds_curve: grid not strictly increasing");
    prev = g;
  }
}

AssumptionSet with_cap(AssumptionSet base, RiskCap cap_name, double eps) {
  if (cap_name == RiskCap::NeverTakerTreated)
    base.cap_never_taker_treated = eps;
  else
    base.cap_always_taker_untreated = eps;
  return base;
}

}  // namespace

std::vector<std::pair<double, BoundsResult>> bounds_curve_serial(const ObservedLaw& law,
                                                                 const AssumptionSet& base,
                                                                 RiskCap cap_name,
                                                                 const std::vector<double>& grid) {
  validate_grid(grid);
  base.validate();
  std::vector<std::pair<double, BoundsResult>> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    out[i] = {grid[i], ate_bounds(law, with_cap(base, cap_name, grid[i]))};
  return out;
}

std::vector<std::pair<double, BoundsResult>> bounds_curve(const ObservedLaw& law,
                                                          const AssumptionSet& base,
                                                          RiskCap cap_name,
                                                          const std::vector<double>& grid) {
  validate_grid(grid);
  base.validate();
  std::vector<std::pair<double, BoundsResult>> out(grid.size());
  const std::int64_t count = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i)
    out[i] = {grid[i], ate_bounds(law, with_cap(base, cap_name, grid[i]))};
  return out;
}

}  // namespace ivpi
