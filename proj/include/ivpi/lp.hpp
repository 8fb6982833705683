#pragma once

#include <cstddef>
#include <vector>

// Dense linear programming sized for the 16-variable bounds problems:
// a two-phase primal simplex with Bland's anti-cycling rule, and an
// independent basis-enumeration oracle used to cross-check it.
namespace ivpi {

// minimize objective . x  subject to
//   eq_lhs x  = eq_rhs
//   le_lhs x <= le_rhs
//   x >= 0
struct LinearProgram {
  std::vector<double> objective;
  std::vector<std::vector<double>> eq_lhs;
  std::vector<double> eq_rhs;
  std::vector<std::vector<double>> le_lhs;
  std::vector<double> le_rhs;

  std::size_t num_vars() const { return objective.size(); }

  // Throws std::invalid_argument on ragged rows or non-finite data.
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;               // defined iff status == Optimal
  std::vector<double> witness;      // defined iff status == Optimal
};

enum class OptimizeSense { Minimize, Maximize };

// Feasibility / optimality slack used throughout.
inline constexpr double kLpFeasTol = 1e-9;
// Entries below this never serve as pivots.
inline constexpr double kLpPivotTol = 1e-10;

// Two-phase simplex, Bland's rule, lowest-index tie-breaking; deterministic
// for identical input.
LpSolution solve_min(const LinearProgram& lp);
LpSolution solve_max(const LinearProgram& lp);

struct VertexBounds {
  LpSolution minimum;
  LpSolution maximum;
};

// Enumerates every basic feasible solution of the slack-augmented system and
// returns the extreme objective values. Independent of the simplex code path.
// Throws std::invalid_argument if more than 10^7 bases would be visited.
VertexBounds vertex_oracle_minmax(const LinearProgram& lp);
LpSolution vertex_oracle(const LinearProgram& lp, OptimizeSense sense);

}  // namespace ivpi
