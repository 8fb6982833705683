#include "ivpi/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ivpi {

namespace {

constexpr std::size_t kMaxPivots = 100000;
constexpr double kMaxOracleBases = 1e7;

// Dense tableau for the two-phase primal simplex. Columns are laid out as
// [structural | slack | artificial | rhs]; the reduced-cost row is kept in
// canonical form by the same pivots.
class Tableau {
 public:
  Tableau(const LinearProgram& lp)
      : n_(lp.num_vars()), k_(lp.le_lhs.size()), m_(lp.eq_lhs.size() + lp.le_lhs.size()) {
    cols_ = n_ + k_ + m_ + 1;
    rows_.assign(m_, std::vector<double>(cols_, 0.0));
    basis_.resize(m_);
    const std::size_t ne = lp.eq_lhs.size();
    for (std::size_t i = 0; i < m_; ++i) {
      auto& row = rows_[i];
      const std::vector<double>& src = i < ne ? lp.eq_lhs[i] : lp.le_lhs[i - ne];
      std::copy(src.begin(), src.end(), row.begin());
      if (i >= ne) row[n_ + (i - ne)] = 1.0;  // slack
      row[cols_ - 1] = i < ne ? lp.eq_rhs[i] : lp.le_rhs[i - ne];
      if (row[cols_ - 1] < 0.0)
        for (double& v : row) v = -v;
      row[n_ + k_ + i] = 1.0;  // artificial
      basis_[i] = static_cast<int>(n_ + k_ + i);
    }
  }

  // Phase 1: minimize the sum of artificials. Returns the residual
  // infeasibility (sum of artificial basics at the optimum).
  double phase1() {
    cost_.assign(cols_, 0.0);
    for (std::size_t j = 0; j < n_ + k_; ++j) {
      double s = 0.0;
      for (const auto& row : rows_) s += row[j];
      cost_[j] = -s;
    }
    run_bland(n_ + k_ + m_);
    double residual = 0.0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= static_cast<int>(n_ + k_)) residual += rows_[i][cols_ - 1];
    return residual;
  }

  // Pivot basic artificials out where possible; redundant rows are left as
  // all-zero rows with their artificial basic at level zero.
  void drop_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < static_cast<int>(n_ + k_)) continue;
      for (std::size_t j = 0; j < n_ + k_; ++j) {
        if (std::abs(rows_[i][j]) > kLpPivotTol) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase 2: minimize the original objective; artificial columns are banned.
  bool phase2(const std::vector<double>& objective) {
    cost_.assign(cols_, 0.0);
    std::copy(objective.begin(), objective.end(), cost_.begin());
    for (std::size_t i = 0; i < m_; ++i) {
      const int b = basis_[i];
      if (b < static_cast<int>(n_) && std::abs(objective[b]) > 0.0) {
        const double c = objective[b];
        for (std::size_t j = 0; j < cols_; ++j) cost_[j] -= c * rows_[i][j];
      }
    }
    return run_bland(n_ + k_);
  }

  std::vector<double> witness() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < static_cast<int>(n_)) x[basis_[i]] = std::max(0.0, rows_[i][cols_ - 1]);
    return x;
  }

 private:
  // Bland's rule over the first `num_cols` columns. Returns false when the
  // objective is unbounded below.
  bool run_bland(std::size_t num_cols) {
    for (std::size_t iter = 0; iter < kMaxPivots; ++iter) {
      std::size_t enter = num_cols;
      for (std::size_t j = 0; j < num_cols; ++j) {
        if (cost_[j] < -kLpFeasTol) {
          enter = j;
          break;
        }
      }
      if (enter == num_cols) return true;  // optimal
      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = rows_[i][enter];
        if (a <= kLpPivotTol) continue;
        const double ratio = rows_[i][cols_ - 1] / a;
        if (ratio < best - 1e-12 || (ratio < best + 1e-12 && (leave == m_ || basis_[i] < basis_[leave]))) {
          best = ratio;
          leave = i;
        }
      }
      if (leave == m_) return false;  // unbounded
      pivot(leave, enter);
    }
    throw std::runtime_error("simplex exceeded pivot limit");
  }

  void pivot(std::size_t r, std::size_t j) {
    auto& prow = rows_[r];
    const double p = prow[j];
    for (double& v : prow) v /= p;
    prow[j] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = rows_[i][j];
      if (f == 0.0) continue;
      auto& row = rows_[i];
      for (std::size_t c = 0; c < cols_; ++c) row[c] -= f * prow[c];
      row[j] = 0.0;
    }
    const double f = cost_[j];
    if (f != 0.0) {
      for (std::size_t c = 0; c < cols_; ++c) cost_[c] -= f * prow[c];
      cost_[j] = 0.0;
    }
    basis_[r] = static_cast<int>(j);
  }

  std::size_t n_, k_, m_, cols_;
  std::vector<std::vector<double>> rows_;
  std::vector<double> cost_;
  std::vector<int> basis_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

void LinearProgram::validate() const {
  auto check_finite = [](const std::vector<double>& v) {
    for (double x : v)
      if (!std::isfinite(x)) throw std::invalid_argument("non-finite LP coefficient");
  };
  check_finite(objective);
  if (eq_lhs.size() != eq_rhs.size() || le_lhs.size() != le_rhs.size())
    throw std::invalid_argument("constraint matrix / rhs size mismatch");
  for (const auto& row : eq_lhs) {
    if (row.size() != num_vars()) throw std::invalid_argument("equality row width mismatch");
    check_finite(row);
  }
  for (const auto& row : le_lhs) {
    if (row.size() != num_vars()) throw std::invalid_argument("inequality row width mismatch");
    check_finite(row);
  }
  check_finite(eq_rhs);
  check_finite(le_rhs);
}

LpSolution solve_min(const LinearProgram& lp) {
  lp.validate();
  Tableau tableau(lp);
  if (tableau.phase1() > kLpFeasTol) return {LpStatus::Infeasible, 0.0, {}};
  tableau.drop_artificials();
  if (!tableau.phase2(lp.objective)) return {LpStatus::Unbounded, 0.0, {}};
  LpSolution sol;
  sol.status = LpStatus::Optimal;
  sol.witness = tableau.witness();
  sol.value = dot(lp.objective, sol.witness);
  return sol;
}

LpSolution solve_max(const LinearProgram& lp) {
  LinearProgram flipped = lp;
  for (double& c : flipped.objective) c = -c;
  LpSolution sol = solve_min(flipped);
  if (sol.status == LpStatus::Optimal) sol.value = -sol.value;
  return sol;
}

VertexBounds vertex_oracle_minmax(const LinearProgram& lp) {
  lp.validate();
  const std::size_t n = lp.num_vars();
  const std::size_t k = lp.le_lhs.size();
  const std::size_t nt = n + k;
  const std::size_t m = lp.eq_lhs.size() + k;

  // Slack-augmented system A x = b, x >= 0.
  std::vector<std::vector<double>> sys(m, std::vector<double>(nt + 1, 0.0));
  for (std::size_t i = 0; i < lp.eq_lhs.size(); ++i) {
    std::copy(lp.eq_lhs[i].begin(), lp.eq_lhs[i].end(), sys[i].begin());
    sys[i][nt] = lp.eq_rhs[i];
  }
  for (std::size_t i = 0; i < k; ++i) {
    auto& row = sys[lp.eq_lhs.size() + i];
    std::copy(lp.le_lhs[i].begin(), lp.le_lhs[i].end(), row.begin());
    row[n + i] = 1.0;
    row[nt] = lp.le_rhs[i];
  }

  // Row-reduce to an independent subsystem; an all-zero row with nonzero rhs
  // means the equalities are inconsistent.
  std::size_t rank = 0;
  for (std::size_t col = 0; col < nt && rank < m; ++col) {
    std::size_t piv = rank;
    for (std::size_t i = rank + 1; i < m; ++i)
      if (std::abs(sys[i][col]) > std::abs(sys[piv][col])) piv = i;
    if (std::abs(sys[piv][col]) < 1e-11) continue;
    std::swap(sys[rank], sys[piv]);
    for (std::size_t i = rank + 1; i < m; ++i) {
      const double f = sys[i][col] / sys[rank][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c <= nt; ++c) sys[i][c] -= f * sys[rank][c];
      sys[i][col] = 0.0;
    }
    ++rank;
  }
  VertexBounds out;
  for (std::size_t i = rank; i < m; ++i)
    if (std::abs(sys[i][nt]) > kLpFeasTol) return out;  // infeasible
  sys.resize(rank);

  // Guard the enumeration size.
  double bases = 1.0;
  for (std::size_t i = 0; i < rank; ++i) bases = bases * double(nt - i) / double(i + 1);
  if (bases > kMaxOracleBases)
    throw std::invalid_argument("vertex oracle: basis enumeration too large");

  double best_min = std::numeric_limits<double>::infinity();
  double best_max = -std::numeric_limits<double>::infinity();
  std::vector<double> wit_min, wit_max;
  bool feasible = false;

  if (rank == 0) {
    // Only x >= 0 remains; the origin is the sole vertex.
    feasible = true;
    best_min = best_max = 0.0;
    wit_min = wit_max = std::vector<double>(n, 0.0);
  }

  std::vector<std::size_t> comb(rank);
  std::iota(comb.begin(), comb.end(), std::size_t{0});
  std::vector<std::vector<double>> M(rank, std::vector<double>(rank + 1));
  std::vector<double> xb(rank);
  while (rank > 0) {
    // Solve the square basis system by Gaussian elimination.
    for (std::size_t i = 0; i < rank; ++i) {
      for (std::size_t j = 0; j < rank; ++j) M[i][j] = sys[i][comb[j]];
      M[i][rank] = sys[i][nt];
    }
    bool singular = false;
    for (std::size_t col = 0; col < rank && !singular; ++col) {
      std::size_t piv = col;
      for (std::size_t i = col + 1; i < rank; ++i)
        if (std::abs(M[i][col]) > std::abs(M[piv][col])) piv = i;
      if (std::abs(M[piv][col]) < kLpPivotTol) {
        singular = true;
        break;
      }
      std::swap(M[col], M[piv]);
      for (std::size_t i = col + 1; i < rank; ++i) {
        const double f = M[i][col] / M[col][col];
        if (f == 0.0) continue;
        for (std::size_t c = col; c <= rank; ++c) M[i][c] -= f * M[col][c];
      }
    }
    if (!singular) {
      for (std::size_t i = rank; i-- > 0;) {
        double v = M[i][rank];
        for (std::size_t j = i + 1; j < rank; ++j) v -= M[i][j] * xb[j];
        xb[i] = v / M[i][i];
      }
      bool nonneg = true;
      for (double v : xb)
        if (v < -kLpFeasTol) {
          nonneg = false;
          break;
        }
      if (nonneg) {
        feasible = true;
        double value = 0.0;
        for (std::size_t j = 0; j < rank; ++j)
          if (comb[j] < n) value += lp.objective[comb[j]] * xb[j];
        if (value < best_min) {
          best_min = value;
          wit_min.assign(n, 0.0);
          for (std::size_t j = 0; j < rank; ++j)
            if (comb[j] < n) wit_min[comb[j]] = std::max(0.0, xb[j]);
        }
        if (value > best_max) {
          best_max = value;
          wit_max.assign(n, 0.0);
          for (std::size_t j = 0; j < rank; ++j)
            if (comb[j] < n) wit_max[comb[j]] = std::max(0.0, xb[j]);
        }
      }
    }
    // Next combination.
    std::size_t i = rank;
    while (i-- > 0)
      if (comb[i] != nt - rank + i) break;
    if (i == static_cast<std::size_t>(-1)) break;
    ++comb[i];
    for (std::size_t j = i + 1; j < rank; ++j) comb[j] = comb[j - 1] + 1;
  }

  if (feasible) {
    out.minimum = {LpStatus::Optimal, best_min, wit_min};
    out.maximum = {LpStatus::Optimal, best_max, wit_max};
  }
  return out;
}

LpSolution vertex_oracle(const LinearProgram& lp, OptimizeSense sense) {
  VertexBounds b = vertex_oracle_minmax(lp);
  return sense == OptimizeSense::Minimize ? b.minimum : b.maximum;
}

}  // namespace ivpi
