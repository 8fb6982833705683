#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

// Observable data for a binary-instrument / binary-treatment / binary-outcome
// study: raw cell counts, the conditional law p(x,y|z), and validation.
namespace ivpi {

// Index of a (z,x,y) cell in the flat 8-cell layout.
inline constexpr int cell_index(int z, int x, int y) { return 4 * z + 2 * x + y; }

struct Finding {
  bool fatal = false;
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool ok() const {
    for (const auto& f : findings)
      if (f.fatal) return false;
    return true;
  }
  void add(bool fatal, std::string message) { findings.push_back({fatal, std::move(message)}); }
};

// Raw counts n(z,x,y) for the 8 instrument x treatment x outcome cells.
// Counts are integers; weighted data is out of scope.
struct TrialCounts {
  std::array<std::int64_t, 8> n{};

  std::int64_t& at(int z, int x, int y) { return n[cell_index(z, x, y)]; }
  std::int64_t at(int z, int x, int y) const { return n[cell_index(z, x, y)]; }
  std::int64_t arm_total(int z) const {
    return at(z, 0, 0) + at(z, 0, 1) + at(z, 1, 0) + at(z, 1, 1);
  }
};

// Conditional probabilities p(x,y|z). Immutable after construction in
// practice; all operations on it are pure.
struct ObservedLaw {
  std::array<double, 8> p{};

  double& at(int z, int x, int y) { return p[cell_index(z, x, y)]; }
  double at(int z, int x, int y) const { return p[cell_index(z, x, y)]; }

  double prob_treated(int z) const { return at(z, 1, 0) + at(z, 1, 1); }
  double prob_outcome(int z) const { return at(z, 0, 1) + at(z, 1, 1); }
};

// Normalization tolerance for laws built by this library vs laws typed in by
// a user to a few decimals.
inline constexpr double kConstructedLawTol = 1e-12;
inline constexpr double kUserLawTol = 1e-9;

ValidationReport validate_counts(const TrialCounts& counts);

// Empirical law p(x,y|z) = n(z,x,y) / n(z,.,.). Throws std::invalid_argument
// when an instrument arm has zero total or a count is negative.
ObservedLaw law_from_counts(const TrialCounts& counts);

// Range and per-arm normalization checks. Findings are returned, not thrown.
ValidationReport validate_law(const ObservedLaw& law, double tol = kUserLawTol);

}  // namespace ivpi
