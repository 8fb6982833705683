#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ivpi/model.hpp"

// Exact-enumeration scenario engine for preference-based instruments:
// the two-physician monotonicity-violation construction and the
// dichotomized-proxy weighting construction.
namespace ivpi {

// P(Y=1 | diabetic, active, treated) for the 8 covariate x treatment cells.
struct OutcomeModel {
  std::array<double, 8> risk{};

  double& at(int d, int a, int x) { return risk[4 * d + 2 * a + x]; }
  double at(int d, int a, int x) const { return risk[4 * d + 2 * a + x]; }
};

// Two physicians with opposite default preferences: the treatment-preferring
// physician (Z=1) withholds from diabetics, the other (Z=0) treats only the
// physically active. A diabetic-and-active patient is a defier.
struct TwoPhysicianScenario {
  double p_diabetic = 0.0;
  double p_active = 0.0;
  // Correlation between the diabetic and active indicators; mapped to the
  // (D,A) joint through the Frechet-consistent linear family.
  double covariate_dependence = 0.0;
  OutcomeModel outcome_model;
  double instrument_split = 0.5;  // P(Z=1); used by the Monte Carlo mode

  // Joint P(D=d, A=a). Throws std::invalid_argument when the requested
  // correlation is incompatible with the marginals (Frechet violation).
  double joint(int d, int a) const;
  void validate() const;
};

struct ComplianceShares {
  double always_taker = 0.0;
  double never_taker = 0.0;
  double complier = 0.0;
  double defier = 0.0;
};

struct ScenarioReport {
  ComplianceShares shares;
  double true_ate = 0.0;
  std::optional<double> true_late;     // absent when the complier share is 0
  std::optional<double> iv_estimand;   // asymptotic Wald; absent when itt_x = 0
  double defier_share = 0.0;
  std::optional<double> bias_vs_late;
  std::optional<double> bias_vs_ate;
  ObservedLaw induced_law;
  // Proxy scenarios only: normalized per-level weights behind the estimand.
  std::vector<double> level_weights;
};

ScenarioReport run_two_physician(const TwoPhysicianScenario& s);

// Finite-sample draw from the scenario. Per-patient draws are seeded from
// (seed, patient index) so the loop parallelizes deterministically.
TrialCounts sample_two_physician(const TwoPhysicianScenario& s, std::uint64_t seed, std::int64_t n);

// One latent preference level of the unmeasured causal instrument.
struct ProxyLevel {
  double preference = 0.0;    // latent value u
  double weight = 0.0;        // population share
  double uptake_unencouraged = 0.0;  // P(X=1 | level, proxy arm 0)
  double uptake_encouraged = 0.0;    // P(X=1 | level, proxy arm 1)
  double effect = 0.0;        // stratum effect of treatment on Y
};

// The analyst sees only the dichotomous proxy; the estimand it identifies is
// the uptake-change weighted average of the per-level effects. The threshold
// is the intended dichotomization cut, reported against each level's realized
// uptake change as a monotonicity diagnostic.
struct ProxyScenario {
  std::vector<ProxyLevel> levels;
  double threshold = 0.0;
  double baseline_risk = 0.0;  // P(Y=1 | untreated), common across levels

  void validate() const;
};

ScenarioReport run_proxy(const ProxyScenario& s);

}  // namespace ivpi
