#include "ivpi/simulate.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ivpi/estimators.hpp"

namespace ivpi {

namespace {

void require_prob(double v, const char* what) {
  if (!(v >= 0.0) || !(v <= 1.0)) {
    std::ostringstream msg;
    msg << what << " must lie in [0,1], got " << v;
    throw std::invalid_argument(msg.str());
  }
}

// Counter-based generator: each patient's draws depend only on (seed, index).
struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace

double TwoPhysicianScenario::joint(int d, int a) const {
  const double pd = p_diabetic, pa = p_active;
  const double p11 =
      pd * pa + covariate_dependence * std::sqrt(pd * (1.0 - pd) * pa * (1.0 - pa));
  const double cell[2][2] = {{1.0 - pd - pa + p11, pa - p11}, {pd - p11, p11}};
  const double v = cell[d][a];
  if (v < -1e-12 || v > 1.0 + 1e-12) {
    std::ostringstream msg;
    msg << "covariate_dependence " << covariate_dependence
        << " is Frechet-incompatible with marginals p_diabetic=" << pd << ", p_active=" << pa
        << ": P(D=" << d << ",A=" << a << ") = " << v;
    throw std::invalid_argument(msg.str());
  }
  return std::max(0.0, v);
}

void TwoPhysicianScenario::validate() const {
  require_prob(p_diabetic, "p_diabetic");
  require_prob(p_active, "p_active");
  require_prob(instrument_split, "instrument_split");
  if (!(covariate_dependence >= -1.0) || !(covariate_dependence <= 1.0))
    throw std::invalid_argument("covariate_dependence must lie in [-1,1]");
  for (int d = 0; d < 2; ++d)
    for (int a = 0; a < 2; ++a) {
      require_prob(outcome_model.at(d, a, 0), "outcome risk");
      require_prob(outcome_model.at(d, a, 1), "outcome risk");
      joint(d, a);  // throws on Frechet violation
    }
}

namespace {

// Z=1 physician treats iff not diabetic; Z=0 physician treats iff active.
inline int treatment_rule(int z, int d, int a) { return z == 1 ? 1 - d : a; }

}  // namespace

ScenarioReport run_two_physician(const TwoPhysicianScenario& s) {
  s.validate();
  ScenarioReport report;
  double late_mass = 0.0, late_sum = 0.0;
  for (int d = 0; d < 2; ++d) {
    for (int a = 0; a < 2; ++a) {
      const double w = s.joint(d, a);
      const int x1 = treatment_rule(1, d, a);
      const int x0 = treatment_rule(0, d, a);
      if (x1 == 1 && x0 == 1)
        report.shares.always_taker += w;
      else if (x1 == 0 && x0 == 0)
        report.shares.never_taker += w;
      else if (x1 == 1 && x0 == 0)
        report.shares.complier += w;
      else
        report.shares.defier += w;
      const double effect = s.outcome_model.at(d, a, 1) - s.outcome_model.at(d, a, 0);
      report.true_ate += w * effect;
      if (x1 == 1 && x0 == 0) {
        late_mass += w;
        late_sum += w * effect;
      }
      for (int z = 0; z < 2; ++z) {
        const int x = treatment_rule(z, d, a);
        const double risk = s.outcome_model.at(d, a, x);
        report.induced_law.at(z, x, 1) += w * risk;
        report.induced_law.at(z, x, 0) += w * (1.0 - risk);
      }
    }
  }
  report.defier_share = report.shares.defier;
  if (late_mass > 0.0) report.true_late = late_sum / late_mass;
  const IvEstimates est = iv_estimates(report.induced_law);
  report.iv_estimand = est.wald;
  if (report.iv_estimand) {
    report.bias_vs_ate = *report.iv_estimand - report.true_ate;
    if (report.true_late) report.bias_vs_late = *report.iv_estimand - *report.true_late;
  }
  return report;
}

TrialCounts sample_two_physician(const TwoPhysicianScenario& s, std::uint64_t seed,
                                 std::int64_t n) {
  s.validate();
  if (n <= 0) throw std::invalid_argument("sample size must be positive");
  const double joint[4] = {s.joint(0, 0), s.joint(0, 1), s.joint(1, 0), s.joint(1, 1)};
  TrialCounts counts{};
#pragma omp parallel
  {
    TrialCounts local{};
#pragma omp for
    for (std::int64_t i = 0; i < n; ++i) {
      SplitMix64 rng{seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(i + 1))};
      const int z = rng.uniform() < s.instrument_split ? 1 : 0;
      const double u = rng.uniform();
      int cell = 0;
      double acc = 0.0;
      for (int c = 0; c < 4; ++c) {
        acc += joint[c];
        if (u < acc) {
          cell = c;
          break;
        }
      }
      const int d = cell >> 1, a = cell & 1;
      const int x = treatment_rule(z, d, a);
      const int y = rng.uniform() < s.outcome_model.at(d, a, x) ? 1 : 0;
      ++local.at(z, x, y);
    }
#pragma omp critical
    for (std::size_t c = 0; c < counts.n.size(); ++c) counts.n[c] += local.n[c];
  }
  return counts;
}

void ProxyScenario::validate() const {
  if (levels.size() < 2) throw std::invalid_argument("proxy scenario needs at least two levels");
  require_prob(baseline_risk, "baseline_risk");
  double total = 0.0;
  for (const auto& lvl : levels) {
    if (!(lvl.weight >= 0.0)) throw std::invalid_argument("level weight must be nonnegative");
    require_prob(lvl.uptake_unencouraged, "uptake_unencouraged");
    require_prob(lvl.uptake_encouraged, "uptake_encouraged");
    if (!(lvl.effect >= -1.0) || !(lvl.effect <= 1.0))
      throw std::invalid_argument("stratum effect must lie in [-1,1]");
    require_prob(baseline_risk + lvl.effect, "baseline_risk + effect");
    total += lvl.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("level weights must sum to 1");
}

ScenarioReport run_proxy(const ProxyScenario& s) {
  s.validate();
  ScenarioReport report;
  double itt_x = 0.0, itt_y = 0.0, late_mass = 0.0, late_sum = 0.0;
  std::vector<double> raw;
  raw.reserve(s.levels.size());
  for (const auto& lvl : s.levels) {
    const double delta = lvl.uptake_encouraged - lvl.uptake_unencouraged;
    const double lambda = lvl.weight * delta;
    raw.push_back(lambda);
    itt_x += lambda;
    itt_y += lambda * lvl.effect;
    report.true_ate += lvl.weight * lvl.effect;
    // Within-level compliance under the comonotone coupling of the two
    // potential uptakes.
    report.shares.always_taker += lvl.weight * std::min(lvl.uptake_unencouraged, lvl.uptake_encouraged);
    report.shares.never_taker +=
        lvl.weight * (1.0 - std::max(lvl.uptake_unencouraged, lvl.uptake_encouraged));
    report.shares.complier += lvl.weight * std::max(0.0, delta);
    report.shares.defier += lvl.weight * std::max(0.0, -delta);
    late_mass += lvl.weight * std::max(0.0, delta);
    late_sum += lvl.weight * std::max(0.0, delta) * lvl.effect;
    for (int z = 0; z < 2; ++z) {
      const double uptake = z == 1 ? lvl.uptake_encouraged : lvl.uptake_unencouraged;
      const double risk_treated = s.baseline_risk + lvl.effect;
      report.induced_law.at(z, 1, 1) += lvl.weight * uptake * risk_treated;
      report.induced_law.at(z, 1, 0) += lvl.weight * uptake * (1.0 - risk_treated);
      report.induced_law.at(z, 0, 1) += lvl.weight * (1.0 - uptake) * s.baseline_risk;
      report.induced_law.at(z, 0, 0) += lvl.weight * (1.0 - uptake) * (1.0 - s.baseline_risk);
    }
  }
  report.defier_share = report.shares.defier;
  if (late_mass > 0.0) report.true_late = late_sum / late_mass;
  if (std::abs(itt_x) > kWeakInstrumentTol) {
    report.iv_estimand = itt_y / itt_x;
    for (double lambda : raw) report.level_weights.push_back(lambda / itt_x);
    report.bias_vs_ate = *report.iv_estimand - report.true_ate;
    if (report.true_late) report.bias_vs_late = *report.iv_estimand - *report.true_late;
  } else {
    report.level_weights = raw;
  }
  return report;
}

}  // namespace ivpi
