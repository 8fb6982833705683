// Timing comparison for the OpenMP paths: the cap-sweep bounds curve against
// its serial reference, and Monte Carlo sampling at a few sizes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ivpi/bounds.hpp"
#include "ivpi/model.hpp"
#include "ivpi/simulate.hpp"

using namespace ivpi;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

ObservedLaw bench_law() {
  // A monotone-compatible law with nondegenerate compliance mass.
  std::mt19937_64 rng(12345);
  std::exponential_distribution<double> exp(1.0);
  ResponseTypeDistribution q;
  double total = 0.0;
  for (ComplianceType c : kComplianceTypes) {
    if (c == ComplianceType::Defier) continue;
    for (OutcomeType r : kOutcomeTypes) {
      q.at(c, r) = exp(rng);
      total += q.at(c, r);
    }
  }
  for (double& v : q.q) v /= total;
  return q.induced_law();
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled: both paths run serially\n");
#endif

  const ObservedLaw law = bench_law();
  AssumptionSet base;
  base.monotonicity = true;

  for (int points : {64, 256, 1024}) {
    std::vector<double> grid;
    grid.reserve(points);
    for (int i = 0; i < points; ++i) grid.push_back((i + 1.0) / points);

    auto start = clock_type::now();
    const auto parallel = bounds_curve(law, base, RiskCap::NeverTakerTreated, grid);
    const double t_par = seconds_since(start);

    start = clock_type::now();
    const auto serial = bounds_curve_serial(law, base, RiskCap::NeverTakerTreated, grid);
    const double t_ser = seconds_since(start);

    double max_diff = 0.0;
    for (int i = 0; i < points; ++i) {
      if (parallel[i].second.status != serial[i].second.status) max_diff = 1.0;
      if (parallel[i].second.status == BoundsStatus::Bounded)
        max_diff = std::max({max_diff,
                             std::abs(parallel[i].second.lower - serial[i].second.lower),
                             std::abs(parallel[i].second.upper - serial[i].second.upper)});
    }
    std::printf("bounds_curve %5d points: parallel %8.3fs, serial %8.3fs, speedup %5.2fx, max diff %g\n",
                points, t_par, t_ser, t_par > 0 ? t_ser / t_par : 0.0, max_diff);
  }

  TwoPhysicianScenario s;
  s.p_diabetic = 0.2;
  s.p_active = 0.5;
  for (int d = 0; d < 2; ++d)
    for (int a = 0; a < 2; ++a)
      for (int x = 0; x < 2; ++x) s.outcome_model.at(d, a, x) = 0.1 + 0.1 * (4 * d + 2 * a + x);

  for (std::int64_t n : {std::int64_t{1} << 20, std::int64_t{1} << 23, std::int64_t{1} << 25}) {
    const auto start = clock_type::now();
    const TrialCounts counts = sample_two_physician(s, 99, n);
    const double t = seconds_since(start);
    std::printf("sample_two_physician n=%9lld: %8.3fs (%6.1f M draws/s), total %lld\n",
                static_cast<long long>(n), t, n / t / 1e6,
                static_cast<long long>(counts.arm_total(0) + counts.arm_total(1)));
  }
  return 0;
}
