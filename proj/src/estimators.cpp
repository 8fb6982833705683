#include "ivpi/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace ivpi {

IvEstimates iv_estimates(const ObservedLaw& law) {
  IvEstimates est;
  est.itt_y = law.prob_outcome(1) - law.prob_outcome(0);
  est.itt_x = law.prob_treated(1) - law.prob_treated(0);
  est.always_taker_share = law.prob_treated(0);
  est.never_taker_share = 1.0 - law.prob_treated(1);
  est.complier_share = est.itt_x;
  if (std::abs(est.itt_x) > kWeakInstrumentTol)
    est.wald = est.itt_y / est.itt_x;
  else
    est.weak_instrument = true;
  return est;
}

void StrataEffectRanges::validate() const {
  for (const auto& r : {always_taker_effect, never_taker_effect}) {
    if (!(r.lo >= -1.0) || !(r.hi <= 1.0) || r.lo > r.hi)
      throw std::invalid_argument("stratum effect range must satisfy -1 <= lo <= hi <= 1");
  }
}

EffectInterval ate_sensitivity(const ObservedLaw& law, const StrataEffectRanges& ranges) {
  ranges.validate();
  const IvEstimates est = iv_estimates(law);
  if (!est.wald) throw std::domain_error("ate_sensitivity: weak instrument, Wald undefined");
  const double core = est.complier_share * *est.wald;
  return {core + est.always_taker_share * ranges.always_taker_effect.lo +
              est.never_taker_share * ranges.never_taker_effect.lo,
          core + est.always_taker_share * ranges.always_taker_effect.hi +
              est.never_taker_share * ranges.never_taker_effect.hi};
}

}  // namespace ivpi
