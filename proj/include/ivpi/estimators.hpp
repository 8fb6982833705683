#pragma once

#include <optional>

#include "ivpi/model.hpp"

// Point estimators and the principal-strata sensitivity decomposition of the
// global average treatment effect.
namespace ivpi {

inline constexpr double kWeakInstrumentTol = 1e-9;

struct IvEstimates {
  double itt_y = 0.0;  // P(Y=1|Z=1) - P(Y=1|Z=0)
  double itt_x = 0.0;  // P(X=1|Z=1) - P(X=1|Z=0)
  std::optional<double> wald;  // itt_y / itt_x; absent for a weak instrument
  bool weak_instrument = false;
  double complier_share = 0.0;      // = itt_x under monotonicity
  double always_taker_share = 0.0;  // P(X=1|Z=0)
  double never_taker_share = 0.0;   // P(X=0|Z=1)
};

IvEstimates iv_estimates(const ObservedLaw& law);

struct EffectInterval {
  double lo = 0.0;
  double hi = 0.0;
};

// User-hypothesized stratum-level effect ranges for the unidentified strata.
struct StrataEffectRanges {
  EffectInterval always_taker_effect{-1.0, 1.0};
  EffectInterval never_taker_effect{-1.0, 1.0};

  void validate() const;  // throws std::invalid_argument outside [-1,1] or lo > hi
};

// Decomposition ATE = pi_CO * LATE + pi_AT * ATE_AT + pi_NT * ATE_NT with the
// LATE identified by the Wald ratio under monotonicity and the other two
// stratum effects ranged by the caller. Throws std::domain_error when the
// instrument is weak (Wald undefined).
EffectInterval ate_sensitivity(const ObservedLaw& law, const StrataEffectRanges& ranges);

}  // namespace ivpi
