#pragma once

#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "ivpi/bounds.hpp"
#include "ivpi/estimators.hpp"
#include "ivpi/model.hpp"
#include "ivpi/simulate.hpp"

// File formats and report serialization. Canonical data input is the
// aggregated-counts JSON; raw unit records arrive as z,x,y CSV lines and are
// aggregated on ingestion. Laws travel inside reports so command output can
// be piped back in.
namespace ivpi {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AnalysisInput {
  std::optional<TrialCounts> counts;
  ObservedLaw law;
  std::string kind;  // "counts", "law" or "units"
};

// Sniffs the format: JSON with "cells" (counts), JSON with "law" (a law or a
// report echoing one), otherwise CSV unit records. Throws InputError with
// line/field diagnostics.
AnalysisInput read_analysis_input(const std::string& path);

using Scenario = std::variant<TwoPhysicianScenario, ProxyScenario>;
Scenario read_scenario(const std::string& path);

TrialCounts counts_from_json(const nlohmann::json& j);
nlohmann::json counts_to_json(const TrialCounts& counts);
ObservedLaw law_from_json(const nlohmann::json& j);
nlohmann::json law_to_json(const ObservedLaw& law);

nlohmann::json validation_to_json(const ValidationReport& report);
nlohmann::json iv_estimates_to_json(const IvEstimates& est);
nlohmann::json assumptions_to_json(const AssumptionSet& assumptions);
nlohmann::json bounds_result_to_json(const BoundsResult& result);
nlohmann::json scenario_report_to_json(const ScenarioReport& report);

// Display decimals: IVPI_PRECISION when set (0..12), else 2.
int display_decimals();
std::string format_fixed(double v, int decimals);

}  // namespace ivpi
