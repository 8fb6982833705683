#include "ivpi/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ivpi {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int require_binary(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw InputError(std::string("missing or non-integer field '") + key + "'");
  const int v = j[key].get<int>();
  if (v != 0 && v != 1)
    throw InputError(std::string("field '") + key + "' must be 0 or 1, got " +
                     std::to_string(v));
  return v;
}

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw InputError(std::string("missing or non-numeric field '") + key + "'");
  return j[key].get<double>();
}

json parse_json(const std::string& text, const std::string& path) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError("malformed JSON in " + path);
  return j;
}

TrialCounts aggregate_units(const std::string& text, const std::string& path) {
  TrialCounts counts{};
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool any = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    int vals[3];
    std::size_t pos = 0;
    bool ok = true;
    for (int f = 0; f < 3 && ok; ++f) {
      const std::size_t end = f < 2 ? line.find(',', pos) : line.size();
      if (f < 2 && end == std::string::npos) {
        ok = false;
        break;
      }
      std::string field = line.substr(pos, end - pos);
      // trim
      const auto b = field.find_first_not_of(" \t");
      const auto e = field.find_last_not_of(" \t");
      field = b == std::string::npos ? "" : field.substr(b, e - b + 1);
      if (field == "0")
        vals[f] = 0;
      else if (field == "1")
        vals[f] = 1;
      else
        ok = false;
      pos = end + 1;
    }
    if (!ok) {
      if (lineno == 1) continue;  // header
      throw InputError(path + ":" + std::to_string(lineno) +
                       ": expected three comma-separated 0/1 values 'z,x,y'");
    }
    ++counts.at(vals[0], vals[1], vals[2]);
    any = true;
  }
  if (!any) throw InputError(path + ": no unit records found");
  return counts;
}

}  // namespace

TrialCounts counts_from_json(const json& j) {
  if (!j.contains("cells") || !j["cells"].is_array())
    throw InputError("counts input must contain a 'cells' array");
  TrialCounts counts{};
  std::array<bool, 8> seen{};
  for (const auto& cell : j["cells"]) {
    const int z = require_binary(cell, "z");
    const int x = require_binary(cell, "x");
    const int y = require_binary(cell, "y");
    if (!cell.contains("count") || !cell["count"].is_number_integer())
      throw InputError("missing or non-integer field 'count'");
    const std::int64_t n = cell["count"].get<std::int64_t>();
    if (n < 0) throw InputError("negative count in cell");
    const int idx = cell_index(z, x, y);
    if (seen[idx]) throw InputError("duplicate cell in counts input");
    seen[idx] = true;
    counts.at(z, x, y) = n;
  }
  for (bool s : seen)
    if (!s) throw InputError("counts input must list all 8 (z,x,y) cells");
  return counts;
}

json counts_to_json(const TrialCounts& counts) {
  json cells = json::array();
  for (int z = 0; z < 2; ++z)
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        cells.push_back({{"z", z}, {"x", x}, {"y", y}, {"count", counts.at(z, x, y)}});
  return {{"cells", cells}};
}

ObservedLaw law_from_json(const json& j) {
  if (!j.contains("law") || !j["law"].is_array())
    throw InputError("law input must contain a 'law' array");
  ObservedLaw law;
  std::array<bool, 8> seen{};
  for (const auto& entry : j["law"]) {
    const int z = require_binary(entry, "z");
    const int x = require_binary(entry, "x");
    const int y = require_binary(entry, "y");
    const double p = require_number(entry, "p");
    const int idx = cell_index(z, x, y);
    if (seen[idx]) throw InputError("duplicate cell in law input");
    seen[idx] = true;
    law.at(z, x, y) = p;
  }
  for (bool s : seen)
    if (!s) throw InputError("law input must list all 8 (z,x,y) cells");
  return law;
}

json law_to_json(const ObservedLaw& law) {
  json entries = json::array();
  for (int z = 0; z < 2; ++z)
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        entries.push_back({{"z", z}, {"x", x}, {"y", y}, {"p", law.at(z, x, y)}});
  return entries;
}

AnalysisInput read_analysis_input(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw InputError(path + ": empty input file");
  AnalysisInput input;
  if (text[first] == '{') {
    const json j = parse_json(text, path);
    if (j.contains("cells")) {
      input.counts = counts_from_json(j);
      input.law = law_from_counts(*input.counts);
      input.kind = "counts";
    } else if (j.contains("law")) {
      input.law = law_from_json(j);
      input.kind = "law";
      const ValidationReport report = validate_law(input.law, kUserLawTol);
      if (!report.ok()) throw InputError(path + ": " + report.findings.front().message);
    } else {
      throw InputError(path + ": JSON input must contain 'cells' or 'law'");
    }
  } else {
    input.counts = aggregate_units(text, path);
    const ValidationReport report = validate_counts(*input.counts);
    if (!report.ok()) throw InputError(path + ": " + report.findings.front().message);
    input.law = law_from_counts(*input.counts);
    input.kind = "units";
  }
  return input;
}

Scenario read_scenario(const std::string& path) {
  const json j = parse_json(read_file(path), path);
  if (!j.contains("type") || !j["type"].is_string())
    throw InputError(path + ": scenario file must carry a 'type' string");
  const std::string type = j["type"].get<std::string>();
  if (type == "two_physician") {
    TwoPhysicianScenario s;
    s.p_diabetic = require_number(j, "p_diabetic");
    s.p_active = require_number(j, "p_active");
    s.covariate_dependence = j.contains("covariate_dependence")
                                 ? require_number(j, "covariate_dependence")
                                 : 0.0;
    s.instrument_split = j.contains("instrument_split") ? require_number(j, "instrument_split") : 0.5;
    if (!j.contains("outcome_model") || !j["outcome_model"].is_array())
      throw InputError(path + ": two_physician scenario needs an 'outcome_model' array");
    std::array<bool, 8> seen{};
    for (const auto& entry : j["outcome_model"]) {
      const int d = require_binary(entry, "diabetic");
      const int a = require_binary(entry, "active");
      const int x = require_binary(entry, "treated");
      const int idx = 4 * d + 2 * a + x;
      if (seen[idx]) throw InputError(path + ": duplicate outcome_model entry");
      seen[idx] = true;
      s.outcome_model.at(d, a, x) = require_number(entry, "risk");
    }
    for (bool sn : seen)
      if (!sn) throw InputError(path + ": outcome_model must cover all 8 (diabetic,active,treated) cells");
    return s;
  }
  if (type == "proxy") {
    ProxyScenario s;
    s.threshold = require_number(j, "threshold");
    s.baseline_risk = j.contains("baseline_risk") ? require_number(j, "baseline_risk") : 0.0;
    if (!j.contains("levels") || !j["levels"].is_array())
      throw InputError(path + ": proxy scenario needs a 'levels' array");
    for (const auto& entry : j["levels"]) {
      ProxyLevel lvl;
      lvl.preference = require_number(entry, "preference");
      lvl.weight = require_number(entry, "weight");
      lvl.uptake_unencouraged = require_number(entry, "uptake_unencouraged");
      lvl.uptake_encouraged = require_number(entry, "uptake_encouraged");
      lvl.effect = require_number(entry, "effect");
      s.levels.push_back(lvl);
    }
    return s;
  }
  throw InputError(path + ": unknown scenario type '" + type + "'");
}

json validation_to_json(const ValidationReport& report) {
  json findings = json::array();
  for (const auto& f : report.findings)
    findings.push_back({{"fatal", f.fatal}, {"message", f.message}});
  return {{"ok", report.ok()}, {"findings", findings}};
}

namespace {

json numeric(double v) {
  return {{"value", v}, {"display", format_fixed(v, display_decimals())}};
}

json optional_numeric(const std::optional<double>& v) {
  if (!v) return nullptr;
  return numeric(*v);
}

}  // namespace

json iv_estimates_to_json(const IvEstimates& est) {
  return {{"itt_y", numeric(est.itt_y)},
          {"itt_x", numeric(est.itt_x)},
          {"wald", optional_numeric(est.wald)},
          {"weak_instrument", est.weak_instrument},
          {"complier_share", numeric(est.complier_share)},
          {"always_taker_share", numeric(est.always_taker_share)},
          {"never_taker_share", numeric(est.never_taker_share)}};
}

json assumptions_to_json(const AssumptionSet& assumptions) {
  json j = {{"monotonicity", assumptions.monotonicity}};
  j["cap_never_taker_treated"] =
      assumptions.cap_never_taker_treated ? json(*assumptions.cap_never_taker_treated) : json(nullptr);
  j["cap_always_taker_untreated"] = assumptions.cap_always_taker_untreated
                                        ? json(*assumptions.cap_always_taker_untreated)
                                        : json(nullptr);
  return j;
}

json bounds_result_to_json(const BoundsResult& result) {
  if (result.status == BoundsStatus::Infeasible)
    return {{"status", "infeasible"}};
  return {{"status", "bounded"}, {"lower", numeric(result.lower)}, {"upper", numeric(result.upper)}};
}

json scenario_report_to_json(const ScenarioReport& report) {
  json j = {{"shares",
             {{"always_taker", numeric(report.shares.always_taker)},
              {"never_taker", numeric(report.shares.never_taker)},
              {"complier", numeric(report.shares.complier)},
              {"defier", numeric(report.shares.defier)}}},
            {"true_ate", numeric(report.true_ate)},
            {"true_late", optional_numeric(report.true_late)},
            {"iv_estimand", optional_numeric(report.iv_estimand)},
            {"defier_share", numeric(report.defier_share)},
            {"bias_vs_late", optional_numeric(report.bias_vs_late)},
            {"bias_vs_ate", optional_numeric(report.bias_vs_ate)},
            {"law", law_to_json(report.induced_law)}};
  if (!report.level_weights.empty()) j["level_weights"] = report.level_weights;
  return j;
}

int display_decimals() {
  if (const char* env = std::getenv("IVPI_PRECISION")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 0 && v <= 12) return static_cast<int>(v);
  }
  return 2;
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

}  // namespace ivpi
