// ivpi: point estimates, sharp bounds, constrained bounds and sensitivity
// analyses for the average treatment effect in binary instrument / treatment /
// outcome studies, plus a scenario simulator for preference-based instruments.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ivpi/bounds.hpp"
#include "ivpi/estimators.hpp"
#include "ivpi/io.hpp"
#include "ivpi/model.hpp"
#include "ivpi/simulate.hpp"
#include "ivpi/version.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitModelFinding = 2;

json report_skeleton(const ivpi::AnalysisInput& input, const std::string& path) {
  json j;
  j["tool"] = {{"name", "ivpi"}, {"version", ivpi::kVersion}};
  json in = {{"path", path}, {"kind", input.kind}, {"law", ivpi::law_to_json(input.law)}};
  if (input.counts) in["counts"] = ivpi::counts_to_json(*input.counts)["cells"];
  j["input"] = in;
  return j;
}

std::vector<double> parse_sweep(const std::string& spec) {
  double start = 0, stop = 0, step = 0;
  char extra = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &start, &stop, &step, &extra) != 3 || step <= 0 ||
      start > stop)
    throw ivpi::InputError("sweep must be start:stop:step with step > 0 and start <= stop, got '" +
                           spec + "'");
  std::vector<double> grid;
  for (double v = start; v <= stop + 1e-12; v += step) grid.push_back(std::min(v, 1.0));
  return grid;
}

ivpi::EffectInterval parse_range(const std::string& spec, const char* flag) {
  double lo = 0, hi = 0;
  char extra = 0;
  if (std::sscanf(spec.c_str(), "%lf,%lf%c", &lo, &hi, &extra) != 2)
    throw ivpi::InputError(std::string(flag) + " must be 'lo,hi', got '" + spec + "'");
  return {lo, hi};
}

int cmd_check(const std::string& path) {
  const ivpi::AnalysisInput input = ivpi::read_analysis_input(path);
  const ivpi::ValidationReport law_report = ivpi::validate_law(input.law);
  const ivpi::ValidationReport iv_report = ivpi::check_instrumental_inequalities(input.law);
  json report = report_skeleton(input, path);
  report["validation"] = ivpi::validation_to_json(law_report);
  report["instrumental_inequalities"] = ivpi::validation_to_json(iv_report);
  std::cout << report.dump(2) << "\n";
  if (!law_report.ok() || !iv_report.ok()) {
    for (const auto& f : iv_report.findings) std::cerr << f.message << "\n";
    return kExitModelFinding;
  }
  return kExitOk;
}

int cmd_bounds(const std::string& path, const ivpi::AssumptionSet& assumptions,
               const std::optional<std::string>& sweep_nt) {
  const ivpi::AnalysisInput input = ivpi::read_analysis_input(path);
  if (sweep_nt) {
    const std::vector<double> grid = parse_sweep(*sweep_nt);
    ivpi::AssumptionSet base = assumptions;
    base.cap_never_taker_treated.reset();
    const auto curve = ivpi::bounds_curve(input.law, base, ivpi::RiskCap::NeverTakerTreated, grid);
    bool any_infeasible = false;
    std::cout << "#epsilon\tlower\tupper\n";
    for (const auto& [eps, result] : curve) {
      if (result.status == ivpi::BoundsStatus::Bounded) {
        std::cout << eps << "\t" << result.lower << "\t" << result.upper << "\n";
      } else {
        std::cout << eps << "\tinfeasible\tinfeasible\n";
        any_infeasible = true;
      }
    }
    return any_infeasible ? kExitModelFinding : kExitOk;
  }
  const ivpi::BoundsResult result = ivpi::ate_bounds(input.law, assumptions);
  json report = report_skeleton(input, path);
  report["validation"] = ivpi::validation_to_json(ivpi::validate_law(input.law));
  report["bounds"] = json::array(
      {{{"assumptions", ivpi::assumptions_to_json(assumptions)},
        {"result", ivpi::bounds_result_to_json(result)}}});
  std::cout << report.dump(2) << "\n";
  if (result.status == ivpi::BoundsStatus::Infeasible) {
    std::cerr << "model falsified: no response-type distribution reproduces the observed law "
                 "under the stated assumptions\n";
    return kExitModelFinding;
  }
  return kExitOk;
}

int cmd_estimate(const std::string& path) {
  const ivpi::AnalysisInput input = ivpi::read_analysis_input(path);
  const ivpi::IvEstimates est = ivpi::iv_estimates(input.law);
  json report = report_skeleton(input, path);
  report["validation"] = ivpi::validation_to_json(ivpi::validate_law(input.law));
  report["iv"] = ivpi::iv_estimates_to_json(est);
  std::cout << report.dump(2) << "\n";
  if (est.weak_instrument) std::cerr << "weak instrument: Wald estimate undefined\n";
  return kExitOk;
}

int cmd_sensitivity(const std::string& path, const std::string& at_range,
                    const std::string& nt_range) {
  const ivpi::AnalysisInput input = ivpi::read_analysis_input(path);
  ivpi::StrataEffectRanges ranges;
  ranges.always_taker_effect = parse_range(at_range, "--at-range");
  ranges.never_taker_effect = parse_range(nt_range, "--nt-range");
  const ivpi::IvEstimates est = ivpi::iv_estimates(input.law);
  json report = report_skeleton(input, path);
  report["iv"] = ivpi::iv_estimates_to_json(est);
  try {
    ranges.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    const ivpi::EffectInterval interval = ivpi::ate_sensitivity(input.law, ranges);
    report["sensitivity"] = {
        {"always_taker_effect", {ranges.always_taker_effect.lo, ranges.always_taker_effect.hi}},
        {"never_taker_effect", {ranges.never_taker_effect.lo, ranges.never_taker_effect.hi}},
        {"note", "stratum-decomposition form: ATE = pi_CO*LATE + pi_AT*effect_AT + pi_NT*effect_NT; "
                 "monotonicity assumed"},
        {"lower", interval.lo},
        {"upper", interval.hi},
        {"display",
         "[" + ivpi::format_fixed(interval.lo, ivpi::display_decimals()) + ", " +
             ivpi::format_fixed(interval.hi, ivpi::display_decimals()) + "]"}};
    std::cout << report.dump(2) << "\n";
    return kExitOk;
  } catch (const std::domain_error& e) {
    std::cout << report.dump(2) << "\n";
    std::cerr << e.what() << "\n";
    return kExitModelFinding;
  }
}

int cmd_simulate(const std::string& path, const std::string& mode, std::uint64_t seed,
                 std::int64_t n) {
  const ivpi::Scenario scenario = ivpi::read_scenario(path);
  if (mode == "exact") {
    const ivpi::ScenarioReport report = std::visit(
        [](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, ivpi::TwoPhysicianScenario>)
            return ivpi::run_two_physician(s);
          else
            return ivpi::run_proxy(s);
        },
        scenario);
    json j = {{"tool", {{"name", "ivpi"}, {"version", ivpi::kVersion}}},
              {"scenario", path},
              {"report", ivpi::scenario_report_to_json(report)},
              {"law", ivpi::law_to_json(report.induced_law)}};
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }
  if (mode == "mc") {
    const auto* two = std::get_if<ivpi::TwoPhysicianScenario>(&scenario);
    if (!two) throw ivpi::InputError("mc mode supports two_physician scenarios");
    const ivpi::TrialCounts counts = ivpi::sample_two_physician(*two, seed, n);
    json j = ivpi::counts_to_json(counts);
    j["seed"] = seed;
    j["n"] = n;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }
  throw ivpi::InputError("unknown simulate mode '" + mode + "' (expected exact or mc)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"partial identification toolkit for binary-instrument studies"};
  app.require_subcommand(1);

  std::string input_path;
  auto* check = app.add_subcommand("check", "validate a dataset against the instrumental inequalities");
  check->add_option("input", input_path, "counts JSON, law JSON or z,x,y unit records")->required();

  ivpi::AssumptionSet assumptions;
  std::optional<std::string> sweep_nt;
  double cap_nt = -1.0, cap_at = -1.0;
  auto* bounds = app.add_subcommand("bounds", "sharp bounds for the average treatment effect");
  bounds->add_option("input", input_path)->required();
  bounds->add_flag("--monotonicity", assumptions.monotonicity, "assume no defiers");
  bounds->add_option("--cap-nt", cap_nt, "cap on P(Y=1 | never-taker, treated)");
  bounds->add_option("--cap-at", cap_at, "cap on P(Y=1 | always-taker, untreated)");
  bounds->add_option("--sweep-nt", sweep_nt,
                     "sweep the never-taker cap over start:stop:step; emits a TSV table");

  auto* estimate = app.add_subcommand("estimate", "ITT, Wald and compliance-type shares");
  estimate->add_option("input", input_path)->required();

  std::string at_range, nt_range;
  auto* sensitivity =
      app.add_subcommand("sensitivity", "stratum-decomposition sensitivity interval for the ATE");
  sensitivity->add_option("input", input_path)->required();
  sensitivity->add_option("--at-range", at_range, "always-taker effect range lo,hi")->required();
  sensitivity->add_option("--nt-range", nt_range, "never-taker effect range lo,hi")->required();

  std::string mode = "exact";
  std::uint64_t seed = 1;
  std::int64_t n = 1000;
  auto* simulate = app.add_subcommand("simulate", "run a scenario file");
  simulate->add_option("scenario", input_path)->required();
  simulate->add_option("--mode", mode, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
  simulate->add_option("--seed", seed, "root seed for mc mode");
  simulate->add_option("--n", n, "sample size for mc mode");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(input_path);
    if (bounds->parsed()) {
      if (cap_nt >= 0.0) assumptions.cap_never_taker_treated = cap_nt;
      if (cap_at >= 0.0) assumptions.cap_always_taker_untreated = cap_at;
      return cmd_bounds(input_path, assumptions, sweep_nt);
    }
    if (estimate->parsed()) return cmd_estimate(input_path);
    if (sensitivity->parsed()) return cmd_sensitivity(input_path, at_range, nt_range);
    if (simulate->parsed()) return cmd_simulate(input_path, mode, seed, n);
  } catch (const ivpi::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
