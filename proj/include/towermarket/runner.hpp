// Copyright 2026 The TowerMarket Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TOWERMARKET_RUNNER_HPP_
#define TOWERMARKET_RUNNER_HPP_

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "towermarket/coordination.hpp"
#include "towermarket/grid_game.hpp"
#include "towermarket/market.hpp"
#include "towermarket/optimize.hpp"
#include "towermarket/outsourcing.hpp"
#include "towermarket/report.hpp"
#include "towermarket/scenario.hpp"
#include "towermarket/selfish.hpp"

// Command layer shared by the CLI and the tests. Everything here is pure:
// a request plus a parsed scenario goes in, report bytes come out. Running
// the same request twice must produce byte-identical output, which is why
// no timing, host, or path information enters the reports.

namespace towermarket {

struct RunRequest {
  std::string command;
  std::string argument;             // optimize problem or figure id
  std::string mode = "fixed-point"; // coordinate solver for the headline block
  std::optional<int> grid_points;   // optimizer coarse grid override
};

struct RunOutput {
  nlohmann::ordered_json report;
  // (file name, file bytes); the CLI writes these under --out
  std::vector<std::pair<std::string, std::string>> files;
  int exit_code = 0;
  std::string diagnostic;
};

namespace detail {

inline nlohmann::ordered_json json_doubles(const std::vector<double>& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (double x : v) arr.push_back(x);
  return arr;
}

inline nlohmann::ordered_json json_ints(const std::vector<int>& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (int x : v) arr.push_back(x);
  return arr;
}

inline nlohmann::ordered_json json_arpus(
    const std::vector<std::optional<double>>& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const std::optional<double>& x : v) {
    if (x.has_value())
      arr.push_back(*x);
    else
      arr.push_back(nullptr);
  }
  return arr;
}

inline nlohmann::ordered_json outcome_block(const MarketOutcome& outcome) {
  nlohmann::ordered_json block;
  block["assignment"] = json_ints(outcome.assignment);
  block["revenues"] = json_doubles(outcome.revenues);
  block["shares"] = json_doubles(outcome.shares);
  block["arpus"] = json_arpus(outcome.arpus);
  return block;
}

inline nlohmann::ordered_json report_skeleton(const std::string& command,
                                              const std::string& scenario_bytes) {
  nlohmann::ordered_json report;
  report["command"] = command;
  report["scenario_digest"] = digest_hex(scenario_bytes);
  report["tool_version"] = kToolVersion;
  return report;
}

inline std::string report_text(const nlohmann::ordered_json& report) {
  return report.dump(2) + "\n";
}

inline OptimizerSettings make_settings(const OptimizerSection& section,
                                       OrderingMode mode,
                                       const std::optional<int>& grid_override) {
  OptimizerSettings settings;
  settings.coarse_grid_points = grid_override.value_or(section.grid_points);
  settings.refine_rounds = section.refine_rounds;
  settings.boundary_offset = section.boundary_offset;
  settings.ordering_mode = mode;
  try {
    settings.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  return settings;
}

struct ResolvedPrices {
  PriceVector prices;
  std::string source;  // "explicit" or "solve:<problem>"
  std::optional<Optimum> optimum;
};

inline Optimum solve_named(const MarketConfig& config, const std::string& problem,
                           const OptimizerSection& section,
                           const std::optional<int>& grid_override) {
  if (problem == "sum") {
    return optimize_sum(config,
                        make_settings(section, OrderingMode::kNone, grid_override));
  }
  if (problem == "bargaining") {
    return optimize_bargaining(
        config, make_settings(section, OrderingMode::kTopDominates, grid_override));
  }
  if (problem == "ordered") {
    return optimize_ordered_product(
        config, make_settings(section, OrderingMode::kFullyOrdered, grid_override));
  }
  throw ValidationError("unknown optimization problem \"" + problem + "\"");
}

inline ResolvedPrices resolve_prices(const ScenarioFile& scenario,
                                     const MarketConfig& config,
                                     const std::optional<int>& grid_override) {
  ResolvedPrices resolved;
  if (scenario.explicit_prices.has_value()) {
    resolved.prices.exponents = *scenario.explicit_prices;
    resolved.source = "explicit";
    try {
      resolved.prices.validate(config);
    } catch (const std::exception& e) {
      throw ValidationError(e.what());
    }
    return resolved;
  }
  if (!scenario.solve_problem.empty()) {
    resolved.optimum =
        solve_named(config, scenario.solve_problem, scenario.optimizer, grid_override);
    resolved.prices = resolved.optimum->prices;
    resolved.source = "solve:" + scenario.solve_problem;
    return resolved;
  }
  throw ValidationError("scenario has no \"prices\" entry");
}

// Exponent value a revenue pins down, given the levels the operator won.
// The map beta -> sum of f_q * beta^q over won levels is strictly increasing
// for beta > 0, so the preimage is unique when it exists.
inline std::optional<double> implied_exponent(const MarketConfig& config,
                                              const MarketOutcome& outcome, int op) {
  std::vector<int> won;
  for (int q = 1; q <= config.num_quality_levels; ++q)
    if (outcome.assignment[q - 1] == op) won.push_back(q);
  if (won.empty()) return std::nullopt;
  double target = outcome.revenues[op - 1];
  auto value = [&](double beta) {
    double s = 0.0;
    for (int q : won) s += config.quality_fractions[q - 1] * ipow(beta, q);
    return s;
  };
  double lo = 0.0, hi = config.price_exponent_bound + 1.0;
  while (value(hi) < target) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (value(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline std::string sweep_csv(const MarketConfig& config,
                             const SelfishSweepResult& sweep) {
  CsvWriter csv;
  std::vector<std::string> header{"epsilon", "abscissa"};
  for (int j = 1; j <= config.num_operators; ++j)
    header.push_back("nu_" + std::to_string(j));
  for (int j = 1; j <= config.num_operators; ++j)
    header.push_back("r_" + std::to_string(j));
  csv.row(header);
  for (size_t i = 0; i < sweep.epsilon_grid.size(); ++i) {
    double eps = sweep.epsilon_grid[i];
    std::vector<std::string> row{format_double(eps),
                                 format_double(100.0 * eps + 1.0)};
    for (double nu : sweep.shares_path[i]) row.push_back(format_double(nu));
    for (double r : sweep.revenue_ratios_path[i]) row.push_back(format_double(r));
    csv.row(row);
  }
  return csv.str();
}

inline nlohmann::ordered_json coordination_result_block(
    const CoordinationResult& result) {
  nlohmann::ordered_json block;
  block["epsilon"] = json_doubles(result.epsilon);
  block["reduced_revenues"] = json_doubles(result.reduced_revenues);
  block["revenue_ratios"] = json_doubles(result.revenue_ratios);
  block["global_ratios"] = json_doubles(result.global_ratios);
  block["offsets"] = json_doubles(result.offsets);
  block["assignment_preserved"] = result.assignment_preserved;
  return block;
}

inline const GameSection& require_game(const ScenarioFile& scenario) {
  if (!scenario.game.has_value()) {
    throw ValidationError("scenario has no \"game\" section");
  }
  return *scenario.game;
}

inline ActionGrid game_grid(const MarketConfig& config, const GameSection& game) {
  double bound = game.price_bound.value_or(config.price_exponent_bound);
  try {
    return build_grid(game.points_per_player, bound);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

}  // namespace detail

inline RunOutput run_baseline(const ScenarioFile& scenario,
                              const std::string& scenario_bytes,
                              const RunRequest& request) {
  const MarketConfig& config = require_market(scenario);
  detail::ResolvedPrices resolved =
      detail::resolve_prices(scenario, config, request.grid_points);
  MarketOutcome outcome = assign_market(config, resolved.prices);
  ScaledReport scaled = scale_report(outcome, config);

  nlohmann::ordered_json report =
      detail::report_skeleton("baseline", scenario_bytes);
  nlohmann::ordered_json& result = report["result"];
  result["prices"] = detail::json_doubles(resolved.prices.exponents);
  result["price_source"] = resolved.source;
  result.update(detail::outcome_block(outcome));
  result["scaled_revenues"] = detail::json_doubles(scaled.absolute_revenues);

  RunOutput out;
  out.report = report;
  out.files.emplace_back("baseline_report.json", detail::report_text(report));
  return out;
}

inline RunOutput run_optimize(const ScenarioFile& scenario,
                              const std::string& scenario_bytes,
                              const RunRequest& request) {
  const MarketConfig& config = require_market(scenario);
  if (request.argument.empty()) {
    throw ValidationError("optimize needs a problem name: sum, bargaining, ordered");
  }
  Optimum optimum = detail::solve_named(config, request.argument,
                                        scenario.optimizer, request.grid_points);

  nlohmann::ordered_json report =
      detail::report_skeleton("optimize", scenario_bytes);
  nlohmann::ordered_json& result = report["result"];
  result["problem"] = request.argument;
  result["prices"] = detail::json_doubles(optimum.prices.exponents);
  result["objective"] = optimum.objective;
  result["degenerate"] = optimum.degenerate;
  result.update(detail::outcome_block(optimum.outcome));

  RunOutput out;
  out.report = report;
  out.files.emplace_back("optimize_" + request.argument + "_report.json",
                         detail::report_text(report));
  if (optimum.degenerate) {
    out.exit_code = 4;
    out.diagnostic = "optimum is degenerate: at least one operator earns zero revenue";
  }
  return out;
}

inline RunOutput run_outsource(const ScenarioFile& scenario,
                               const std::string& scenario_bytes,
                               const RunRequest& request) {
  const MarketConfig& config = require_market(scenario);
  if (!scenario.outsourcing.has_value()) {
    throw ValidationError("scenario has no \"outsourcing\" section");
  }
  const OutsourcingScenario& deal = *scenario.outsourcing;
  try {
    deal.validate(config.num_operators);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  detail::ResolvedPrices resolved =
      detail::resolve_prices(scenario, config, request.grid_points);
  MarketOutcome outcome = assign_market(config, resolved.prices);
  ValueReport value = outsource(outcome, deal);

  nlohmann::ordered_json gains = nlohmann::ordered_json::array();
  bool ratio_defined = deal.fee_fraction > 0.0 && deal.fee_fraction < 1.0;
  for (int j = 1; j <= config.num_operators; ++j) {
    if (ratio_defined && outcome.revenues[j - 1] > 0.0)
      gains.push_back(gain_ratio(outcome, deal, j));
    else
      gains.push_back(nullptr);
  }

  nlohmann::ordered_json report =
      detail::report_skeleton("outsource", scenario_bytes);
  nlohmann::ordered_json& result = report["result"];
  result["prices"] = detail::json_doubles(resolved.prices.exponents);
  result["price_source"] = resolved.source;
  result["revenues"] = detail::json_doubles(outcome.revenues);
  result["fees"] = detail::json_doubles(deal.resolved_fees(config.num_operators));
  result["operator_totals"] = detail::json_doubles(value.operator_totals);
  result["towerco_revenue"] = value.towerco_revenue;
  result["value_created"] = value.value_created;
  result["profitable"] = value.profitable;
  result["gain_ratios"] = gains;

  RunOutput out;
  out.report = report;
  out.files.emplace_back("outsource_report.json", detail::report_text(report));
  return out;
}

inline SelfishSweepResult run_sweep_engine(const ScenarioFile& scenario,
                                           const MarketConfig& config,
                                           const PriceVector& prices) {
  const SweepSection& section = *scenario.sweep;
  if (section.deviator < 1 || section.deviator > config.num_operators) {
    throw ValidationError("sweep operator index out of range");
  }
  if (!(section.step > 0.0)) throw ValidationError("sweep step must be positive");
  if (!(section.budget >= 0.0)) throw ValidationError("sweep budget must be non-negative");
  if (!(section.reputation_feedback >= 0.0 && section.reputation_feedback < 1.0)) {
    throw ValidationError("sweep reputation_feedback must be in [0, 1)");
  }
  return selfish_sweep(config, prices, section.deviator, section.budget,
                       section.reputation_feedback, section.step);
}

inline RunOutput run_sweep(const ScenarioFile& scenario,
                           const std::string& scenario_bytes,
                           const RunRequest& request) {
  const MarketConfig& config = require_market(scenario);
  if (!scenario.sweep.has_value()) {
    throw ValidationError("scenario has no \"sweep\" section");
  }
  detail::ResolvedPrices resolved =
      detail::resolve_prices(scenario, config, request.grid_points);
  SelfishSweepResult sweep = run_sweep_engine(scenario, config, resolved.prices);

  nlohmann::ordered_json report = detail::report_skeleton("sweep", scenario_bytes);
  nlohmann::ordered_json& result = report["result"];
  result["operator"] = sweep.op;
  result["budget"] = scenario.sweep->budget;
  result["reputation_feedback"] = scenario.sweep->reputation_feedback;
  result["step"] = scenario.sweep->step;
  result["prices"] = detail::json_doubles(resolved.prices.exponents);
  result["epsilon_star"] = sweep.epsilon_star;
  result["epsilon_star_refined"] = sweep.epsilon_star_refined;
  result["first_run_end"] = sweep.first_run_end;
  result["scan_end"] = sweep.scan_end;
  nlohmann::ordered_json path = nlohmann::ordered_json::array();
  for (size_t i = 0; i < sweep.epsilon_grid.size(); ++i) {
    nlohmann::ordered_json point;
    point["epsilon"] = sweep.epsilon_grid[i];
    point["shares"] = detail::json_doubles(sweep.shares_path[i]);
    point["revenue_ratios"] = detail::json_doubles(sweep.revenue_ratios_path[i]);
    path.push_back(point);
  }
  result["path"] = path;

  RunOutput out;
  out.report = report;
  out.files.emplace_back("sweep_report.json", detail::report_text(report));
  out.files.emplace_back("sweep_path.csv", detail::sweep_csv(config, sweep));
  return out;
}

inline RunOutput run_coordinate(const ScenarioFile& scenario,
                                const std::string& scenario_bytes,
                                const RunRequest& request) {
  const MarketConfig& config = require_market(scenario);
  if (!scenario.coordination.has_value()) {
    throw ValidationError("scenario has no \"coordination\" section");
  }
  const CoordinationSection& section = *scenario.coordination;
  if (section.deltas.empty()) {
    throw ValidationError("coordination.deltas must not be empty");
  }
  if (request.mode != "fixed-point" && request.mode != "barrier-descent") {
    throw ValidationError("mode must be fixed-point or barrier-descent");
  }
  detail::ResolvedPrices resolved =
      detail::resolve_prices(scenario, config, request.grid_points);
  MarketOutcome baseline = assign_market(config, resolved.prices);

  nlohmann::ordered_json report =
      detail::report_skeleton("coordinate", scenario_bytes);
  nlohmann::ordered_json& result = report["result"];
  result["regime"] = section.regime == Regime::kTowercoOperated
                         ? "towerco_operated"
                         : "smart_operator_operated";
  result["reputation_feedback"] = section.reputation_feedback;
  result["mode"] = request.mode;
  result["prices"] = detail::json_doubles(resolved.prices.exponents);
  result["baseline_revenues"] = detail::json_doubles(baseline.revenues);
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (double delta : section.deltas) {
    CoordinationProblem problem;
    problem.config = config;
    problem.baseline_prices = resolved.prices;
    problem.baseline = baseline;
    problem.delta = delta;
    problem.eta = section.reputation_feedback;
    problem.regime = section.regime;
    try {
      problem.validate();
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
    CoordinationResult fixed = solve_fixed_point(problem);
    CoordinationResult barrier = solve_barrier_descent(problem);
    nlohmann::ordered_json run;
    run["delta"] = delta;
    // The absolute gain delta corresponds to, back-solved so a fee-based
    // description of the same deal can be cross-checked against it.
    run["implied_fee_margin"] = delta * baseline.revenues.back();
    run["fixed_point"] = detail::coordination_result_block(fixed);
    run["barrier_descent"] = detail::coordination_result_block(barrier);
    run["selected"] = request.mode == "fixed-point"
                          ? detail::coordination_result_block(fixed)
                          : detail::coordination_result_block(barrier);
    runs.push_back(run);
  }
  result["runs"] = runs;

  RunOutput out;
  out.report = report;
  out.files.emplace_back("coordinate_report.json", detail::report_text(report));
  return out;
}

inline RunOutput run_game(const ScenarioFile& scenario,
                          const std::string& scenario_bytes,
                          const RunRequest&) {
  const MarketConfig& config = require_market(scenario);
  const GameSection& game = detail::require_game(scenario);
  ActionGrid grid = detail::game_grid(config, game);
  if (config.num_operators != 3) {
    throw ValidationError("the grid game needs exactly three operators");
  }
  LexicographicTrace trace = solve_lexicographic_traced(config, grid);
  const GridEquilibrium& eq = trace.equilibrium;

  nlohmann::ordered_json report = detail::report_skeleton("game", scenario_bytes);
  nlohmann::ordered_json& result = report["result"];
  result["points_per_player"] = grid.points_per_player;
  result["price_bound"] = grid.bound;
  result["indices"] = nlohmann::ordered_json::array({eq.indices[0], eq.indices[1], eq.indices[2]});
  result["betas"] = nlohmann::ordered_json::array({eq.betas[0], eq.betas[1], eq.betas[2]});
  result["payoffs"] = nlohmann::ordered_json::array({eq.payoffs[0], eq.payoffs[1], eq.payoffs[2]});
  result["eligible"] = eq.eligible;
  result["nash_certificate"] = nlohmann::ordered_json::array(
      {eq.nash_certificate[0], eq.nash_certificate[1], eq.nash_certificate[2]});
  result["landscape_size"] = static_cast<int>(trace.pool.size());
  result["refined_size"] = static_cast<int>(trace.refined.size());

  PriceVector eq_prices{{eq.betas[0], eq.betas[1], eq.betas[2]}};
  MarketOutcome eq_outcome = assign_market(config, eq_prices);
  std::optional<double> implied = detail::implied_exponent(config, eq_outcome, 1);
  nlohmann::ordered_json beta_check;
  beta_check["bottom_index"] = eq.indices[0];
  beta_check["grid_value"] = eq.betas[0];
  if (implied.has_value())
    beta_check["payoff_implied_value"] = *implied;
  else
    beta_check["payoff_implied_value"] = nullptr;
  bool consistent = implied.has_value() && std::abs(*implied - eq.betas[0]) < 1e-6;
  beta_check["consistent"] = consistent;
  std::string note;
  if (eq.indices[0] > 1) {
    double adjacent = grid.beta(eq.indices[0] - 1);
    beta_check["adjacent_lower_value"] = adjacent;
    note = "grid formula and equilibrium payoff both give " +
           format_double(eq.betas[0]) + " at index " +
           std::to_string(eq.indices[0]) + "; the adjacent lower grid value " +
           format_double(adjacent) + " is inconsistent with that payoff";
  } else {
    beta_check["adjacent_lower_value"] = nullptr;
    note = "bottom equilibrium exponent sits at the first grid point";
  }
  beta_check["note"] = note;
  result["beta_check"] = beta_check;

  RunOutput out;
  out.report = report;
  out.files.emplace_back("game_report.json", detail::report_text(report));
  return out;
}

inline RunOutput run_verify_nash(const ScenarioFile& scenario,
                                 const std::string& scenario_bytes,
                                 const RunRequest&) {
  const MarketConfig& config = require_market(scenario);
  const GameSection& game = detail::require_game(scenario);
  ActionGrid grid = detail::game_grid(config, game);
  if (config.num_operators != 3) {
    throw ValidationError("the grid game needs exactly three operators");
  }
  GridEquilibrium eq = solve_lexicographic(config, grid);

  nlohmann::ordered_json report =
      detail::report_skeleton("verify-nash", scenario_bytes);
  nlohmann::ordered_json& result = report["result"];
  result["indices"] = nlohmann::ordered_json::array({eq.indices[0], eq.indices[1], eq.indices[2]});
  result["betas"] = nlohmann::ordered_json::array({eq.betas[0], eq.betas[1], eq.betas[2]});
  result["payoffs"] = nlohmann::ordered_json::array({eq.payoffs[0], eq.payoffs[1], eq.payoffs[2]});
  result["certificate"] = nlohmann::ordered_json::array(
      {eq.nash_certificate[0], eq.nash_certificate[1], eq.nash_certificate[2]});
  bool all_hold = eq.nash_certificate[0] && eq.nash_certificate[1] && eq.nash_certificate[2];
  result["all_hold"] = all_hold;

  RunOutput out;
  out.report = report;
  out.files.emplace_back("verify_nash_report.json", detail::report_text(report));
  return out;
}

namespace detail {

inline std::string utilities_csv(const MarketConfig& config,
                                 const PriceVector& prices) {
  UtilityTable table = UtilityTable::build(config, prices);
  CsvWriter csv;
  std::vector<std::string> header{"level"};
  for (int j = 1; j <= config.num_operators; ++j)
    header.push_back("u_" + std::to_string(j));
  csv.row(header);
  for (int q = 1; q <= config.num_quality_levels; ++q) {
    std::vector<std::string> row{std::to_string(q)};
    for (int j = 1; j <= config.num_operators; ++j)
      row.push_back(format_double(table.at(q, j)));
    csv.row(row);
  }
  return csv.str();
}

inline std::string prices_csv(const MarketConfig& config,
                              const PriceVector& prices) {
  CsvWriter csv;
  std::vector<std::string> header{"level"};
  for (int j = 1; j <= config.num_operators; ++j)
    header.push_back("p_" + std::to_string(j));
  csv.row(header);
  for (int q = 1; q <= config.num_quality_levels; ++q) {
    std::vector<std::string> row{std::to_string(q)};
    for (int j = 1; j <= config.num_operators; ++j)
      row.push_back(format_double(config.price_scale *
                                  ipow(prices.exponents[j - 1], q)));
    csv.row(row);
  }
  return csv.str();
}

inline std::vector<std::string> tuple_row(int k1, int k2, int k3,
                                          const std::vector<double>& r) {
  bool eligible = r[0] > 0.0 && r[1] > 0.0 && r[2] > 0.0;
  return {std::to_string(k1), std::to_string(k2),     std::to_string(k3),
          format_double(r[0]), format_double(r[1]),   format_double(r[2]),
          eligible ? "1" : "0"};
}

inline std::string landscape_csv(const MarketConfig& config, const ActionGrid& grid) {
  CsvWriter csv;
  csv.row({"k1", "k2", "k3", "R1", "R2", "R3", "eligible"});
  const int m = grid.points_per_player;
  for (int k1 = 1; k1 <= m; ++k1)
    for (int k2 = k1 + 1; k2 <= m; ++k2)
      for (int k3 = k2 + 1; k3 <= m; ++k3)
        csv.row(tuple_row(k1, k2, k3, grid_payoffs(config, grid, {k1, k2, k3})));
  return csv.str();
}

inline std::string pool_csv(const std::vector<LandscapeEntry>& pool) {
  CsvWriter csv;
  csv.row({"k1", "k2", "k3", "R1", "R2", "R3", "eligible"});
  for (const LandscapeEntry& e : pool) {
    std::vector<double> r{e.payoffs[0], e.payoffs[1], e.payoffs[2]};
    csv.row(tuple_row(e.k1, e.k2, e.k3, r));
  }
  return csv.str();
}

inline std::string top_slice_csv(const MarketConfig& config, const ActionGrid& grid,
                                 const GridEquilibrium& eq) {
  CsvWriter csv;
  csv.row({"k3", "beta3", "R1", "R2", "R3", "eligible"});
  for (int k3 = eq.indices[1] + 1; k3 <= grid.points_per_player; ++k3) {
    std::vector<double> r =
        grid_payoffs(config, grid, {eq.indices[0], eq.indices[1], k3});
    bool eligible = r[0] > 0.0 && r[1] > 0.0 && r[2] > 0.0;
    csv.row({std::to_string(k3), format_double(grid.beta(k3)), format_double(r[0]),
             format_double(r[1]), format_double(r[2]), eligible ? "1" : "0"});
  }
  return csv.str();
}

inline std::string mid_slice_csv(const MarketConfig& config, const ActionGrid& grid,
                                 const GridEquilibrium& eq) {
  CsvWriter csv;
  csv.row({"k2", "beta2", "R1", "R2", "R3", "eligible"});
  for (int k2 = eq.indices[0] + 1; k2 < eq.indices[2]; ++k2) {
    std::vector<double> r =
        grid_payoffs(config, grid, {eq.indices[0], k2, eq.indices[2]});
    bool eligible = r[0] > 0.0 && r[1] > 0.0 && r[2] > 0.0;
    csv.row({std::to_string(k2), format_double(grid.beta(k2)), format_double(r[0]),
             format_double(r[1]), format_double(r[2]), eligible ? "1" : "0"});
  }
  return csv.str();
}

}  // namespace detail

inline RunOutput run_figure(const ScenarioFile& scenario,
                            const std::string& scenario_bytes,
                            const RunRequest& request) {
  const MarketConfig& config = require_market(scenario);
  const std::string& id = request.argument;
  RunOutput out;
  (void)scenario_bytes;

  if (id == "utilities" || id == "prices") {
    detail::ResolvedPrices resolved =
        detail::resolve_prices(scenario, config, request.grid_points);
    std::string csv = id == "utilities"
                          ? detail::utilities_csv(config, resolved.prices)
                          : detail::prices_csv(config, resolved.prices);
    out.files.emplace_back("figure_" + id + ".csv", csv);
    return out;
  }
  if (id == "sweep") {
    if (!scenario.sweep.has_value()) {
      throw ValidationError("figure sweep needs a \"sweep\" section");
    }
    detail::ResolvedPrices resolved =
        detail::resolve_prices(scenario, config, request.grid_points);
    SelfishSweepResult sweep = run_sweep_engine(scenario, config, resolved.prices);
    out.files.emplace_back("figure_sweep.csv", detail::sweep_csv(config, sweep));
    return out;
  }
  if (id == "game-landscape" || id == "game-pool" || id == "game-pool-refined" ||
      id == "game-top-slice" || id == "game-mid-slice") {
    const GameSection& game = detail::require_game(scenario);
    ActionGrid grid = detail::game_grid(config, game);
    if (config.num_operators != 3) {
      throw ValidationError("game figures need exactly three operators");
    }
    if (id == "game-landscape") {
      out.files.emplace_back("figure_game_landscape.csv",
                             detail::landscape_csv(config, grid));
      return out;
    }
    LexicographicTrace trace = solve_lexicographic_traced(config, grid);
    if (id == "game-pool") {
      out.files.emplace_back("figure_game_pool.csv", detail::pool_csv(trace.pool));
    } else if (id == "game-pool-refined") {
      out.files.emplace_back("figure_game_pool_refined.csv",
                             detail::pool_csv(trace.refined));
    } else if (id == "game-top-slice") {
      out.files.emplace_back("figure_game_top_slice.csv",
                             detail::top_slice_csv(config, grid, trace.equilibrium));
    } else {
      out.files.emplace_back("figure_game_mid_slice.csv",
                             detail::mid_slice_csv(config, grid, trace.equilibrium));
    }
    return out;
  }
  throw ValidationError("unknown figure id \"" + id + "\"");
}

inline RunOutput run_scenario(const RunRequest& request, const ScenarioFile& scenario,
                              const std::string& scenario_bytes) {
  if (request.command == "baseline") return run_baseline(scenario, scenario_bytes, request);
  if (request.command == "optimize") return run_optimize(scenario, scenario_bytes, request);
  if (request.command == "outsource") return run_outsource(scenario, scenario_bytes, request);
  if (request.command == "sweep") return run_sweep(scenario, scenario_bytes, request);
  if (request.command == "coordinate") return run_coordinate(scenario, scenario_bytes, request);
  if (request.command == "game") return run_game(scenario, scenario_bytes, request);
  if (request.command == "verify-nash") return run_verify_nash(scenario, scenario_bytes, request);
  if (request.command == "figure") return run_figure(scenario, scenario_bytes, request);
  throw ValidationError("unknown command \"" + request.command + "\"");
}

}  // namespace towermarket

#endif  // TOWERMARKET_RUNNER_HPP_
