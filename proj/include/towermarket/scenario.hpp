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

#ifndef TOWERMARKET_SCENARIO_HPP_
#define TOWERMARKET_SCENARIO_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "towermarket/coordination.hpp"
#include "towermarket/market.hpp"
#include "towermarket/optimize.hpp"
#include "towermarket/outsourcing.hpp"

// Scenario files are strict: an unknown key anywhere is a parse failure, not
// a warning. Scenarios written for a newer tool must not silently lose
// meaning in an older one.

namespace towermarket {

// Malformed input: bad JSON, wrong types, unknown keys.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Well-formed input whose values violate a model invariant.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A solver ran and certified that no admissible answer exists.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SweepSection {
  int deviator = 1;
  double budget = 0.05;
  double reputation_feedback = 0.1;
  double step = 0.01;
};

struct CoordinationSection {
  std::vector<double> deltas;
  Regime regime = Regime::kTowercoOperated;
  double reputation_feedback = 0.1;
};

struct GameSection {
  int points_per_player = 50;
  std::optional<double> price_bound;
};

struct OptimizerSection {
  int grid_points = 60;
  int refine_rounds = 3;
  double boundary_offset = 1e-6;
};

struct ScenarioFile {
  std::optional<MarketConfig> market;
  std::optional<std::vector<double>> explicit_prices;
  // Non-empty when "prices" was the string "solve:<problem>".
  std::string solve_problem;
  std::optional<OutsourcingScenario> outsourcing;
  std::optional<CoordinationSection> coordination;
  std::optional<SweepSection> sweep;
  std::optional<GameSection> game;
  OptimizerSection optimizer;
};

namespace detail {

inline void require_keys(const nlohmann::json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ParseError("unknown key \"" + it.key() + "\" in " + where);
    }
  }
}

inline double get_number(const nlohmann::json& obj, const std::string& where,
                         const char* key) {
  if (!obj.contains(key)) {
    throw ParseError(where + " is missing required key \"" + key + "\"");
  }
  const nlohmann::json& v = obj.at(key);
  if (!v.is_number()) {
    throw ParseError(where + "." + key + " must be a number");
  }
  return v.get<double>();
}

inline double get_number_or(const nlohmann::json& obj, const std::string& where,
                            const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const nlohmann::json& v = obj.at(key);
  if (!v.is_number()) {
    throw ParseError(where + "." + key + " must be a number");
  }
  return v.get<double>();
}

inline int get_int(const nlohmann::json& obj, const std::string& where,
                   const char* key) {
  if (!obj.contains(key)) {
    throw ParseError(where + " is missing required key \"" + key + "\"");
  }
  const nlohmann::json& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw ParseError(where + "." + key + " must be an integer");
  }
  return v.get<int>();
}

inline int get_int_or(const nlohmann::json& obj, const std::string& where,
                      const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const nlohmann::json& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw ParseError(where + "." + key + " must be an integer");
  }
  return v.get<int>();
}

inline std::vector<double> get_number_array(const nlohmann::json& v,
                                            const std::string& where) {
  if (!v.is_array()) throw ParseError(where + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const nlohmann::json& e : v) {
    if (!e.is_number()) {
      throw ParseError(where + " must contain only numbers");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

inline MarketConfig parse_market(const nlohmann::json& obj) {
  if (!obj.is_object()) throw ParseError("\"market\" must be an object");
  require_keys(obj, "\"market\"",
               {"num_operators", "num_quality_levels", "quality_fractions",
                "popularity_index", "reputation_weight", "price_exponent_bound",
                "price_scale", "user_count"});
  MarketConfig config;
  config.num_operators = get_int(obj, "market", "num_operators");
  config.num_quality_levels = get_int(obj, "market", "num_quality_levels");
  if (!obj.contains("quality_fractions")) {
    throw ParseError("market is missing required key \"quality_fractions\"");
  }
  config.quality_fractions =
      get_number_array(obj.at("quality_fractions"), "market.quality_fractions");
  config.popularity_index = get_number(obj, "market", "popularity_index");
  config.reputation_weight = get_number(obj, "market", "reputation_weight");
  config.price_exponent_bound =
      get_number(obj, "market", "price_exponent_bound");
  config.price_scale = get_number_or(obj, "market", "price_scale", 1.0);
  config.user_count =
      static_cast<long long>(get_number_or(obj, "market", "user_count", 1.0));
  return config;
}

inline OutsourcingScenario parse_outsourcing(const nlohmann::json& obj) {
  if (!obj.is_object()) throw ParseError("\"outsourcing\" must be an object");
  require_keys(obj, "\"outsourcing\"",
               {"tower_cost", "towerco_cost", "fee_fraction", "fees",
                "reputation_feedback"});
  OutsourcingScenario scenario;
  scenario.tower_cost = get_number(obj, "outsourcing", "tower_cost");
  scenario.towerco_cost = get_number(obj, "outsourcing", "towerco_cost");
  scenario.fee_fraction =
      get_number_or(obj, "outsourcing", "fee_fraction", 0.5);
  if (obj.contains("fees")) {
    scenario.fees =
        get_number_array(obj.at("fees"), "outsourcing.fees");
  }
  scenario.reputation_feedback =
      get_number_or(obj, "outsourcing", "reputation_feedback", 0.0);
  return scenario;
}

inline CoordinationSection parse_coordination(const nlohmann::json& obj) {
  if (!obj.is_object()) throw ParseError("\"coordination\" must be an object");
  require_keys(obj, "\"coordination\"",
               {"deltas", "regime", "reputation_feedback"});
  CoordinationSection section;
  if (!obj.contains("deltas")) {
    throw ParseError("coordination is missing required key \"deltas\"");
  }
  section.deltas = get_number_array(obj.at("deltas"), "coordination.deltas");
  if (obj.contains("regime")) {
    const nlohmann::json& r = obj.at("regime");
    if (!r.is_string()) {
      throw ParseError("coordination.regime must be a string");
    }
    std::string name = r.get<std::string>();
    if (name == "towerco_operated") {
      section.regime = Regime::kTowercoOperated;
    } else if (name == "smart_operator_operated") {
      section.regime = Regime::kSmartOperatorOperated;
    } else {
      throw ParseError("coordination.regime must be \"towerco_operated\" or "
                       "\"smart_operator_operated\"");
    }
  }
  section.reputation_feedback =
      get_number_or(obj, "coordination", "reputation_feedback", 0.1);
  return section;
}

inline SweepSection parse_sweep(const nlohmann::json& obj) {
  if (!obj.is_object()) throw ParseError("\"sweep\" must be an object");
  require_keys(obj, "\"sweep\"",
               {"operator", "budget", "reputation_feedback", "step"});
  SweepSection section;
  section.deviator = get_int(obj, "sweep", "operator");
  section.budget = get_number(obj, "sweep", "budget");
  section.reputation_feedback =
      get_number_or(obj, "sweep", "reputation_feedback", 0.1);
  section.step = get_number_or(obj, "sweep", "step", 0.01);
  return section;
}

inline GameSection parse_game(const nlohmann::json& obj) {
  if (!obj.is_object()) throw ParseError("\"game\" must be an object");
  require_keys(obj, "\"game\"", {"points_per_player", "price_bound"});
  GameSection section;
  section.points_per_player = get_int(obj, "game", "points_per_player");
  if (obj.contains("price_bound")) {
    section.price_bound = get_number(obj, "game", "price_bound");
  }
  return section;
}

inline OptimizerSection parse_optimizer(const nlohmann::json& obj) {
  if (!obj.is_object()) throw ParseError("\"optimizer\" must be an object");
  require_keys(obj, "\"optimizer\"",
               {"grid_points", "refine_rounds", "boundary_offset"});
  OptimizerSection section;
  section.grid_points = get_int_or(obj, "optimizer", "grid_points", 60);
  section.refine_rounds = get_int_or(obj, "optimizer", "refine_rounds", 3);
  section.boundary_offset =
      get_number_or(obj, "optimizer", "boundary_offset", 1e-6);
  return section;
}

}  // namespace detail

inline ScenarioFile parse_scenario(const nlohmann::json& root) {
  if (!root.is_object()) {
    throw ParseError("scenario root must be a JSON object");
  }
  detail::require_keys(root, "the scenario root",
                       {"market", "prices", "outsourcing", "coordination",
                        "sweep", "game", "optimizer"});
  ScenarioFile scenario;
  if (root.contains("market")) {
    scenario.market = detail::parse_market(root.at("market"));
  }
  if (root.contains("prices")) {
    const nlohmann::json& p = root.at("prices");
    if (p.is_string()) {
      std::string s = p.get<std::string>();
      const std::string prefix = "solve:";
      if (s.rfind(prefix, 0) != 0) {
        throw ParseError("\"prices\" string must start with \"solve:\"");
      }
      std::string problem = s.substr(prefix.size());
      if (problem != "sum" && problem != "bargaining" && problem != "ordered") {
        throw ParseError("unknown solve target \"" + problem + "\"");
      }
      scenario.solve_problem = problem;
    } else if (p.is_array()) {
      scenario.explicit_prices = detail::get_number_array(p, "\"prices\"");
    } else {
      throw ParseError("\"prices\" must be an array or a \"solve:\" string");
    }
  }
  if (root.contains("outsourcing")) {
    scenario.outsourcing = detail::parse_outsourcing(root.at("outsourcing"));
  }
  if (root.contains("coordination")) {
    scenario.coordination =
        detail::parse_coordination(root.at("coordination"));
  }
  if (root.contains("sweep")) {
    scenario.sweep = detail::parse_sweep(root.at("sweep"));
  }
  if (root.contains("game")) {
    scenario.game = detail::parse_game(root.at("game"));
  }
  if (root.contains("optimizer")) {
    scenario.optimizer = detail::parse_optimizer(root.at("optimizer"));
  }
  return scenario;
}

inline ScenarioFile parse_scenario_text(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return parse_scenario(root);
}

// Invariant checks shared by every command. Throws ValidationError.
inline const MarketConfig& require_market(const ScenarioFile& scenario) {
  if (!scenario.market.has_value()) {
    throw ValidationError("scenario has no \"market\" section");
  }
  try {
    scenario.market->validate();
  } catch (const std::exception& e) {
    throw ValidationError(e.what());
  }
  return *scenario.market;
}

}  // namespace towermarket

#endif  // TOWERMARKET_SCENARIO_HPP_
