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

#include "towermarket/scenario.hpp"

#include <string>

#include <catch2/catch_amalgamated.hpp>

using namespace towermarket;

namespace {

const char* kFullDocument = R"json({
  "market": {
    "num_operators": 3,
    "num_quality_levels": 4,
    "quality_fractions": [0.25, 0.25, 0.25, 0.25],
    "popularity_index": 2.0,
    "reputation_weight": 0.2,
    "price_exponent_bound": 1.5,
    "price_scale": 30.0,
    "user_count": 1000000
  },
  "prices": [1.16635, 1.2382145653750154, 1.5],
  "outsourcing": {
    "tower_cost": 0.1,
    "towerco_cost": 0.1,
    "fee_fraction": 0.5,
    "reputation_feedback": 0.1
  },
  "coordination": {
    "deltas": [0.01, 0.05, 0.1],
    "regime": "smart_operator_operated",
    "reputation_feedback": 0.1
  },
  "sweep": {
    "operator": 1,
    "budget": 0.05,
    "reputation_feedback": 0.1,
    "step": 0.01
  },
  "game": {
    "points_per_player": 50,
    "price_bound": 1.5
  },
  "optimizer": {
    "grid_points": 60,
    "refine_rounds": 3,
    "boundary_offset": 1e-6
  }
})json";

}  // namespace

TEST_CASE("full scenario document round-trips into typed sections") {
  ScenarioFile scenario = parse_scenario_text(kFullDocument);

  REQUIRE(scenario.market.has_value());
  REQUIRE(scenario.market->num_operators == 3);
  REQUIRE(scenario.market->num_quality_levels == 4);
  REQUIRE(scenario.market->price_scale == 30.0);
  REQUIRE(scenario.market->user_count == 1000000);

  REQUIRE(scenario.explicit_prices.has_value());
  REQUIRE(scenario.explicit_prices->size() == 3);
  REQUIRE(scenario.solve_problem.empty());

  REQUIRE(scenario.outsourcing.has_value());
  REQUIRE(scenario.outsourcing->fee_fraction == 0.5);
  REQUIRE_FALSE(scenario.outsourcing->fees.has_value());

  REQUIRE(scenario.coordination.has_value());
  REQUIRE(scenario.coordination->regime == Regime::kSmartOperatorOperated);
  REQUIRE(scenario.coordination->deltas == std::vector<double>{0.01, 0.05, 0.1});

  REQUIRE(scenario.sweep.has_value());
  REQUIRE(scenario.sweep->deviator == 1);
  REQUIRE(scenario.sweep->step == 0.01);

  REQUIRE(scenario.game.has_value());
  REQUIRE(scenario.game->points_per_player == 50);
  REQUIRE(scenario.game->price_bound == 1.5);

  REQUIRE(scenario.optimizer.grid_points == 60);
  REQUIRE(scenario.optimizer.boundary_offset == 1e-6);

  REQUIRE(&require_market(scenario) == &*scenario.market);
}

TEST_CASE("solve string selects the optimizer instead of explicit prices") {
  ScenarioFile scenario = parse_scenario_text(R"({"prices": "solve:ordered"})");
  REQUIRE_FALSE(scenario.explicit_prices.has_value());
  REQUIRE(scenario.solve_problem == "ordered");

  REQUIRE(parse_scenario_text(R"({"prices": "solve:sum"})").solve_problem == "sum");
  REQUIRE(parse_scenario_text(R"({"prices": "solve:bargaining"})").solve_problem == "bargaining");

  REQUIRE_THROWS_AS(parse_scenario_text(R"({"prices": "solve:newton"})"), ParseError);
  REQUIRE_THROWS_AS(parse_scenario_text(R"({"prices": "ordered"})"), ParseError);
  REQUIRE_THROWS_AS(parse_scenario_text(R"({"prices": 42})"), ParseError);
}

TEST_CASE("unknown keys are rejected at every level") {
  REQUIRE_THROWS_AS(parse_scenario_text(R"({"markets": {}})"), ParseError);
  REQUIRE_THROWS_AS(parse_scenario_text(R"({"market": {"num_operators": 3, "foo": 1}})"),
                    ParseError);
  REQUIRE_THROWS_AS(parse_scenario_text(R"({"sweep": {"operator": 1, "budget": 0.05, "oops": 2}})"),
                    ParseError);
  REQUIRE_THROWS_AS(parse_scenario_text(R"({"game": {"points_per_player": 50, "bound": 1.5}})"),
                    ParseError);
  REQUIRE_THROWS_AS(parse_scenario_text(R"({"optimizer": {"grid": 60}})"), ParseError);
  REQUIRE_THROWS_AS(
      parse_scenario_text(R"({"outsourcing": {"tower_cost": 0.1, "towerco_cost": 0.1, "x": 1}})"),
      ParseError);
  REQUIRE_THROWS_AS(parse_scenario_text(R"({"coordination": {"deltas": [0.05], "mode": "x"}})"),
                    ParseError);

  // the error message names the offending key
  try {
    parse_scenario_text(R"({"market": {"num_operators": 3, "foo": 1}})");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    REQUIRE(std::string(e.what()).find("foo") != std::string::npos);
  }
}

TEST_CASE("type mismatches are parse errors") {
  REQUIRE_THROWS_AS(parse_scenario_text(R"({"market": {"num_operators": 3.5}})"), ParseError);
  REQUIRE_THROWS_AS(parse_scenario_text(R"({"market": {"popularity_index": "two"}})"), ParseError);
  REQUIRE_THROWS_AS(
      parse_scenario_text(R"({"market": {"quality_fractions": [0.5, "half"]}})"), ParseError);
  REQUIRE_THROWS_AS(parse_scenario_text(R"({"market": 7})"), ParseError);
  REQUIRE_THROWS_AS(parse_scenario_text(R"({"coordination": {"deltas": [0.05], "regime": 5}})"),
                    ParseError);
  REQUIRE_THROWS_AS(
      parse_scenario_text(R"({"coordination": {"deltas": [0.05], "regime": "other"}})"),
      ParseError);
  REQUIRE_THROWS_AS(parse_scenario_text(R"({"sweep": {"operator": 1.5, "budget": 0.05}})"),
                    ParseError);
}

TEST_CASE("missing required keys are parse errors") {
  REQUIRE_THROWS_AS(parse_scenario_text(R"({"market": {"num_operators": 3}})"), ParseError);
  REQUIRE_THROWS_AS(parse_scenario_text(R"({"sweep": {"budget": 0.05}})"), ParseError);
  REQUIRE_THROWS_AS(parse_scenario_text(R"({"coordination": {"regime": "towerco_operated"}})"),
                    ParseError);
  REQUIRE_THROWS_AS(parse_scenario_text(R"({"outsourcing": {"tower_cost": 0.1}})"), ParseError);
  REQUIRE_THROWS_AS(parse_scenario_text(R"({"game": {}})"), ParseError);
}

TEST_CASE("omitted optional keys fall back to defaults") {
  ScenarioFile scenario = parse_scenario_text(R"json({
    "sweep": {"operator": 2, "budget": 0.03},
    "coordination": {"deltas": [0.05]},
    "outsourcing": {"tower_cost": 0.1, "towerco_cost": 0.05},
    "game": {"points_per_player": 20},
    "optimizer": {}
  })json");

  REQUIRE(scenario.sweep->deviator == 2);
  REQUIRE(scenario.sweep->reputation_feedback == 0.1);
  REQUIRE(scenario.sweep->step == 0.01);
  REQUIRE(scenario.coordination->regime == Regime::kTowercoOperated);
  REQUIRE(scenario.coordination->reputation_feedback == 0.1);
  REQUIRE(scenario.outsourcing->fee_fraction == 0.5);
  REQUIRE(scenario.outsourcing->reputation_feedback == 0.0);
  REQUIRE_FALSE(scenario.game->price_bound.has_value());
  REQUIRE(scenario.optimizer.grid_points == 60);
  REQUIRE(scenario.optimizer.refine_rounds == 3);
  REQUIRE(scenario.optimizer.boundary_offset == 1e-6);
}

TEST_CASE("malformed documents are parse errors") {
  REQUIRE_THROWS_AS(parse_scenario_text(""), ParseError);
  REQUIRE_THROWS_AS(parse_scenario_text("{"), ParseError);
  REQUIRE_THROWS_AS(parse_scenario_text("not json at all"), ParseError);
  REQUIRE_THROWS_AS(parse_scenario_text("[1, 2, 3]"), ParseError);
  REQUIRE_THROWS_AS(parse_scenario_text("null"), ParseError);
}

TEST_CASE("require_market distinguishes absence from invalidity") {
  ScenarioFile empty = parse_scenario_text("{}");
  REQUIRE_THROWS_AS(require_market(empty), ValidationError);

  // parses fine, fails semantic validation: the popularity index must
  // exceed one
  ScenarioFile bad = parse_scenario_text(R"json({
    "market": {
      "num_operators": 3,
      "num_quality_levels": 4,
      "quality_fractions": [0.25, 0.25, 0.25, 0.25],
      "popularity_index": 0.5,
      "reputation_weight": 0.2,
      "price_exponent_bound": 1.5
    }
  })json");
  REQUIRE_THROWS_AS(require_market(bad), ValidationError);
}
