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

#include "towermarket/selfish.hpp"

#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using Catch::Matchers::WithinAbs;
using namespace towermarket;
using testutil::desk_config;
using testutil::desk_prices;

namespace {

SelfishSweepResult desk_sweep(int op) {
  return selfish_sweep(desk_config(), desk_prices(), op, 0.05, 0.1, 0.01);
}

size_t grid_index(const SelfishSweepResult& sweep, double eps) {
  for (size_t i = 0; i < sweep.epsilon_grid.size(); ++i)
    if (std::abs(sweep.epsilon_grid[i] - eps) < 1e-9) return i;
  FAIL("epsilon " << eps << " not in emitted grid");
  return 0;
}

}  // namespace

TEST_CASE("operator 1 sweep under a five percent budget") {
  SelfishSweepResult sweep = desk_sweep(1);

  REQUIRE(sweep.op == 1);
  REQUIRE_THAT(sweep.epsilon_star, WithinAbs(0.28, 1e-12));
  REQUIRE_THAT(sweep.first_run_end, WithinAbs(0.01, 1e-12));
  REQUIRE_THAT(sweep.scan_end, WithinAbs(0.99, 1e-12));
  REQUIRE(sweep.epsilon_star_refined > 0.2845);
  REQUIRE(sweep.epsilon_star_refined < 0.2856);

  // the path runs one grid point past the supremum
  REQUIRE(sweep.epsilon_grid.size() == 30);
  REQUIRE_THAT(sweep.epsilon_grid.back(), WithinAbs(0.29, 1e-12));

  // at zero deviation every ratio is one
  for (double ratio : sweep.revenue_ratios_path[0]) REQUIRE(ratio == 1.0);
  REQUIRE(sweep.shares_path[0] == std::vector<double>{0.25, 0.25, 0.5});

  // operator 1 reaches three quarters of the market from eps = 0.26 on
  size_t from = grid_index(sweep, 0.26);
  for (size_t i = from; i < sweep.shares_path.size(); ++i)
    REQUIRE(sweep.shares_path[i][0] == 0.75);
  REQUIRE(sweep.shares_path[from - 1][0] < 0.75);

  // operator 2 is pushed out of the market from eps = 0.05 on
  size_t out = grid_index(sweep, 0.05);
  for (size_t i = out; i < sweep.shares_path.size(); ++i)
    REQUIRE(sweep.shares_path[i][1] == 0.0);
  REQUIRE(sweep.shares_path[out - 1][1] > 0.0);

  // deviator share never shrinks along the scan
  for (size_t i = 1; i < sweep.shares_path.size(); ++i)
    REQUIRE(sweep.shares_path[i][0] >= sweep.shares_path[i - 1][0]);

  // revenue ratio peak: levels 3 and 4 held at the discounted exponent
  double peak = 0.0;
  size_t peak_index = 0;
  for (size_t i = 0; i < sweep.revenue_ratios_path.size(); ++i) {
    if (sweep.revenue_ratios_path[i][0] > peak) {
      peak = sweep.revenue_ratios_path[i][0];
      peak_index = i;
    }
  }
  REQUIRE(peak_index == grid_index(sweep, 0.05));
  double b1 = desk_prices().exponents[0];
  double d = (1.0 - sweep.epsilon_grid[peak_index]) * b1;
  double expected = (std::pow(d, 3) + std::pow(d, 4)) / std::pow(b1, 4);
  REQUIRE_THAT(peak, WithinAbs(expected, 1e-12));
  REQUIRE_THAT(peak, WithinAbs(1.549599, 1e-6));
}

TEST_CASE("operator 2 sweep under a five percent budget") {
  SelfishSweepResult sweep = desk_sweep(2);
  REQUIRE_THAT(sweep.epsilon_star, WithinAbs(0.32, 1e-12));
  REQUIRE(sweep.epsilon_star_refined > 0.3199);
  REQUIRE(sweep.epsilon_star_refined < 0.3212);
  REQUIRE(sweep.epsilon_grid.size() == 34);
}

TEST_CASE("operator 3 sweep under a five percent budget") {
  SelfishSweepResult sweep = desk_sweep(3);
  REQUIRE_THAT(sweep.epsilon_star, WithinAbs(0.36, 1e-12));
  REQUIRE(sweep.epsilon_star_refined > 0.3631);
  REQUIRE(sweep.epsilon_star_refined < 0.3645);
  // compliance dips at 0.04 and recovers later, so the first run ends early
  REQUIRE_THAT(sweep.first_run_end, WithinAbs(0.03, 1e-12));
  REQUIRE(sweep.epsilon_star > sweep.first_run_end + 0.01);
}

TEST_CASE("zero budget admits only strict gains") {
  // With budget 0 a point complies only when the discounter's revenue
  // strictly beats its baseline. The origin itself fails that (loss 0 is not
  // < 0), so first_run_end stays 0; the supremum sits at 0.27, the last step
  // where holding levels 2-4 at the discounted exponent still out-earns the
  // single baseline level.
  SelfishSweepResult sweep = selfish_sweep(desk_config(), desk_prices(), 1, 0.0, 0.1, 0.01);
  REQUIRE(sweep.first_run_end == 0.0);
  REQUIRE(sweep.epsilon_star == 0.27);
  REQUIRE(sweep.epsilon_star_refined >= 0.27);
  REQUIRE(sweep.epsilon_star_refined < 0.28);

  MarketOutcome baseline = assign_market(desk_config(), desk_prices());
  MarketOutcome at_star = deviated_market(desk_config(), desk_prices(), 1, 0.27, 0.1);
  REQUIRE(at_star.revenues[0] > baseline.revenues[0]);
  MarketOutcome past = deviated_market(desk_config(), desk_prices(), 1, 0.28, 0.1);
  REQUIRE(past.revenues[0] < baseline.revenues[0]);
}

TEST_CASE("deviated utility reduces to the plain utility at zero epsilon") {
  MarketConfig config = desk_config();
  PriceVector prices = desk_prices();
  for (int q = 1; q <= 4; ++q)
    for (int j = 1; j <= 3; ++j)
      REQUIRE(deviated_utility(config, prices, 2, 0.0, 0.1, q, j) ==
              utility(config, prices, q, j));

  MarketOutcome still = deviated_market(config, prices, 2, 0.0, 0.1);
  MarketOutcome base = assign_market(config, prices);
  REQUIRE(still.assignment == base.assignment);
  REQUIRE(still.revenues == base.revenues);
}

TEST_CASE("sweep input validation") {
  MarketConfig config = desk_config();
  PriceVector prices = desk_prices();

  REQUIRE_THROWS_AS(selfish_sweep(config, prices, 1, -0.01, 0.1, 0.01), std::invalid_argument);
  REQUIRE_THROWS_AS(selfish_sweep(config, prices, 1, 0.05, 1.0, 0.01), std::invalid_argument);
  REQUIRE_THROWS_AS(selfish_sweep(config, prices, 1, 0.05, 0.1, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(deviated_utility(config, prices, 1, 1.0, 0.1, 1, 1), std::domain_error);
  REQUIRE_THROWS_AS(deviated_market(config, prices, 0, 0.1, 0.1), std::out_of_range);

  // a deviator that starts with nothing has no loss ratio to track
  REQUIRE_THROWS_AS(selfish_sweep(config, testutil::rounded_prices(), 1, 0.05, 0.1, 0.01),
                    std::domain_error);
}
