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

#include "towermarket/optimize.hpp"

#include <algorithm>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using Catch::Matchers::WithinAbs;
using namespace towermarket;
using testutil::desk_config;

namespace {

OptimizerSettings settings_for(OrderingMode mode) {
  OptimizerSettings s;
  s.ordering_mode = mode;
  return s;
}

double max_feasible_sup_product(const std::vector<AssignmentRegion>& regions) {
  double sup = 0.0;
  for (const AssignmentRegion& r : regions)
    if (r.feasible) sup = std::max(sup, r.sup_product);
  return sup;
}

}  // namespace

TEST_CASE("ordered product optimum on the desk configuration") {
  MarketConfig config = desk_config();
  Optimum opt = optimize_ordered_product(config, settings_for(OrderingMode::kFullyOrdered));

  REQUIRE_FALSE(opt.degenerate);
  REQUIRE_THAT(opt.prices.exponents[0], WithinAbs(1.2781184067796605, 1e-9));
  REQUIRE_THAT(opt.prices.exponents[1], WithinAbs(1.3341935028248588, 1e-9));
  REQUIRE_THAT(opt.prices.exponents[2], WithinAbs(1.5, 1e-9));
  REQUIRE_THAT(opt.objective, WithinAbs(0.37135742822150997, 1e-9));
  REQUIRE(std::is_sorted(opt.prices.exponents.begin(), opt.prices.exponents.end()));

  // algebraic cross-check: the optimum cannot exceed the best region supremum
  // and must come within 1e-3 of it
  auto regions = enumerate_assignment_regions(config, OrderingMode::kFullyOrdered);
  double sup = max_feasible_sup_product(regions);
  REQUIRE(opt.objective <= sup + 1e-9);
  REQUIRE(sup - opt.objective <= 1e-3);
}

TEST_CASE("bargaining optimum coincides with the ordered one on the desk configuration") {
  MarketConfig config = desk_config();
  Optimum opt = optimize_bargaining(config, settings_for(OrderingMode::kTopDominates));

  REQUIRE_FALSE(opt.degenerate);
  REQUIRE_THAT(opt.prices.exponents[0], WithinAbs(1.2781184067796605, 1e-6));
  REQUIRE_THAT(opt.prices.exponents[1], WithinAbs(1.3341935028248588, 1e-6));
  REQUIRE_THAT(opt.prices.exponents[2], WithinAbs(1.5, 1e-9));
  REQUIRE_THAT(opt.objective, WithinAbs(0.37135742822150997, 1e-9));

  auto regions = enumerate_assignment_regions(config, OrderingMode::kTopDominates);
  double sup = max_feasible_sup_product(regions);
  REQUIRE(opt.objective <= sup + 1e-9);
  REQUIRE(sup - opt.objective <= 1e-3);
}

TEST_CASE("sum optimum hands the whole market to the top operator") {
  MarketConfig config = desk_config();
  Optimum opt = optimize_sum(config, settings_for(OrderingMode::kNone));

  // 0.25 * (1.5 + 1.5^2 + 1.5^3 + 1.5^4)
  REQUIRE_THAT(opt.objective, WithinAbs(3.046875, 1e-12));
  REQUIRE(opt.degenerate);
  REQUIRE_THAT(opt.prices.exponents[2], WithinAbs(1.5, 1e-12));
  REQUIRE(opt.outcome.assignment == std::vector<int>{3, 3, 3, 3});
  REQUIRE(opt.outcome.revenues[0] == 0.0);
  REQUIRE(opt.outcome.revenues[1] == 0.0);

  double sup_sum = 0.0;
  for (const AssignmentRegion& r : enumerate_assignment_regions(config, OrderingMode::kNone))
    if (r.feasible) sup_sum = std::max(sup_sum, r.sup_sum);
  REQUIRE_THAT(opt.objective, WithinAbs(sup_sum, 1e-9));
}

TEST_CASE("low popularity index collapses the product optimum") {
  MarketConfig config = desk_config();
  config.popularity_index = 1.05;
  Optimum opt = optimize_ordered_product(config, settings_for(OrderingMode::kFullyOrdered));
  REQUIRE(opt.degenerate);
  REQUIRE(opt.objective == 0.0);
}

TEST_CASE("region suprema bound the revenue product of sampled price vectors") {
  MarketConfig config = desk_config();
  auto regions = enumerate_assignment_regions(config, OrderingMode::kFullyOrdered);
  REQUIRE(regions.size() == 81);

  testutil::Rng rng(7);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> b(3);
    for (double& v : b) v = rng.uniform(1.000001, 1.5);
    std::sort(b.begin(), b.end());
    if (!(b[0] < b[1] && b[1] < b[2])) continue;

    MarketOutcome out = assign_market(config, PriceVector{b});
    if (std::any_of(out.assignment.begin(), out.assignment.end(),
                    [](int a) { return a == kUnassigned; }))
      continue;

    auto it = std::find_if(regions.begin(), regions.end(), [&](const AssignmentRegion& r) {
      return r.winners == out.assignment;
    });
    REQUIRE(it != regions.end());
    // the sampled point realizes this winner map, so the region is nonempty
    // and its outer box caps every operator's revenue
    REQUIRE(it->feasible);
    double product = 1.0;
    for (double r : out.revenues) product *= r;
    REQUIRE(product <= it->sup_product + 1e-9);
    for (int j = 0; j < 3; ++j) {
      REQUIRE(b[j] <= it->upper[j] + 1e-9);
      REQUIRE(b[j] >= it->lower[j] - 1e-9);
    }
    ++checked;
  }
  REQUIRE(checked > 150);
}

TEST_CASE("optimizer output is invariant to the reporting scale") {
  MarketConfig config = desk_config();
  Optimum base = optimize_ordered_product(config, settings_for(OrderingMode::kFullyOrdered));

  MarketConfig scaled = config;
  scaled.price_scale = 30.0;
  scaled.user_count = 1000000;
  Optimum opt = optimize_ordered_product(scaled, settings_for(OrderingMode::kFullyOrdered));

  REQUIRE(opt.prices.exponents == base.prices.exponents);
  REQUIRE(opt.objective == base.objective);
}

TEST_CASE("optimizer and region enumeration reject invalid requests") {
  MarketConfig config = desk_config();

  SECTION("settings bounds") {
    OptimizerSettings s = settings_for(OrderingMode::kFullyOrdered);
    s.coarse_grid_points = 1;
    REQUIRE_THROWS_AS(optimize_ordered_product(config, s), std::invalid_argument);
    s = settings_for(OrderingMode::kFullyOrdered);
    s.refine_rounds = -1;
    REQUIRE_THROWS_AS(optimize_ordered_product(config, s), std::invalid_argument);
    s = settings_for(OrderingMode::kFullyOrdered);
    s.boundary_offset = 0.0;
    REQUIRE_THROWS_AS(optimize_ordered_product(config, s), std::invalid_argument);
    s.boundary_offset = 1e-2;
    REQUIRE_THROWS_AS(optimize_ordered_product(config, s), std::invalid_argument);
  }
  SECTION("mode mismatches") {
    REQUIRE_THROWS_AS(optimize_sum(config, settings_for(OrderingMode::kFullyOrdered)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(optimize_bargaining(config, settings_for(OrderingMode::kNone)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(optimize_ordered_product(config, settings_for(OrderingMode::kNone)),
                      std::invalid_argument);
  }
  SECTION("single-operator product problems") {
    MarketConfig solo = config;
    solo.num_operators = 1;
    solo.num_quality_levels = 1;
    solo.quality_fractions = {1.0};
    REQUIRE_THROWS_AS(optimize_bargaining(solo, settings_for(OrderingMode::kTopDominates)),
                      std::invalid_argument);
  }
  SECTION("region enumeration size guard") {
    MarketConfig wide = config;
    wide.num_operators = 5;
    REQUIRE_THROWS_AS(enumerate_assignment_regions(wide, OrderingMode::kFullyOrdered),
                      std::length_error);
  }
}
