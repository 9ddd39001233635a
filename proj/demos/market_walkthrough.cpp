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

// Walks through the core pipeline on a three-operator market: assignment at
// given prices, revenue shares, and the tower outsourcing ledger.

#include <cmath>
#include <cstdio>

#include "towermarket/market.hpp"
#include "towermarket/outsourcing.hpp"

int main() {
  using namespace towermarket;

  MarketConfig config;
  config.num_operators = 3;
  config.num_quality_levels = 4;
  config.quality_fractions = {0.25, 0.25, 0.25, 0.25};
  config.popularity_index = 2.0;
  config.reputation_weight = 0.2;
  config.price_exponent_bound = 1.5;

  PriceVector prices{{1.16635, std::cbrt(1.8984), 1.5}};
  MarketOutcome outcome = assign_market(config, prices);

  std::printf("level -> operator:");
  for (int op : outcome.assignment) std::printf(" %d", op);
  std::printf("\n");
  for (int j = 0; j < config.num_operators; ++j) {
    std::printf("operator %d: revenue %.6f share %.2f", j + 1, outcome.revenues[j],
                outcome.shares[j]);
    if (outcome.arpus[j].has_value()) std::printf(" arpu %.6f", *outcome.arpus[j]);
    std::printf("\n");
  }

  OutsourcingScenario towers;
  towers.tower_cost = 0.1;
  towers.towerco_cost = 0.1;
  towers.fee_fraction = 0.5;
  ValueReport report = outsource(outcome, towers);
  std::printf("towerco revenue %.6f, value created %.6f, %s\n", report.towerco_revenue,
              report.value_created, report.profitable ? "profitable" : "not profitable");
  return 0;
}
