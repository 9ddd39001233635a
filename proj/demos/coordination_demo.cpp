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

// Contrasts a lone price cut with a coordinated one. First a selfish sweep
// finds how far one operator can discount before the group objects, then the
// coordinated fixed point shares a sponsored reduction across all three.

#include <cmath>
#include <cstdio>

#include "towermarket/coordination.hpp"
#include "towermarket/market.hpp"
#include "towermarket/selfish.hpp"

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

  SelfishSweepResult sweep = selfish_sweep(config, prices, 1, 0.05, 0.1, 0.01);
  std::printf("selfish sweep, operator 1: tolerated cut %.2f (refined %.6f)\n",
              sweep.epsilon_star, sweep.epsilon_star_refined);

  CoordinationProblem problem;
  problem.config = config;
  problem.baseline_prices = prices;
  problem.baseline = assign_market(config, prices);
  problem.eta = 0.1;
  problem.regime = Regime::kTowercoOperated;

  for (double delta : {0.01, 0.05, 0.10}) {
    problem.delta = delta;
    CoordinationResult result = solve_fixed_point(problem);
    std::printf("delta %.2f: eps = (%.6f, %.6f, %.6f), global ratios = (%.4f, %.4f, %.4f)\n",
                delta, result.epsilon[0], result.epsilon[1], result.epsilon[2],
                result.global_ratios[0], result.global_ratios[1], result.global_ratios[2]);
  }
  return 0;
}
