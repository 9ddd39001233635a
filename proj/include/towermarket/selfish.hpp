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

#ifndef TOWERMARKET_SELFISH_HPP_
#define TOWERMARKET_SELFISH_HPP_

#include <cmath>
#include <stdexcept>
#include <vector>

#include "towermarket/market.hpp"

// Unilateral price reduction. One operator discounts its exponent to
// (1 - eps) * b_j, which also lifts its perceived reputation to
// (1 + eta * eps) * a0^j, while everyone else stays put. Sweeping eps maps how
// far the discounter can go before its own revenue loss exceeds the operation
// gain it is trying to finance.

namespace towermarket {

struct SelfishSweepResult {
  int op = 0;  // deviating operator, 1-based
  std::vector<double> epsilon_grid;
  std::vector<std::vector<double>> shares_path;          // per grid point, nu_k
  std::vector<std::vector<double>> revenue_ratios_path;  // per grid point, R_k(eps)/R_k
  // Largest scanned grid point whose relative revenue loss stays strictly
  // below the budget. Compliance is not monotone in eps (revenue dips, then
  // jumps when a level is captured), so this is a supremum over the whole
  // scan, not the end of the initial compliant run.
  double epsilon_star = 0.0;
  double epsilon_star_refined = 0.0;  // bisected to 1e-4 past the last compliant grid point
  double first_run_end = 0.0;  // largest grid point before the first non-compliant one
  double scan_end = 0.0;       // last epsilon the scan examined
};

// Utility under the deviation. The deviator's entry keeps the usual
// reputation/price weighting; everybody else's utility is untouched.
inline double deviated_utility(const MarketConfig& config, const PriceVector& prices,
                               int deviator, double eps, double eta, int level, int op) {
  if (!(eps >= 0.0 && eps < 1.0)) throw std::domain_error("eps must be in [0, 1)");
  if (op != deviator) return utility(config, prices, level, op);
  if (level < 1 || level > config.num_quality_levels)
    throw std::out_of_range("quality level out of range");
  if (op < 1 || op > config.num_operators) throw std::out_of_range("operator index out of range");
  double discounted = (1.0 - eps) * prices.exponents[op - 1];
  return (1.0 + eta * eps) * config.reputation_term(op) -
         (1.0 - config.reputation_weight) * ipow(discounted, level);
}

// Market outcome under a single-operator deviation. The deviator's revenue is
// earned at the discounted exponent.
inline MarketOutcome deviated_market(const MarketConfig& config, const PriceVector& prices,
                                     int deviator, double eps, double eta) {
  if (deviator < 1 || deviator > config.num_operators)
    throw std::out_of_range("operator index out of range");
  const int levels = config.num_quality_levels;
  const int ops = config.num_operators;
  MarketOutcome out;
  out.assignment.assign(levels, kUnassigned);
  out.revenues.assign(ops, 0.0);
  out.shares.assign(ops, 0.0);
  out.arpus.assign(ops, std::nullopt);

  for (int q = 1; q <= levels; ++q) {
    int winner = 1;
    bool tied = false;
    double best = deviated_utility(config, prices, deviator, eps, eta, q, 1);
    for (int j = 2; j <= ops; ++j) {
      double u = deviated_utility(config, prices, deviator, eps, eta, q, j);
      if (u > best) {
        best = u;
        winner = j;
        tied = false;
      } else if (u == best) {
        tied = true;
      }
    }
    if (!tied) {
      double exponent = prices.exponents[winner - 1];
      if (winner == deviator) exponent *= (1.0 - eps);
      out.assignment[q - 1] = winner;
      out.revenues[winner - 1] += config.quality_fractions[q - 1] * ipow(exponent, q);
      out.shares[winner - 1] += config.quality_fractions[q - 1];
    }
  }
  for (int j = 0; j < ops; ++j)
    if (out.shares[j] > 0.0) out.arpus[j] = out.revenues[j] / out.shares[j];
  return out;
}

inline SelfishSweepResult selfish_sweep(const MarketConfig& config, const PriceVector& prices,
                                        int deviator, double budget, double eta, double step) {
  config.validate();
  prices.validate(config);
  if (!(budget >= 0.0)) throw std::invalid_argument("budget must be non-negative");
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  if (!(eta >= 0.0 && eta < 1.0)) throw std::invalid_argument("eta must be in [0, 1)");

  MarketOutcome baseline = assign_market(config, prices);
  const double base_revenue = baseline.revenues[deviator - 1];
  if (base_revenue == 0.0) throw std::domain_error("deviator has zero baseline revenue");

  constexpr double kScanCeiling = 0.99;
  auto compliant = [&](double eps) {
    MarketOutcome out = deviated_market(config, prices, deviator, eps, eta);
    return (base_revenue - out.revenues[deviator - 1]) / base_revenue < budget;
  };

  SelfishSweepResult result;
  result.op = deviator;

  std::vector<double> grid;
  std::vector<MarketOutcome> outcomes;
  std::vector<bool> ok;
  for (int i = 0;; ++i) {
    double eps = i * step;
    if (eps > kScanCeiling) break;
    grid.push_back(eps);
    outcomes.push_back(deviated_market(config, prices, deviator, eps, eta));
    double loss = (base_revenue - outcomes.back().revenues[deviator - 1]) / base_revenue;
    ok.push_back(loss < budget);
  }
  result.scan_end = grid.back();

  size_t star_index = 0;
  bool first_violation_seen = false;
  for (size_t i = 0; i < grid.size(); ++i) {
    if (ok[i]) {
      star_index = i;
      if (!first_violation_seen) result.first_run_end = grid[i];
    } else {
      first_violation_seen = true;
    }
  }
  result.epsilon_star = grid[star_index];

  // emitted path runs through the first point past epsilon_star
  size_t emit_count = std::min(star_index + 2, grid.size());
  for (size_t i = 0; i < emit_count; ++i) {
    result.epsilon_grid.push_back(grid[i]);
    result.shares_path.push_back(outcomes[i].shares);
    std::vector<double> ratios(baseline.revenues.size(), 0.0);
    for (size_t k = 0; k < ratios.size(); ++k) {
      if (baseline.revenues[k] > 0.0)
        ratios[k] = outcomes[i].revenues[k] / baseline.revenues[k];
    }
    result.revenue_ratios_path.push_back(std::move(ratios));
  }

  result.epsilon_star_refined = result.epsilon_star;
  if (star_index + 1 < grid.size()) {
    double lo = grid[star_index];       // compliant
    double hi = grid[star_index + 1];   // not compliant
    while (hi - lo > 1e-4) {
      double mid = 0.5 * (lo + hi);
      if (compliant(mid))
        lo = mid;
      else
        hi = mid;
    }
    result.epsilon_star_refined = lo;
  }
  return result;
}

}  // namespace towermarket

#endif  // TOWERMARKET_SELFISH_HPP_
