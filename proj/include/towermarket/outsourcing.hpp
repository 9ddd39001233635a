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

#ifndef TOWERMARKET_OUTSOURCING_HPP_
#define TOWERMARKET_OUTSOURCING_HPP_

#include <optional>
#include <stdexcept>
#include <vector>

#include "towermarket/market.hpp"

// Tower-operation outsourcing accounting. Every operator stops paying its own
// operation cost c and instead pays the tower company a fee p_j, so operator j
// ends with R_j + c - p_j while the tower company collects the fees minus its
// own cost c'. Mutualizing J0 cost centers into one creates J0*c - c' of value
// regardless of how the fees split it.

namespace towermarket {

struct OutsourcingScenario {
  double tower_cost = 0.0;           // c, per-operator operation cost
  double towerco_cost = 0.0;         // c'
  double fee_fraction = 0.0;         // kappa, common fee p = kappa * c
  std::optional<std::vector<double>> fees;  // explicit p_j, overrides kappa
  double reputation_feedback = 0.0;  // eta, used by the reduction analyses

  void validate(int num_operators) const {
    if (tower_cost < 0.0) throw std::invalid_argument("tower_cost must be non-negative");
    if (towerco_cost < 0.0) throw std::invalid_argument("towerco_cost must be non-negative");
    if (!fees.has_value()) {
      if (!(fee_fraction > 0.0 && fee_fraction < 1.0))
        throw std::invalid_argument("fee_fraction must be in (0, 1) when fees are defaulted");
    } else {
      if (static_cast<int>(fees->size()) != num_operators)
        throw std::invalid_argument("fees size must equal num_operators");
      for (double p : *fees)
        if (p < 0.0) throw std::invalid_argument("fees must be non-negative");
    }
    if (!(reputation_feedback >= 0.0 && reputation_feedback < 1.0))
      throw std::invalid_argument("reputation_feedback must be in [0, 1)");
  }

  std::vector<double> resolved_fees(int num_operators) const {
    if (fees.has_value()) return *fees;
    return std::vector<double>(num_operators, fee_fraction * tower_cost);
  }
};

struct ValueReport {
  std::vector<double> operator_totals;  // R_j + c - p_j
  double towerco_revenue = 0.0;         // sum of fees - c'
  double value_created = 0.0;           // J0*c - c'
  bool profitable = false;              // towerco_revenue > 0
};

inline ValueReport outsource(const MarketOutcome& outcome, const OutsourcingScenario& scenario) {
  const int ops = static_cast<int>(outcome.revenues.size());
  scenario.validate(ops);
  ValueReport report;
  std::vector<double> fees = scenario.resolved_fees(ops);
  double fee_sum = 0.0;
  report.operator_totals.reserve(ops);
  for (int j = 0; j < ops; ++j) {
    report.operator_totals.push_back(outcome.revenues[j] + scenario.tower_cost - fees[j]);
    fee_sum += fees[j];
  }
  report.towerco_revenue = fee_sum - scenario.towerco_cost;
  report.value_created = ops * scenario.tower_cost - scenario.towerco_cost;
  report.profitable = report.towerco_revenue > 0.0;
  return report;
}

// Relative operation gain (1 - kappa) * c / R_j. For the top operator this is
// the delta parameter of the coordinated reduction analysis.
inline double gain_ratio(const MarketOutcome& outcome, const OutsourcingScenario& scenario,
                         int op) {
  const int ops = static_cast<int>(outcome.revenues.size());
  if (op < 1 || op > ops) throw std::out_of_range("operator index out of range");
  if (!(scenario.fee_fraction > 0.0 && scenario.fee_fraction < 1.0))
    throw std::invalid_argument("gain_ratio needs fee_fraction in (0, 1)");
  double r = outcome.revenues[op - 1];
  if (r == 0.0) throw std::domain_error("gain ratio undefined for zero baseline revenue");
  return (1.0 - scenario.fee_fraction) * scenario.tower_cost / r;
}

}  // namespace towermarket

#endif  // TOWERMARKET_OUTSOURCING_HPP_
