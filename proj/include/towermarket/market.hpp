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

#ifndef TOWERMARKET_MARKET_HPP_
#define TOWERMARKET_MARKET_HPP_

#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Core market model: customers at quality level q rank operators by
// u(q, j) = alpha * a0^j - (1 - alpha) * b_j^q and each level goes to the
// operator with the strictly largest utility. Revenues are normalized by
// the price scale and the user count, which only re-enter in scale_report.

namespace towermarket {

inline constexpr int kUnassigned = 0;

// x^n for small non-negative integer n by plain multiplication. Keeps the
// arithmetic identical across platforms, which matters because several
// assignment boundaries in the calibrated scenarios sit within ~1e-5.
inline double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

struct MarketConfig {
  int num_operators = 0;           // J0
  int num_quality_levels = 0;      // K
  std::vector<double> quality_fractions;  // f_q, one per level
  double popularity_index = 0.0;   // a0 > 1
  double reputation_weight = 0.0;  // alpha in [0, 1]
  double price_exponent_bound = 0.0;  // B > 1
  double price_scale = 1.0;        // reporting only
  long long user_count = 1;        // reporting only

  void validate() const {
    if (num_operators < 1) throw std::invalid_argument("num_operators must be >= 1");
    if (num_quality_levels < 1) throw std::invalid_argument("num_quality_levels must be >= 1");
    if (static_cast<int>(quality_fractions.size()) != num_quality_levels)
      throw std::invalid_argument("quality_fractions size must equal num_quality_levels");
    double sum = 0.0;
    for (double f : quality_fractions) {
      if (f < 0.0) throw std::invalid_argument("quality_fractions must be non-negative");
      sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("quality_fractions must sum to 1");
    if (!(popularity_index > 1.0)) throw std::invalid_argument("popularity_index must be > 1");
    if (!(reputation_weight >= 0.0 && reputation_weight <= 1.0))
      throw std::invalid_argument("reputation_weight must be in [0, 1]");
    if (!(price_exponent_bound > 1.0))
      throw std::invalid_argument("price_exponent_bound must be > 1");
    if (!(price_scale > 0.0)) throw std::invalid_argument("price_scale must be positive");
    if (user_count < 1) throw std::invalid_argument("user_count must be >= 1");
  }

  // alpha * a0^j, the reputation part of u(q, j). 1-based operator index.
  double reputation_term(int op) const {
    return reputation_weight * ipow(popularity_index, op);
  }
};

struct PriceVector {
  std::vector<double> exponents;  // b_j, one per operator

  void validate(const MarketConfig& config) const {
    if (static_cast<int>(exponents.size()) != config.num_operators)
      throw std::invalid_argument("price vector size must equal num_operators");
    for (double b : exponents) {
      if (!(b > 1.0) || !(b <= config.price_exponent_bound))
        throw std::invalid_argument("price exponents must lie in (1, B]");
    }
  }
};

// u(q, j). Indices are 1-based to match the operator numbering used in
// reports; out-of-range indices throw.
inline double utility(const MarketConfig& config, const PriceVector& prices,
                      int level, int op) {
  if (level < 1 || level > config.num_quality_levels)
    throw std::out_of_range("quality level out of range");
  if (op < 1 || op > config.num_operators)
    throw std::out_of_range("operator index out of range");
  return config.reputation_term(op) -
         (1.0 - config.reputation_weight) * ipow(prices.exponents[op - 1], level);
}

struct UtilityTable {
  int num_levels = 0;
  int num_operators = 0;
  std::vector<double> values;  // row-major, K rows by J0 columns

  double at(int level, int op) const { return values[(level - 1) * num_operators + (op - 1)]; }

  static UtilityTable build(const MarketConfig& config, const PriceVector& prices) {
    UtilityTable t;
    t.num_levels = config.num_quality_levels;
    t.num_operators = config.num_operators;
    t.values.resize(static_cast<size_t>(t.num_levels) * t.num_operators);
    for (int q = 1; q <= t.num_levels; ++q)
      for (int j = 1; j <= t.num_operators; ++j)
        t.values[(q - 1) * t.num_operators + (j - 1)] = utility(config, prices, q, j);
    return t;
  }
};

struct MarketOutcome {
  std::vector<int> assignment;  // per level: winning operator (1-based) or kUnassigned
  std::vector<double> revenues;  // R_j
  std::vector<double> shares;    // nu_j
  std::vector<std::optional<double>> arpus;  // undefined when nu_j = 0
};

enum class TiePolicy {
  kUnassignedOnTie,        // literal strict-inequality semantics
  kHighestReputationWins,  // robustness experiments only
};

// Assigns every quality level to the operator with strictly maximal utility.
// An exact utility tie leaves the level unassigned under the default policy:
// it contributes no revenue and no share to anybody. Comparisons are exact,
// with no epsilon; callers that need interior points offset them explicitly.
inline MarketOutcome assign_market(const MarketConfig& config, const PriceVector& prices,
                                   TiePolicy ties = TiePolicy::kUnassignedOnTie) {
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
    double best = utility(config, prices, q, 1);
    for (int j = 2; j <= ops; ++j) {
      double u = utility(config, prices, q, j);
      if (u > best) {
        best = u;
        winner = j;
        tied = false;
      } else if (u == best) {
        tied = true;
      }
    }
    if (tied && ties == TiePolicy::kHighestReputationWins) {
      // among the tied operators the reputation term is strictly increasing
      // in the index, so the largest tied index wins
      for (int j = ops; j >= 1; --j) {
        if (utility(config, prices, q, j) == best) {
          winner = j;
          tied = false;
          break;
        }
      }
    }
    if (!tied) {
      out.assignment[q - 1] = winner;
      out.revenues[winner - 1] +=
          config.quality_fractions[q - 1] * ipow(prices.exponents[winner - 1], q);
      out.shares[winner - 1] += config.quality_fractions[q - 1];
    }
  }
  for (int j = 0; j < ops; ++j) {
    if (out.shares[j] > 0.0) out.arpus[j] = out.revenues[j] / out.shares[j];
  }
  return out;
}

struct ScaledReport {
  std::vector<int> assignment;
  std::vector<double> absolute_revenues;  // R_j * price_scale * user_count
};

inline ScaledReport scale_report(const MarketOutcome& outcome, const MarketConfig& config) {
  ScaledReport report;
  report.assignment = outcome.assignment;
  report.absolute_revenues.reserve(outcome.revenues.size());
  const double scale = config.price_scale * static_cast<double>(config.user_count);
  for (double r : outcome.revenues) report.absolute_revenues.push_back(r * scale);
  return report;
}

}  // namespace towermarket

#endif  // TOWERMARKET_MARKET_HPP_
