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

#ifndef TOWERMARKET_COORDINATION_HPP_
#define TOWERMARKET_COORDINATION_HPP_

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "towermarket/market.hpp"

// Coordinated price reduction: every operator simultaneously lowers its
// exponent by its own eps_j (with the same reputation lift as the unilateral
// case) to pass the outsourcing gain on to customers. An operator's cut is
// acceptable while its reduced revenue plus the gain stays at or above its
// original revenue; the slack is the offset. The product of offsets (with
// negative values sent to +infinity) attains its minimum 0 whenever any
// single offset vanishes, so the solver needs a deterministic selection rule
// rather than plain minimization.

namespace towermarket {

enum class Regime {
  kTowercoOperated,
  kSmartOperatorOperated,
};

struct CoordinationProblem {
  MarketConfig config;
  PriceVector baseline_prices;
  MarketOutcome baseline;
  double delta = 0.0;  // gain relative to the top operator's baseline revenue
  double eta = 0.0;
  Regime regime = Regime::kTowercoOperated;
  std::vector<double> gain_weights;  // defaulted from the regime when empty

  std::vector<double> resolved_weights() const {
    if (!gain_weights.empty()) return gain_weights;
    std::vector<double> w(config.num_operators, 1.0);
    if (regime == Regime::kSmartOperatorOperated && !w.empty()) w.back() = 2.0;
    return w;
  }

  void validate() const {
    config.validate();
    baseline_prices.validate(config);
    if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("delta must be in (0, 0.5)");
    if (!(eta >= 0.0 && eta < 1.0)) throw std::invalid_argument("eta must be in [0, 1)");
    std::vector<double> w = resolved_weights();
    if (static_cast<int>(w.size()) != config.num_operators)
      throw std::invalid_argument("gain_weights size must equal num_operators");
    for (double x : w)
      if (!(x > 0.0)) throw std::invalid_argument("gain_weights must be positive");
    for (double r : baseline.revenues)
      if (r <= 0.0) throw std::domain_error("coordination needs positive baseline revenues");
  }
};

struct CoordinationResult {
  std::vector<double> epsilon;
  std::vector<double> reduced_revenues;
  std::vector<double> revenue_ratios;  // reduced / baseline
  std::vector<double> global_ratios;   // (reduced + gain) / baseline
  std::vector<double> offsets;         // reduced + gain - baseline
  bool assignment_preserved = true;
};

// Market where operator j posts (1 - eps_j) * b_j and carries reputation
// factor (1 + eta * eps_j).
inline MarketOutcome reduced_market(const CoordinationProblem& problem,
                                    const std::vector<double>& eps) {
  const MarketConfig& config = problem.config;
  const int ops = config.num_operators;
  const int levels = config.num_quality_levels;
  if (static_cast<int>(eps.size()) != ops)
    throw std::invalid_argument("eps size must equal num_operators");
  for (double e : eps)
    if (!(e >= 0.0 && e < 1.0)) throw std::domain_error("eps entries must be in [0, 1)");

  std::vector<double> exponent(ops), reputation(ops);
  for (int j = 0; j < ops; ++j) {
    exponent[j] = (1.0 - eps[j]) * problem.baseline_prices.exponents[j];
    reputation[j] = (1.0 + problem.eta * eps[j]) * config.reputation_term(j + 1);
  }

  MarketOutcome out;
  out.assignment.assign(levels, kUnassigned);
  out.revenues.assign(ops, 0.0);
  out.shares.assign(ops, 0.0);
  out.arpus.assign(ops, std::nullopt);
  const double price_weight = 1.0 - config.reputation_weight;
  for (int q = 1; q <= levels; ++q) {
    int winner = 0;
    bool tied = false;
    double best = 0.0;
    for (int j = 0; j < ops; ++j) {
      double u = reputation[j] - price_weight * ipow(exponent[j], q);
      if (j == 0 || u > best) {
        best = u;
        winner = j;
        tied = false;
      } else if (u == best) {
        tied = true;
      }
    }
    if (!tied) {
      out.assignment[q - 1] = winner + 1;
      out.revenues[winner] += config.quality_fractions[q - 1] * ipow(exponent[winner], q);
      out.shares[winner] += config.quality_fractions[q - 1];
    }
  }
  for (int j = 0; j < ops; ++j)
    if (out.shares[j] > 0.0) out.arpus[j] = out.revenues[j] / out.shares[j];
  return out;
}

// Offset of operator op at eps: reduced revenue plus the weighted gain minus
// the baseline revenue, with negative values mapped to +infinity (the barrier
// form used by the product objective).
inline double offset(const CoordinationProblem& problem, const std::vector<double>& eps, int op) {
  const int ops = problem.config.num_operators;
  if (op < 1 || op > ops) throw std::out_of_range("operator index out of range");
  MarketOutcome out = reduced_market(problem, eps);
  std::vector<double> w = problem.resolved_weights();
  double top_gain = problem.delta * problem.baseline.revenues[ops - 1];
  double raw = out.revenues[op - 1] + top_gain * w[op - 1] - problem.baseline.revenues[op - 1];
  if (raw < 0.0) return std::numeric_limits<double>::infinity();
  return raw;
}

namespace detail {

inline CoordinationResult package_result(const CoordinationProblem& problem,
                                         const std::vector<double>& eps) {
  const int ops = problem.config.num_operators;
  MarketOutcome out = reduced_market(problem, eps);
  std::vector<double> w = problem.resolved_weights();
  double top_gain = problem.delta * problem.baseline.revenues[ops - 1];
  CoordinationResult result;
  result.epsilon = eps;
  result.reduced_revenues = out.revenues;
  result.assignment_preserved = (out.assignment == problem.baseline.assignment);
  for (int j = 0; j < ops; ++j) {
    double base = problem.baseline.revenues[j];
    double gain = top_gain * w[j];
    result.revenue_ratios.push_back(out.revenues[j] / base);
    result.global_ratios.push_back((out.revenues[j] + gain) / base);
    result.offsets.push_back(out.revenues[j] + gain - base);
  }
  return result;
}

}  // namespace detail

// Deterministic selection rule. Starting from eps = 0 and cycling through the
// operators in index order, each operator raises its eps_j to the largest
// value that (a) keeps its own reduced revenue within the unweighted gain
// delta * R_top of its baseline and (b) preserves the baseline assignment.
// Repeat until the vector stops moving. The per-operator budget deliberately
// ignores the regime weights; those enter the reported offsets and global
// ratios only.
inline CoordinationResult solve_fixed_point(const CoordinationProblem& problem) {
  problem.validate();
  const int ops = problem.config.num_operators;
  const double top_gain = problem.delta * problem.baseline.revenues[ops - 1];
  std::vector<double> eps(ops, 0.0);

  auto acceptable = [&](const std::vector<double>& candidate, int j) {
    MarketOutcome out = reduced_market(problem, candidate);
    if (out.assignment != problem.baseline.assignment) return false;
    return out.revenues[j] + top_gain - problem.baseline.revenues[j] >= 0.0;
  };

  for (int round = 0; round < 100; ++round) {
    double max_change = 0.0;
    for (int j = 0; j < ops; ++j) {
      std::vector<double> candidate = eps;
      // With the other entries held at the current iterate, the acceptable
      // set in eps_j is an interval starting at 0 that contains the current
      // value: raising eps_j only strengthens j's own claim on its levels
      // until it steals a foreign one, and only lowers its own revenue.
      double lo = eps[j];
      double hi = 1.0 - 1e-12;
      candidate[j] = hi;
      if (acceptable(candidate, j)) {
        lo = hi;
      } else {
        candidate[j] = lo;
        if (!acceptable(candidate, j)) {
          // the current iterate stays acceptable after every accepted move:
          // the assignment is preserved, and at a fixed assignment j's
          // revenue depends on eps_j alone
          throw std::runtime_error("coordination fixed point lost feasibility");
        }
        while (hi - lo > 1e-15) {
          double mid = 0.5 * (lo + hi);
          candidate[j] = mid;
          if (acceptable(candidate, j))
            lo = mid;
          else
            hi = mid;
        }
      }
      max_change = std::max(max_change, std::abs(lo - eps[j]));
      eps[j] = lo;
    }
    if (max_change < 1e-10) break;
  }
  return detail::package_result(problem, eps);
}

// Comparison mode: direct descent of the offset-product barrier from eps = 0,
// one coordinate at a time in operator order. Raising eps_j only lowers
// offset_j while the assignment holds, so the first coordinate that can reach
// a zero offset pins the objective at its minimum and the descent stops.
inline CoordinationResult solve_barrier_descent(const CoordinationProblem& problem) {
  problem.validate();
  const int ops = problem.config.num_operators;
  std::vector<double> eps(ops, 0.0);

  auto feasible = [&](const std::vector<double>& candidate) {
    for (int j = 1; j <= ops; ++j)
      if (std::isinf(offset(problem, candidate, j))) return false;
    return true;
  };

  for (int j = 0; j < ops; ++j) {
    // coarse scan for the first infeasible point, then bisect the bracket
    std::vector<double> candidate = eps;
    double lo = 0.0;
    double hi = 0.0;
    bool bracketed = false;
    for (int i = 1; i < 1000; ++i) {
      double e = i * 1e-3;
      candidate[j] = e;
      if (!feasible(candidate)) {
        hi = e;
        bracketed = true;
        break;
      }
      lo = e;
    }
    if (!bracketed) {
      eps[j] = lo;
      continue;
    }
    while (hi - lo > 1e-12) {
      double mid = 0.5 * (lo + hi);
      candidate[j] = mid;
      if (feasible(candidate))
        lo = mid;
      else
        hi = mid;
    }
    eps[j] = lo;
    candidate[j] = lo;
    if (offset(problem, candidate, j + 1) <= 1e-9) break;  // objective already at its minimum
  }
  return detail::package_result(problem, eps);
}

}  // namespace towermarket

#endif  // TOWERMARKET_COORDINATION_HPP_
