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

#ifndef TOWERMARKET_OPTIMIZE_HPP_
#define TOWERMARKET_OPTIMIZE_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "towermarket/market.hpp"

// Centralized price setting. Three problems over the box (1, B]^J0:
// maximize the revenue sum with no ordering constraint, maximize the revenue
// product with every exponent below the top operator's, and maximize the
// revenue product with fully ordered exponents. The objectives are piecewise
// smooth with jumps at assignment boundaries, so the search is a coarse grid
// followed by shrinking-box refinement rather than anything derivative-based.

namespace towermarket {

enum class OrderingMode {
  kNone,          // no constraint between exponents
  kTopDominates,  // b_k < b_J0 for every k < J0
  kFullyOrdered,  // b_1 < b_2 < ... < b_J0
};

struct OptimizerSettings {
  int coarse_grid_points = 60;  // per dimension
  int refine_rounds = 3;        // each round shrinks the box 10x
  double boundary_offset = 1e-6;  // interior nudge off indicator boundaries
  OrderingMode ordering_mode = OrderingMode::kFullyOrdered;

  void validate() const {
    if (coarse_grid_points < 2) throw std::invalid_argument("coarse_grid_points must be >= 2");
    if (refine_rounds < 0) throw std::invalid_argument("refine_rounds must be >= 0");
    if (!(boundary_offset > 0.0 && boundary_offset < 1e-3))
      throw std::invalid_argument("boundary_offset must be in (0, 1e-3)");
  }
};

struct Optimum {
  PriceVector prices;
  double objective = 0.0;
  MarketOutcome outcome;
  bool degenerate = false;  // some operator ends with zero revenue
};

namespace detail {

enum class Objective { kSum, kProduct };

inline bool ordering_ok(OrderingMode mode, const std::vector<double>& b, double bound) {
  for (double v : b)
    if (!(v > 1.0 && v <= bound)) return false;
  switch (mode) {
    case OrderingMode::kNone:
      return true;
    case OrderingMode::kTopDominates: {
      double top = b.back();
      for (size_t k = 0; k + 1 < b.size(); ++k)
        if (!(b[k] < top)) return false;
      return true;
    }
    case OrderingMode::kFullyOrdered:
      for (size_t k = 0; k + 1 < b.size(); ++k)
        if (!(b[k] < b[k + 1])) return false;
      return true;
  }
  return false;
}

inline double objective_value(Objective kind, const std::vector<double>& revenues) {
  double acc = (kind == Objective::kSum) ? 0.0 : 1.0;
  for (double r : revenues) {
    if (kind == Objective::kSum)
      acc += r;
    else
      acc *= r;
  }
  return acc;
}

struct SearchState {
  bool have = false;
  std::vector<double> best;
  double best_objective = -std::numeric_limits<double>::infinity();
};

inline void consider(SearchState& state, const MarketConfig& config, Objective kind,
                     OrderingMode mode, const std::vector<double>& b) {
  if (!ordering_ok(mode, b, config.price_exponent_bound)) return;
  PriceVector p{b};
  MarketOutcome out = assign_market(config, p);
  double obj = objective_value(kind, out.revenues);
  if (!state.have || obj > state.best_objective ||
      (obj == state.best_objective &&
       std::lexicographical_compare(b.begin(), b.end(), state.best.begin(), state.best.end()))) {
    state.have = true;
    state.best = b;
    state.best_objective = obj;
  }
}

// Evaluates a grid point plus its per-coordinate +-tau offsets. Grid points
// can land exactly on a utility-equality surface, where the strict indicator
// drops a level; the offsets recover the interior value next to it.
inline void consider_with_offsets(SearchState& state, const MarketConfig& config,
                                  Objective kind, OrderingMode mode, double tau,
                                  const std::vector<double>& b) {
  consider(state, config, kind, mode, b);
  std::vector<double> v = b;
  for (size_t j = 0; j < b.size(); ++j) {
    v[j] = b[j] - tau;
    consider(state, config, kind, mode, v);
    v[j] = b[j] + tau;
    consider(state, config, kind, mode, v);
    v[j] = b[j];
  }
}

inline void scan_grid(SearchState& state, const MarketConfig& config, Objective kind,
                      OrderingMode mode, double tau,
                      const std::vector<std::vector<double>>& values) {
  const size_t dims = values.size();
  std::vector<double> b(dims, 0.0);
  std::function<void(size_t)> rec = [&](size_t j) {
    if (j == dims) {
      consider_with_offsets(state, config, kind, mode, tau, b);
      return;
    }
    for (double v : values[j]) {
      if (mode == OrderingMode::kFullyOrdered && j > 0 && v <= b[j - 1]) continue;
      b[j] = v;
      rec(j + 1);
    }
  };
  rec(0);
}

inline Optimum run_search(const MarketConfig& config, const OptimizerSettings& settings,
                          Objective kind) {
  config.validate();
  settings.validate();
  const int dims = config.num_operators;
  const double bound = config.price_exponent_bound;
  const int g = settings.coarse_grid_points;

  std::vector<double> coarse(g);
  for (int i = 1; i <= g; ++i) coarse[i - 1] = 1.0 + i * (bound - 1.0) / g;

  SearchState state;
  scan_grid(state, config, kind, settings.ordering_mode, settings.boundary_offset,
            std::vector<std::vector<double>>(dims, coarse));

  // A product objective that never went positive on the coarse grid means the
  // search region supports no all-positive revenue split at this resolution;
  // refinement around an all-zero incumbent would be meaningless.
  bool skip_refine = (kind == Objective::kProduct && state.best_objective <= 0.0);

  if (!skip_refine) {
    for (int round = 1; round <= settings.refine_rounds; ++round) {
      double width = (bound - 1.0) / std::pow(10.0, round);
      std::vector<std::vector<double>> lists(dims);
      for (int j = 0; j < dims; ++j) {
        double lo = std::max(state.best[j] - width / 2.0, 1.0 + 1e-12);
        double hi = std::min(state.best[j] + width / 2.0, bound);
        if (hi < lo) hi = lo;
        std::vector<double>& vals = lists[j];
        vals.resize(g);
        for (int i = 0; i < g; ++i) vals[i] = lo + (hi - lo) * i / (g - 1);
      }
      scan_grid(state, config, kind, settings.ordering_mode, settings.boundary_offset, lists);
    }
  }

  Optimum opt;
  opt.prices = PriceVector{state.best};
  opt.outcome = assign_market(config, opt.prices);
  opt.objective = objective_value(kind, opt.outcome.revenues);
  opt.degenerate = std::any_of(opt.outcome.revenues.begin(), opt.outcome.revenues.end(),
                               [](double r) { return r == 0.0; });
  return opt;
}

}  // namespace detail

inline Optimum optimize_sum(const MarketConfig& config, const OptimizerSettings& settings) {
  if (settings.ordering_mode != OrderingMode::kNone)
    throw std::invalid_argument("optimize_sum requires ordering_mode = none");
  return detail::run_search(config, settings, detail::Objective::kSum);
}

inline Optimum optimize_bargaining(const MarketConfig& config, const OptimizerSettings& settings) {
  if (config.num_operators < 2) throw std::invalid_argument("bargaining needs >= 2 operators");
  if (settings.ordering_mode != OrderingMode::kTopDominates)
    throw std::invalid_argument("optimize_bargaining requires ordering_mode = top_dominates");
  return detail::run_search(config, settings, detail::Objective::kProduct);
}

inline Optimum optimize_ordered_product(const MarketConfig& config,
                                        const OptimizerSettings& settings) {
  if (config.num_operators < 2) throw std::invalid_argument("ordered product needs >= 2 operators");
  if (settings.ordering_mode != OrderingMode::kFullyOrdered)
    throw std::invalid_argument("optimize_ordered_product requires ordering_mode = fully_ordered");
  return detail::run_search(config, settings, detail::Objective::kProduct);
}

// One assignment region: the set of price vectors under which a fixed
// winner-per-level map holds. Within a region each operator's revenue depends
// only on its own exponent and is increasing in it, so region suprema sit at
// the coordinate-wise caps computed here. Used as an algebraic cross-check
// for the grid optimizers on small instances.
struct AssignmentRegion {
  std::vector<int> winners;  // per level, 1-based operator index
  bool feasible = false;
  std::vector<double> lower;  // outer bounding box, open below
  std::vector<double> upper;  // coordinate-wise sup of the region closure
  double sup_product = 0.0;
  double sup_sum = 0.0;
};

inline std::vector<AssignmentRegion> enumerate_assignment_regions(const MarketConfig& config,
                                                                  OrderingMode mode) {
  config.validate();
  const int ops = config.num_operators;
  const int levels = config.num_quality_levels;
  if (ops > 4 || levels > 6) throw std::length_error("region enumeration limited to J0 <= 4, K <= 6");

  const double bound = config.price_exponent_bound;
  const double alpha = config.reputation_weight;
  std::vector<double> rep(ops + 1, 0.0);
  for (int j = 1; j <= ops; ++j) rep[j] = ipow(config.popularity_index, j);

  std::vector<AssignmentRegion> regions;
  std::vector<int> winners(levels, 1);

  // winner beats loser at level q iff b_w^q < b_l^q + gap(w, l); with alpha = 1
  // the price terms vanish and only the top-reputation operator can win
  auto gap = [&](int w, int l) { return alpha / (1.0 - alpha) * (rep[w] - rep[l]); };

  std::function<void(int)> rec = [&](int q) {
    if (q < levels) {
      for (int j = 1; j <= ops; ++j) {
        winners[q] = j;
        rec(q + 1);
      }
      return;
    }
    AssignmentRegion region;
    region.winners = winners;
    region.lower.assign(ops, 1.0);
    region.upper.assign(ops, bound);

    if (alpha == 1.0) {
      region.feasible =
          std::all_of(winners.begin(), winners.end(), [&](int w) { return w == ops; });
    } else {
      bool empty = false;
      // caps: shrink winners' upper bounds against losers held at their caps
      for (int pass = 0; pass < 64 && !empty; ++pass) {
        double change = 0.0;
        for (int lvl = 1; lvl <= levels && !empty; ++lvl) {
          int w = winners[lvl - 1];
          for (int l = 1; l <= ops; ++l) {
            if (l == w) continue;
            double thr = ipow(region.upper[l - 1], lvl) + gap(w, l);
            if (thr <= 1.0) {
              empty = true;
              break;
            }
            double cap = std::pow(thr, 1.0 / lvl);
            if (cap < region.upper[w - 1]) {
              change = std::max(change, region.upper[w - 1] - cap);
              region.upper[w - 1] = cap;
            }
          }
        }
        if (!empty) {
          for (int j = 0; j + 1 < ops; ++j) {
            int against = (mode == OrderingMode::kFullyOrdered) ? j + 1 : ops - 1;
            if (mode != OrderingMode::kNone && region.upper[j] > region.upper[against]) {
              change = std::max(change, region.upper[j] - region.upper[against]);
              region.upper[j] = region.upper[against];
            }
          }
        }
        if (change < 1e-14) break;
      }
      // floors: raise losers' lower bounds with winners held at their floors
      if (!empty) {
        for (int pass = 0; pass < 64; ++pass) {
          double change = 0.0;
          for (int lvl = 1; lvl <= levels; ++lvl) {
            int w = winners[lvl - 1];
            for (int l = 1; l <= ops; ++l) {
              if (l == w) continue;
              double thr = ipow(region.lower[w - 1], lvl) + gap(l, w);
              if (thr > 1.0) {
                double floor = std::pow(thr, 1.0 / lvl);
                if (floor > region.lower[l - 1]) {
                  change = std::max(change, floor - region.lower[l - 1]);
                  region.lower[l - 1] = floor;
                }
              }
            }
          }
          if (mode == OrderingMode::kFullyOrdered) {
            for (int j = 1; j < ops; ++j) {
              if (region.lower[j] < region.lower[j - 1]) {
                change = std::max(change, region.lower[j - 1] - region.lower[j]);
                region.lower[j] = region.lower[j - 1];
              }
            }
          }
          if (change < 1e-14) break;
        }
        region.feasible = true;
        for (int j = 0; j < ops; ++j) {
          if (!(region.lower[j] < region.upper[j])) {
            region.feasible = false;
            break;
          }
        }
      }
    }

    if (region.feasible) {
      std::vector<double> revenue(ops, 0.0);
      for (int lvl = 1; lvl <= levels; ++lvl) {
        int w = winners[lvl - 1];
        revenue[w - 1] += config.quality_fractions[lvl - 1] * ipow(region.upper[w - 1], lvl);
      }
      region.sup_sum = detail::objective_value(detail::Objective::kSum, revenue);
      region.sup_product = detail::objective_value(detail::Objective::kProduct, revenue);
    }
    regions.push_back(std::move(region));
  };
  rec(0);
  return regions;
}

}  // namespace towermarket

#endif  // TOWERMARKET_OPTIMIZE_HPP_
