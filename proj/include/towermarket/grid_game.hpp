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

#ifndef TOWERMARKET_GRID_GAME_HPP_
#define TOWERMARKET_GRID_GAME_HPP_

#include <array>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "towermarket/market.hpp"

// Discretized pricing game for three ordered players. Exponents live on the
// grid beta_k = 1 + k*(B-1)/M and players are indexed in increasing order of
// exponent, k1 < k2 < k3. The host imposes an eligibility rule: an action
// tuple counts only if every operator earns strictly positive revenue. The
// equilibrium selection is lexicographic from the top player down.

namespace towermarket {

struct ActionGrid {
  int points_per_player = 0;  // M
  double bound = 0.0;         // B
  std::vector<double> values;

  double beta(int k) const { return values[k - 1]; }  // 1-based
};

inline ActionGrid build_grid(int m, double bound) {
  if (m < 1) throw std::invalid_argument("grid needs at least one point");
  if (!(bound > 1.0)) throw std::invalid_argument("bound must be > 1");
  ActionGrid grid;
  grid.points_per_player = m;
  grid.bound = bound;
  grid.values.resize(m);
  for (int k = 1; k <= m; ++k) grid.values[k - 1] = 1.0 + (k * (bound - 1.0)) / m;
  grid.values[m - 1] = bound;  // pin the endpoint against division round-off
  for (int k = 1; k < m; ++k)
    if (!(grid.values[k - 1] < grid.values[k]))
      throw std::invalid_argument("grid values must be strictly increasing");
  return grid;
}

inline std::vector<double> grid_payoffs(const MarketConfig& config, const ActionGrid& grid,
                                        const std::vector<int>& indices) {
  if (static_cast<int>(indices.size()) != config.num_operators)
    throw std::invalid_argument("need one action index per operator");
  PriceVector prices;
  prices.exponents.reserve(indices.size());
  for (size_t i = 0; i < indices.size(); ++i) {
    int k = indices[i];
    if (k < 1 || k > grid.points_per_player) throw std::out_of_range("action index out of range");
    if (i > 0 && indices[i - 1] >= k)
      throw std::invalid_argument("action indices must be strictly increasing");
    prices.exponents.push_back(grid.beta(k));
  }
  return assign_market(config, prices).revenues;
}

inline bool is_eligible(const MarketConfig& config, const ActionGrid& grid,
                        const std::vector<int>& indices) {
  for (double r : grid_payoffs(config, grid, indices))
    if (!(r > 0.0)) return false;
  return true;
}

// Payoff storage for the three-player game. Materialized eagerly up to M = 60
// (216k entries); larger grids fall back to on-demand evaluation with a
// memoization cache. The cache is not synchronized.
class PayoffTensor {
 public:
  PayoffTensor(MarketConfig config, ActionGrid grid)
      : config_(std::move(config)), grid_(std::move(grid)), m_(grid_.points_per_player) {
    if (config_.num_operators != 3)
      throw std::invalid_argument("payoff tensor is defined for three operators");
    eager_ = m_ <= 60;
    if (eager_) {
      entries_.resize(static_cast<size_t>(m_) * m_ * m_);
      for (int k1 = 1; k1 <= m_; ++k1)
        for (int k2 = 1; k2 <= m_; ++k2)
          for (int k3 = 1; k3 <= m_; ++k3) entries_[index(k1, k2, k3)] = compute(k1, k2, k3);
    }
  }

  std::array<double, 3> at(int k1, int k2, int k3) const {
    check(k1);
    check(k2);
    check(k3);
    if (eager_) return entries_[index(k1, k2, k3)];
    size_t idx = index(k1, k2, k3);
    auto it = cache_.find(idx);
    if (it != cache_.end()) return it->second;
    std::array<double, 3> value = compute(k1, k2, k3);
    cache_.emplace(idx, value);
    return value;
  }

  const MarketConfig& config() const { return config_; }
  const ActionGrid& grid() const { return grid_; }

 private:
  void check(int k) const {
    if (k < 1 || k > m_) throw std::out_of_range("action index out of range");
  }
  size_t index(int k1, int k2, int k3) const {
    return (static_cast<size_t>(k1 - 1) * m_ + (k2 - 1)) * m_ + (k3 - 1);
  }
  std::array<double, 3> compute(int k1, int k2, int k3) const {
    PriceVector prices{{grid_.beta(k1), grid_.beta(k2), grid_.beta(k3)}};
    MarketOutcome out = assign_market(config_, prices);
    return {out.revenues[0], out.revenues[1], out.revenues[2]};
  }

  MarketConfig config_;
  ActionGrid grid_;
  int m_;
  bool eager_ = false;
  std::vector<std::array<double, 3>> entries_;
  mutable std::unordered_map<size_t, std::array<double, 3>> cache_;
};

// Top player's best response to (k1, k2) over k3 in {k2+1, ..., M}. The
// argmax runs over the eligible responses (tuples leaving every operator a
// positive revenue); when no response in range is eligible it falls back to
// the unconstrained argmax. Ties break toward the smallest index.
inline int best_response_top(const MarketConfig& config, const ActionGrid& grid, int k1, int k2) {
  if (config.num_operators != 3)
    throw std::invalid_argument("best_response_top is defined for three operators");
  const int m = grid.points_per_player;
  if (!(k1 >= 1 && k1 < k2 && k2 < m)) throw std::out_of_range("need 1 <= k1 < k2 < M");

  int best_eligible = 0, best_any = 0;
  double best_eligible_r3 = 0.0, best_any_r3 = 0.0;
  for (int k3 = k2 + 1; k3 <= m; ++k3) {
    std::vector<double> r = grid_payoffs(config, grid, {k1, k2, k3});
    if (best_any == 0 || r[2] > best_any_r3) {
      best_any = k3;
      best_any_r3 = r[2];
    }
    bool eligible = r[0] > 0.0 && r[1] > 0.0 && r[2] > 0.0;
    if (eligible && (best_eligible == 0 || r[2] > best_eligible_r3)) {
      best_eligible = k3;
      best_eligible_r3 = r[2];
    }
  }
  return best_eligible != 0 ? best_eligible : best_any;
}

struct GridEquilibrium {
  std::array<int, 3> indices{};
  std::array<double, 3> betas{};
  std::array<double, 3> payoffs{};
  bool eligible = false;
  std::array<bool, 3> nash_certificate{};
};

struct NoEligibleEquilibrium : std::runtime_error {
  NoEligibleEquilibrium() : std::runtime_error("no eligible action tuple supports an equilibrium") {}
};

// Certificate that no unilateral deviation helps. A deviation keeps the other
// two actions fixed, must stay in its strict-ordering slot, and must itself be
// eligible; the player's entry is true when none of those strictly improves
// its payoff.
inline std::array<bool, 3> verify_constrained_nash(const MarketConfig& config,
                                                   const ActionGrid& grid,
                                                   const std::array<int, 3>& tuple) {
  const int m = grid.points_per_player;
  if (!(tuple[0] >= 1 && tuple[0] < tuple[1] && tuple[1] < tuple[2] && tuple[2] <= m))
    throw std::invalid_argument("tuple must be strictly increasing and in range");
  std::vector<double> base = grid_payoffs(config, grid, {tuple[0], tuple[1], tuple[2]});

  std::array<bool, 3> certificate{true, true, true};
  for (int player = 0; player < 3; ++player) {
    int lo = (player == 0) ? 1 : tuple[player - 1] + 1;
    int hi = (player == 2) ? m : tuple[player + 1] - 1;
    for (int k = lo; k <= hi; ++k) {
      if (k == tuple[player]) continue;
      std::array<int, 3> dev = tuple;
      dev[player] = k;
      std::vector<double> r = grid_payoffs(config, grid, {dev[0], dev[1], dev[2]});
      bool eligible = r[0] > 0.0 && r[1] > 0.0 && r[2] > 0.0;
      if (eligible && r[player] > base[player]) {
        certificate[player] = false;
        break;
      }
    }
  }
  return certificate;
}

struct LandscapeEntry {
  int k1 = 0, k2 = 0, k3 = 0;
  std::array<double, 3> payoffs{};
};

// All eligible best-response tuples (k1, k2, K3(k1, k2)), ordered by (k1, k2).
inline std::vector<LandscapeEntry> best_response_landscape(const MarketConfig& config,
                                                           const ActionGrid& grid) {
  if (config.num_operators != 3)
    throw std::invalid_argument("landscape is defined for three operators");
  const int m = grid.points_per_player;
  if (m < 3) throw std::invalid_argument("grid needs at least three points");
  std::vector<LandscapeEntry> pool;
  for (int k1 = 1; k1 + 2 <= m; ++k1) {
    for (int k2 = k1 + 1; k2 + 1 <= m; ++k2) {
      int k3 = best_response_top(config, grid, k1, k2);
      std::vector<double> r = grid_payoffs(config, grid, {k1, k2, k3});
      if (r[0] > 0.0 && r[1] > 0.0 && r[2] > 0.0)
        pool.push_back({k1, k2, k3, {r[0], r[1], r[2]}});
    }
  }
  return pool;
}

struct LexicographicTrace {
  std::vector<LandscapeEntry> pool;     // eligible best-response tuples
  std::vector<LandscapeEntry> refined;  // survivors after the top and middle stages
  GridEquilibrium equilibrium;
};

// Lexicographic selection from the top player down. Each stage narrows the
// candidate set: first fix the maximal top payoff and the smallest index
// attaining it, then the maximal middle payoff among survivors and its
// smallest index, then the best bottom payoff. Every stage filters an
// already-nonempty set on a value it attains, so the search cannot come up
// empty once the pool itself is nonempty.
inline LexicographicTrace solve_lexicographic_traced(const MarketConfig& config,
                                                     const ActionGrid& grid) {
  LexicographicTrace trace;
  trace.pool = best_response_landscape(config, grid);
  if (trace.pool.empty()) throw NoEligibleEquilibrium();

  std::vector<LandscapeEntry> stage = trace.pool;
  auto filter = [&stage](auto keep) {
    std::vector<LandscapeEntry> next;
    for (const LandscapeEntry& e : stage)
      if (keep(e)) next.push_back(e);
    stage = std::move(next);
  };

  double top = stage.front().payoffs[2];
  for (const LandscapeEntry& e : stage) top = std::max(top, e.payoffs[2]);
  filter([top](const LandscapeEntry& e) { return e.payoffs[2] == top; });
  int k3_star = stage.front().k3;
  for (const LandscapeEntry& e : stage) k3_star = std::min(k3_star, e.k3);
  filter([k3_star](const LandscapeEntry& e) { return e.k3 == k3_star; });

  double mid = stage.front().payoffs[1];
  for (const LandscapeEntry& e : stage) mid = std::max(mid, e.payoffs[1]);
  filter([mid](const LandscapeEntry& e) { return e.payoffs[1] == mid; });
  trace.refined = stage;
  int k2_star = stage.front().k2;
  for (const LandscapeEntry& e : stage) k2_star = std::min(k2_star, e.k2);
  filter([k2_star](const LandscapeEntry& e) { return e.k2 == k2_star; });

  double bottom = stage.front().payoffs[0];
  for (const LandscapeEntry& e : stage) bottom = std::max(bottom, e.payoffs[0]);
  filter([bottom](const LandscapeEntry& e) { return e.payoffs[0] == bottom; });
  int k1_star = stage.front().k1;
  for (const LandscapeEntry& e : stage) k1_star = std::min(k1_star, e.k1);

  GridEquilibrium eq;
  eq.indices = {k1_star, k2_star, k3_star};
  eq.betas = {grid.beta(k1_star), grid.beta(k2_star), grid.beta(k3_star)};
  std::vector<double> r = grid_payoffs(config, grid, {k1_star, k2_star, k3_star});
  eq.payoffs = {r[0], r[1], r[2]};
  eq.eligible = r[0] > 0.0 && r[1] > 0.0 && r[2] > 0.0;
  eq.nash_certificate = verify_constrained_nash(config, grid, eq.indices);
  trace.equilibrium = eq;
  return trace;
}

inline GridEquilibrium solve_lexicographic(const MarketConfig& config, const ActionGrid& grid) {
  return solve_lexicographic_traced(config, grid).equilibrium;
}

// Middle actions with positive revenue at fixed (k1, k3). No structural claim
// is made about the set; it is computed for reporting.
inline std::vector<int> positive_mid_actions(const MarketConfig& config, const ActionGrid& grid,
                                             int k1, int k3) {
  std::vector<int> result;
  for (int k2 = k1 + 1; k2 < k3; ++k2)
    if (grid_payoffs(config, grid, {k1, k2, k3})[1] > 0.0) result.push_back(k2);
  return result;
}

}  // namespace towermarket

#endif  // TOWERMARKET_GRID_GAME_HPP_
