#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "ibg/best_response.hpp"
#include "ibg/candidates.hpp"
#include "ibg/game_core.hpp"

namespace ibg {

// Brute-force SPNE reference: exhaustive backward induction over the full
// extensive-form tree of sequential candidate choices. No memoization, no
// prediction bookkeeping; every position (including the last) picks the
// first candidate, in candidate order, whose payoff beats the running best
// by more than the dead band — the same tie convention the recursive
// solvers use. Exponential in N; guarded by |Phi|^N <= 1e7.
class SpneOracle {
 public:
  SpneOracle(const GameConfig& cfg, const Belief& beliefs,
             std::span<const int> order)
      : cands_(CandidateSet::enumerate(cfg.dishes, cfg.budget)),
        eu_(cfg, beliefs, order),
        order_(order.begin(), order.end()),
        dishes_(cfg.dishes),
        customers_(cfg.customers) {
    if (customers_ * std::log(static_cast<double>(cands_.size())) >
        std::log(1e7))
      throw CapacityError("SpneOracle: candidate tree exceeds 1e7 leaves");
  }

  DecisionMatrix solve() {
    const Sub root = play(1, std::vector<int>(dishes_, 0));
    DecisionMatrix d(dishes_, customers_);
    for (int pos = 1; pos <= customers_; ++pos) {
      const std::uint32_t mask = root.masks[pos - 1];
      for (int j = 0; j < dishes_; ++j)
        if (mask & (1u << j)) d.at(j, order_[pos - 1]) = 1;
    }
    return d;
  }

 private:
  struct Sub {
    std::vector<std::uint32_t> masks;  // decisions of positions pos..N
    std::vector<int> totals;           // final per-dish requester counts
  };

  Sub play(int pos, const std::vector<int>& counts) {
    if (pos > customers_) return Sub{{}, counts};
    Sub best;
    double best_u = 0.0;
    std::uint32_t best_mask = 0;
    bool first = true;
    std::vector<int> next(dishes_);
    for (int h = 0; h < cands_.size(); ++h) {
      next = counts;
      for (int j : cands_.dish_lists[h]) ++next[j];
      Sub sub = play(pos + 1, next);
      double u = 0.0;
      for (int j : cands_.dish_lists[h]) u += eu_(pos, j, sub.totals[j]);
      if (first || u > best_u + kUtilityDeadband) {
        best_u = u;
        best_mask = cands_.masks[h];
        best = std::move(sub);
        first = false;
      }
    }
    Sub out;
    out.masks.reserve(best.masks.size() + 1);
    out.masks.push_back(best_mask);
    out.masks.insert(out.masks.end(), best.masks.begin(), best.masks.end());
    out.totals = std::move(best.totals);
    return out;
  }

  CandidateSet cands_;
  ExpectedUtilityTable eu_;
  std::vector<int> order_;
  int dishes_;
  int customers_;
};

inline DecisionMatrix spne_oracle(const GameConfig& cfg, const Belief& beliefs,
                                  std::span<const int> order) {
  SpneOracle oracle(cfg, beliefs, order);
  return oracle.solve();
}

inline DecisionMatrix spne_oracle(const GameConfig& cfg,
                                  const Belief& beliefs) {
  return spne_oracle(cfg, beliefs, identity_order(cfg.customers));
}

}  // namespace ibg
