#pragma once

#include <cstdint>
#include <vector>

#include "ibg/best_response.hpp"
#include "ibg/candidates.hpp"
#include "ibg/game_core.hpp"
#include "ibg/rng.hpp"

namespace ibg {

// Myopic play: evaluates each dish at the observed crowd plus itself under
// the frozen time-zero prior and takes the best strictly positive dishes up
// to the budget. No learning, no prediction of successors.
inline std::vector<std::uint8_t> myopic_decision(const Belief& frozen_prior,
                                                 const Observation& obs,
                                                 int customer,
                                                 const GameConfig& cfg) {
  std::vector<double> utilities(cfg.dishes);
  for (int j = 0; j < cfg.dishes; ++j)
    utilities[j] =
        expected_utility(cfg, frozen_prior, customer, j, obs.counts[j] + 1);
  const std::uint32_t mask = top_budget_positive(utilities, cfg.budget);
  std::vector<std::uint8_t> decision(cfg.dishes, 0);
  for (int j = 0; j < cfg.dishes; ++j) decision[j] = (mask >> j) & 1u;
  return decision;
}

// Learning-only play: evaluates each dish under the current belief as if
// the customer were alone on it, ignoring the externality entirely.
inline std::vector<std::uint8_t> learning_decision(const Belief& current,
                                                   int customer,
                                                   const GameConfig& cfg) {
  std::vector<double> utilities(cfg.dishes);
  for (int j = 0; j < cfg.dishes; ++j)
    utilities[j] = expected_utility(cfg, current, customer, j, 1);
  const std::uint32_t mask = top_budget_positive(utilities, cfg.budget);
  std::vector<std::uint8_t> decision(cfg.dishes, 0);
  for (int j = 0; j < cfg.dishes; ++j) decision[j] = (mask >> j) & 1u;
  return decision;
}

// Uniform draw from the legal strategy set (the candidate set including the
// empty request), which satisfies the budget by construction.
inline std::vector<std::uint8_t> random_decision(Rng& rng,
                                                 const CandidateSet& cands) {
  const int h =
      static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(
                                              cands.size())));
  std::vector<std::uint8_t> decision(cands.dishes, 0);
  for (int j : cands.dish_lists[h]) decision[j] = 1;
  return decision;
}

inline std::vector<std::uint8_t> random_decision(Rng& rng,
                                                 const GameConfig& cfg) {
  const CandidateSet cands = CandidateSet::enumerate(cfg.dishes, cfg.budget);
  return random_decision(rng, cands);
}

}  // namespace ibg
