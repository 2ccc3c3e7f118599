#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "ibg/game_core.hpp"

namespace ibg {

// The candidate strategy set Phi of a budget-L customer: the empty request
// plus every combination of 1..min(L,M) dishes. Ordered by request count,
// then by ascending dish-index list, so candidate 0 is always empty and ties
// resolve toward fewer, lower-indexed dishes.
struct CandidateSet {
  int dishes = 0;
  int budget = 0;
  std::vector<std::uint32_t> masks;            // bit j set = dish j requested
  std::vector<std::vector<int>> dish_lists;    // per candidate

  static CandidateSet enumerate(int dishes, int budget) {
    if (dishes < 1 || budget < 1)
      throw std::invalid_argument("CandidateSet: need M >= 1 and L >= 1");
    if (dishes > 25)
      throw std::invalid_argument("CandidateSet: more than 25 dishes");
    CandidateSet set;
    set.dishes = dishes;
    set.budget = std::min(budget, dishes);
    set.masks.push_back(0);
    set.dish_lists.emplace_back();
    std::vector<int> combo;
    for (int size = 1; size <= set.budget; ++size) {
      combo.assign(size, 0);
      for (int k = 0; k < size; ++k) combo[k] = k;
      for (;;) {
        std::uint32_t mask = 0;
        for (int j : combo) mask |= 1u << j;
        set.masks.push_back(mask);
        set.dish_lists.push_back(combo);
        // next combination in ascending-index order
        int k = size - 1;
        while (k >= 0 && combo[k] == dishes - size + k) --k;
        if (k < 0) break;
        ++combo[k];
        for (int t = k + 1; t < size; ++t) combo[t] = combo[t - 1] + 1;
      }
    }
    return set;
  }

  int size() const { return static_cast<int>(masks.size()); }

  int index_of(std::uint32_t mask) const {
    if (lookup_.empty()) {
      for (int h = 0; h < size(); ++h) lookup_.emplace(masks[h], h);
    }
    auto it = lookup_.find(mask);
    if (it == lookup_.end())
      throw std::invalid_argument("CandidateSet: mask not in set");
    return it->second;
  }

 private:
  mutable std::unordered_map<std::uint32_t, int> lookup_;
};

// Requests the (at most) `budget` dishes with the highest strictly positive
// utilities; equal utilities resolve toward the lower dish index.
inline std::uint32_t top_budget_positive(std::span<const double> utilities,
                                         int budget) {
  const int m = static_cast<int>(utilities.size());
  std::vector<int> idx(m);
  for (int j = 0; j < m; ++j) idx[j] = j;
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return utilities[a] > utilities[b];
  });
  std::uint32_t mask = 0;
  int taken = 0;
  for (int j : idx) {
    if (taken >= budget) break;
    if (!utility_positive(utilities[j])) break;  // sorted: the rest are lower
    mask |= 1u << j;
    ++taken;
  }
  return mask;
}

}  // namespace ibg
