#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "ibg/rng.hpp"
#include "ibg/types.hpp"

namespace ibg {

// Strict-positivity dead band for utility comparisons: values within the
// band count as non-positive, so a tie never triggers a request.
inline constexpr double kUtilityDeadband = 1e-12;

inline bool utility_positive(double u) { return u > kUtilityDeadband; }

// Expected utility of requesting a dish when n_total customers (including
// the requester) end up sharing it:
//   sum_theta sum_q u_i(q, n_total) f_j(q|theta) p_j(theta).
inline double expected_utility(const Distribution& belief_row,
                               const SignalModel& signals,
                               const UtilityModel& utility, int customer,
                               int dish, int n_total,
                               const StateSet& state_set) {
  if (dish < 0 || dish >= signals.dishes())
    throw std::domain_error("expected_utility: dish index out of range");
  if (customer < 0 || customer >= static_cast<int>(utility.gamma.size()))
    throw std::domain_error("expected_utility: customer index out of range");
  if (n_total < 1)
    throw std::domain_error("expected_utility: n_total must be >= 1");
  const auto& rows = signals.likelihood[dish];
  if (belief_row.size() != rows.size())
    throw std::domain_error("expected_utility: belief/likelihood mismatch");
  double total = 0.0;
  for (std::size_t theta = 0; theta < rows.size(); ++theta) {
    if (belief_row[theta] == 0.0) continue;
    double inner = 0.0;
    for (std::size_t q = 0; q < rows[theta].size(); ++q)
      inner += utility.value(customer, dish, state_set.signals[q], n_total) *
               rows[theta][q];
    total += inner * belief_row[theta];
  }
  return total;
}

inline double expected_utility(const GameConfig& cfg, const Belief& beliefs,
                               int customer, int dish, int n_total) {
  return expected_utility(beliefs.probs.at(dish), cfg.signal_model,
                          cfg.utility, customer, dish, n_total, cfg.state_set);
}

// Draws one quality realization q ~ f_j(.|theta) for a dish; this is also
// the signal every requester of the dish infers. Returns the signal index.
inline int realize_signal(int true_state_idx, const SignalModel& signals,
                          int dish, Rng& rng) {
  if (dish < 0 || dish >= signals.dishes())
    throw std::domain_error("realize_signal: dish index out of range");
  const auto& dish_rows = signals.likelihood[dish];
  if (true_state_idx < 0 ||
      true_state_idx >= static_cast<int>(dish_rows.size()))
    throw std::domain_error("realize_signal: state index out of range");
  return sample_categorical(rng, dish_rows[true_state_idx]);
}

// Utility actually received for one dish once the quality realization and
// the total requester count are known. Non-requested dishes yield 0.
inline double realized_utility(double quality_value, int n_total, int customer,
                               int dish, const UtilityModel& utility,
                               bool requested = true) {
  if (!requested) return 0.0;
  if (n_total < 1)
    throw std::invalid_argument(
        "realized_utility: requested dish with no requesters");
  return utility.value(customer, dish, quality_value, n_total);
}

// Precomputed expected utilities for one solve: eu(position, dish, n) for
// deciders at positions 1..N, where `order` maps positions to customer ids
// (successor prediction uses the successors' own utility parameters).
class ExpectedUtilityTable {
 public:
  ExpectedUtilityTable(const GameConfig& cfg, const Belief& beliefs,
                       std::span<const int> order)
      : dishes_(cfg.dishes), customers_(cfg.customers) {
    if (static_cast<int>(order.size()) != customers_)
      throw std::invalid_argument("ExpectedUtilityTable: order size");
    values_.resize(static_cast<std::size_t>(customers_) * dishes_ *
                   customers_);
    for (int pos = 1; pos <= customers_; ++pos)
      for (int j = 0; j < dishes_; ++j)
        for (int n = 1; n <= customers_; ++n)
          values_[offset(pos, j, n)] =
              expected_utility(cfg, beliefs, order[pos - 1], j, n);
  }

  // n is the total number of sharers including the requester, 1..N.
  double operator()(int pos, int dish, int n) const {
    return values_[offset(pos, dish, n)];
  }

 private:
  std::size_t offset(int pos, int dish, int n) const {
    return (static_cast<std::size_t>(pos - 1) * dishes_ + dish) * customers_ +
           (n - 1);
  }

  int dishes_;
  int customers_;
  std::vector<double> values_;
};

inline std::vector<int> identity_order(int n) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  return order;
}

}  // namespace ibg
