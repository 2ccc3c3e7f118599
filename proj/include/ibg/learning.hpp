#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ibg/game_core.hpp"
#include "ibg/types.hpp"

namespace ibg {

struct DegenerateUpdateError : std::domain_error {
  using std::domain_error::domain_error;
};

// Bayesian intermediate belief of one requester:
//   mu(theta) = f(s|theta) p(theta) / sum_theta' f(s|theta') p(theta').
// A zero normalizer (prior support disjoint from the likelihood support)
// raises; it cannot occur from a strictly positive prior.
inline Distribution intermediate_update(const Distribution& prior,
                                        int signal_idx,
                                        const SignalModel& signals, int dish) {
  const auto& rows = signals.likelihood.at(dish);
  if (prior.size() != rows.size())
    throw std::invalid_argument("intermediate_update: prior size mismatch");
  if (signal_idx < 0 || signal_idx >= static_cast<int>(rows[0].size()))
    throw std::invalid_argument("intermediate_update: signal out of range");
  Distribution posterior(prior.size());
  double normalizer = 0.0;
  for (std::size_t theta = 0; theta < prior.size(); ++theta) {
    posterior[theta] = rows[theta][signal_idx] * prior[theta];
    normalizer += posterior[theta];
  }
  if (normalizer <= 0.0)
    throw DegenerateUpdateError(
        "intermediate_update: prior support disjoint from likelihood");
  for (double& v : posterior) v /= normalizer;
  return posterior;
}

// Equal-weight linear combination for one dish: requesters contribute their
// intermediate beliefs, everyone else re-contributes the previous belief.
inline Distribution combine_dish(const Distribution& prior,
                                 const std::vector<const Distribution*>&
                                     requester_posteriors,
                                 int total_customers) {
  const int requesters = static_cast<int>(requester_posteriors.size());
  if (requesters > total_customers)
    throw std::invalid_argument("combine_dish: more requesters than "
                                "customers");
  Distribution out(prior.size(), 0.0);
  for (const Distribution* mu : requester_posteriors) {
    if (mu->size() != prior.size())
      throw std::invalid_argument("combine_dish: posterior size mismatch");
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += (*mu)[k];
  }
  const double keep = total_customers - requesters;
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = (out[k] + keep * prior[k]) / total_customers;
  return out;
}

// Whole-belief update from a slot's decisions. `posteriors[i][j]` is
// customer i's intermediate belief for dish j and is read only where
// decisions(j, i) = 1; dishes nobody requested keep their belief.
inline Belief combine(const Belief& prior, const DecisionMatrix& decisions,
                      const std::vector<std::vector<Distribution>>&
                          posteriors) {
  if (decisions.dishes != prior.dishes())
    throw std::invalid_argument("combine: dish count mismatch");
  Belief out;
  out.probs.resize(prior.dishes());
  for (int j = 0; j < prior.dishes(); ++j) {
    std::vector<const Distribution*> mus;
    for (int i = 0; i < decisions.customers; ++i)
      if (decisions.at(j, i)) mus.push_back(&posteriors.at(i).at(j));
    out.probs[j] = combine_dish(prior.probs[j], mus, decisions.customers);
  }
  return out;
}

// Estimated signal distribution under the current belief:
//   lambda(s) = sum_theta f(s|theta) p(theta).
inline Distribution predictive_distribution(const Distribution& belief_row,
                                            const SignalModel& signals,
                                            int dish) {
  const auto& rows = signals.likelihood.at(dish);
  if (belief_row.size() != rows.size())
    throw std::invalid_argument(
        "predictive_distribution: belief size mismatch");
  Distribution lambda(rows[0].size(), 0.0);
  for (std::size_t theta = 0; theta < belief_row.size(); ++theta)
    for (std::size_t s = 0; s < lambda.size(); ++s)
      lambda[s] += rows[theta][s] * belief_row[theta];
  return lambda;
}

// Rearranged multiplicative form of the same update,
//   p'(theta) = p(theta) + (1/N) sum_i d_i (f(s_i|theta)/lambda(s_i) - 1)
//               p(theta),
// driven directly by the requesters' signals. Kept alongside the linear
// form; the two agree to rounding and the tests pin that down.
inline Distribution combine_dish_multiplicative(
    const Distribution& prior, const std::vector<int>& requester_signals,
    int total_customers, const SignalModel& signals, int dish) {
  const auto& rows = signals.likelihood.at(dish);
  const Distribution lambda = predictive_distribution(prior, signals, dish);
  Distribution out = prior;
  for (int s : requester_signals) {
    if (lambda[s] <= 0.0)
      throw DegenerateUpdateError(
          "combine_dish_multiplicative: signal has zero predicted mass");
    for (std::size_t theta = 0; theta < out.size(); ++theta)
      out[theta] += (rows[theta][s] / lambda[s] - 1.0) * prior[theta] /
                    total_customers;
  }
  return out;
}

// Per-slot distances to the fully learned state.
struct ConvergenceReport {
  // ||P(t) - P*||_2 over the full belief (all dishes), one value per slot.
  std::vector<double> strong;
  // Per-dish L2 distance, strong_by_dish[slot][dish].
  std::vector<std::vector<double>> strong_by_dish;
  // Per-dish Linf gap between lambda and f(.|theta*), weak[slot][dish].
  std::vector<std::vector<double>> weak;

  int slots() const { return static_cast<int>(strong.size()); }

  // First 1-based slot whose strong distance is below `threshold`, or -1.
  int first_passage(double threshold) const {
    for (int t = 0; t < slots(); ++t)
      if (strong[t] < threshold) return t + 1;
    return -1;
  }
};

inline ConvergenceReport convergence_metrics(
    const std::vector<Belief>& trajectory, const std::vector<int>& true_states,
    const SignalModel& signals) {
  if (trajectory.empty())
    throw std::invalid_argument("convergence_metrics: empty trajectory");
  ConvergenceReport report;
  const int dishes = trajectory.front().dishes();
  for (const Belief& belief : trajectory) {
    double frobenius_sq = 0.0;
    std::vector<double> strong_j(dishes), weak_j(dishes);
    for (int j = 0; j < dishes; ++j) {
      const Distribution& row = belief.probs[j];
      double dist_sq = 0.0;
      for (std::size_t theta = 0; theta < row.size(); ++theta) {
        const double target =
            static_cast<int>(theta) == true_states[j] ? 1.0 : 0.0;
        dist_sq += (row[theta] - target) * (row[theta] - target);
      }
      strong_j[j] = std::sqrt(dist_sq);
      frobenius_sq += dist_sq;

      const Distribution lambda =
          predictive_distribution(row, signals, j);
      const Distribution& truth = signals.likelihood[j][true_states[j]];
      double gap = 0.0;
      for (std::size_t s = 0; s < lambda.size(); ++s)
        gap = std::max(gap, std::abs(lambda[s] - truth[s]));
      weak_j[j] = gap;
    }
    report.strong.push_back(std::sqrt(frobenius_sq));
    report.strong_by_dish.push_back(std::move(strong_j));
    report.weak.push_back(std::move(weak_j));
  }
  return report;
}

}  // namespace ibg
