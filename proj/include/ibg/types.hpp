#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace ibg {

using Distribution = std::vector<double>;

inline constexpr double kProbabilityTolerance = 1e-12;

inline bool is_distribution(const Distribution& p,
                            double tol = kProbabilityTolerance) {
  if (p.empty()) return false;
  double sum = 0.0;
  for (double v : p) {
    if (v < 0.0 || !std::isfinite(v)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

// Finite state alphabet Theta and signal/quality alphabet Q. Labels are
// numeric because signal values enter the utility arithmetically. Both
// alphabets default to {1,...,k} but may differ.
struct StateSet {
  std::vector<double> states;
  std::vector<double> signals;

  static StateSet numeric(int count) {
    StateSet s;
    s.states.resize(count);
    s.signals.resize(count);
    for (int k = 0; k < count; ++k) s.states[k] = s.signals[k] = k + 1;
    return s;
  }

  int num_states() const { return static_cast<int>(states.size()); }
  int num_signals() const { return static_cast<int>(signals.size()); }

  void validate() const {
    if (states.empty() || signals.empty())
      throw std::invalid_argument("StateSet: alphabets must be non-empty");
    for (const auto* v : {&states, &signals}) {
      for (std::size_t a = 0; a < v->size(); ++a)
        for (std::size_t b = a + 1; b < v->size(); ++b)
          if ((*v)[a] == (*v)[b])
            throw std::invalid_argument("StateSet: labels must be unique");
    }
  }

  bool operator==(const StateSet&) const = default;
};

// Shared per-dish probability estimate over the dish states.
struct Belief {
  std::vector<Distribution> probs;  // probs[dish][state]

  static Belief uniform(int dishes, int num_states) {
    Belief b;
    b.probs.assign(dishes, Distribution(num_states, 1.0 / num_states));
    return b;
  }

  // Fully converged belief: all mass on the given state index per dish.
  static Belief point_mass(int num_states, const std::vector<int>& state_idx) {
    Belief b;
    b.probs.reserve(state_idx.size());
    for (int s : state_idx) {
      if (s < 0 || s >= num_states)
        throw std::invalid_argument("Belief::point_mass: state out of range");
      Distribution row(num_states, 0.0);
      row[s] = 1.0;
      b.probs.push_back(std::move(row));
    }
    return b;
  }

  int dishes() const { return static_cast<int>(probs.size()); }

  bool valid(double tol = kProbabilityTolerance) const {
    if (probs.empty()) return false;
    for (const auto& row : probs)
      if (!is_distribution(row, tol)) return false;
    return true;
  }

  bool operator==(const Belief&) const = default;
};

// Conditional signal distribution f_j(s|theta) per dish.
struct SignalModel {
  // likelihood[dish][state][signal]
  std::vector<std::vector<Distribution>> likelihood;

  // Symmetric-noise model: the signal equals the state label with
  // probability w and is uniform over the other labels otherwise. Requires
  // the two alphabets to have equal size and w >= 1/|Q|.
  static SignalModel from_quality(double w, int dishes, int alphabet) {
    if (alphabet < 1)
      throw std::invalid_argument("SignalModel: empty alphabet");
    if (w < 1.0 / alphabet || w > 1.0)
      throw std::invalid_argument(
          "SignalModel: quality w must satisfy 1/|Q| <= w <= 1");
    const double off = alphabet > 1 ? (1.0 - w) / (alphabet - 1) : 0.0;
    std::vector<Distribution> rows(alphabet, Distribution(alphabet, off));
    for (int k = 0; k < alphabet; ++k) rows[k][k] = w;
    SignalModel m;
    m.likelihood.assign(dishes, rows);
    return m;
  }

  double prob(int dish, int state, int signal) const {
    return likelihood[dish][state][signal];
  }

  int dishes() const { return static_cast<int>(likelihood.size()); }

  void validate() const {
    if (likelihood.empty())
      throw std::invalid_argument("SignalModel: no dishes");
    for (const auto& dish : likelihood)
      for (const auto& row : dish)
        if (!is_distribution(row))
          throw std::invalid_argument(
              "SignalModel: each likelihood row must be a distribution");
  }

  bool operator==(const SignalModel&) const = default;
};

// Customer utility for one requested dish: gamma_i * q * R / n - c_j by
// default, with an optional hook for any other u(q, n) decreasing in n.
// A dish that was not requested yields utility 0.
struct UtilityModel {
  std::vector<double> gamma;  // per customer
  double base_reward = 10.0;  // R
  std::vector<double> cost;   // per dish
  std::function<double(int customer, int dish, double quality, int n_total)>
      custom;

  double value(int customer, int dish, double quality, int n_total) const {
    if (custom) return custom(customer, dish, quality, n_total);
    return gamma[customer] * quality * base_reward / n_total - cost[dish];
  }

  bool homogeneous_customers() const {
    if (custom) return false;
    for (double g : gamma)
      if (g != gamma.front()) return false;
    return true;
  }

  bool operator==(const UtilityModel& o) const {
    return gamma == o.gamma && base_reward == o.base_reward && cost == o.cost &&
           !custom && !o.custom;
  }
};

// M x N binary request profile; column i is customer i's request vector.
struct DecisionMatrix {
  int dishes = 0;
  int customers = 0;
  std::vector<std::uint8_t> cells;  // row-major: cells[dish * customers + i]

  DecisionMatrix() = default;
  DecisionMatrix(int m, int n) : dishes(m), customers(n), cells(m * n, 0) {}

  std::uint8_t& at(int dish, int customer) {
    return cells[dish * customers + customer];
  }
  std::uint8_t at(int dish, int customer) const {
    return cells[dish * customers + customer];
  }

  int row_sum(int dish) const {
    int s = 0;
    for (int i = 0; i < customers; ++i) s += at(dish, i);
    return s;
  }
  int col_sum(int customer) const {
    int s = 0;
    for (int j = 0; j < dishes; ++j) s += at(j, customer);
    return s;
  }

  std::vector<std::uint8_t> column(int customer) const {
    std::vector<std::uint8_t> c(dishes);
    for (int j = 0; j < dishes; ++j) c[j] = at(j, customer);
    return c;
  }

  bool operator==(const DecisionMatrix&) const = default;
};

// Full game description. `budget >= dishes` encodes the unconstrained game.
struct GameConfig {
  int customers = 0;  // N
  int dishes = 0;     // M
  int budget = 0;     // L
  std::vector<int> true_states;  // state index per dish
  StateSet state_set;
  SignalModel signal_model;
  double signal_quality = 0.0;  // w used to build signal_model (0 = explicit)
  UtilityModel utility;
  Belief prior;
  int slots = 1;
  int rotation_period = 100;
  std::uint64_t seed = 0;

  bool no_budget() const { return budget >= dishes; }

  void validate() const {
    if (customers < 1) throw std::invalid_argument("GameConfig: N >= 1");
    if (dishes < 1) throw std::invalid_argument("GameConfig: M >= 1");
    if (budget < 1) throw std::invalid_argument("GameConfig: L >= 1");
    state_set.validate();
    signal_model.validate();
    if (signal_model.dishes() != dishes)
      throw std::invalid_argument("GameConfig: signal model dish count");
    if (static_cast<int>(true_states.size()) != dishes)
      throw std::invalid_argument("GameConfig: true_states size");
    for (int s : true_states)
      if (s < 0 || s >= state_set.num_states())
        throw std::invalid_argument("GameConfig: true state out of range");
    if (static_cast<int>(utility.gamma.size()) != customers)
      throw std::invalid_argument("GameConfig: gamma size");
    if (static_cast<int>(utility.cost.size()) != dishes)
      throw std::invalid_argument("GameConfig: cost size");
    if (prior.dishes() != dishes || !prior.valid())
      throw std::invalid_argument("GameConfig: prior must hold one "
                                  "distribution per dish");
    for (const auto& row : prior.probs)
      if (static_cast<int>(row.size()) != state_set.num_states())
        throw std::invalid_argument("GameConfig: prior row length");
    if (slots < 1) throw std::invalid_argument("GameConfig: slots >= 1");
    if (rotation_period < 1)
      throw std::invalid_argument("GameConfig: rotation_period >= 1");
  }
};

}  // namespace ibg
