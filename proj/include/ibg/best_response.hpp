#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ibg/candidates.hpp"
#include "ibg/game_core.hpp"
#include "ibg/types.hpp"

namespace ibg {

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// What the decider at position i has seen: per-dish counts of prior
// requesters in the current slot.
struct Observation {
  int customer = 1;         // 1-based decision position
  std::vector<int> counts;  // n_{i,j}, each in [0, customer-1]
};

// Predicted per-dish counts of subsequent requesters.
struct Prediction {
  std::vector<int> counts;  // m_{i,j}, each in [0, N-customer]
};

// ---------------------------------------------------------------------------
// Elementary (single-dish) recursive best response.
//
// The decider at position i tentatively requests, predicts the subsequent
// deciders under that assumption, and commits iff the resulting expected
// utility is strictly positive; otherwise the prediction is redone under
// "no request" so the returned m_i matches the chosen branch. Memoization
// on (position, observed count) is exact: the recursion is a pure function
// of that pair.
// ---------------------------------------------------------------------------
class ElementarySolver {
 public:
  // eu holds expected utilities indexed by (position-1)*N + (n-1), where n
  // counts all sharers including the requester.
  ElementarySolver(std::vector<double> eu, int customers, bool use_memo = true)
      : eu_(std::move(eu)),
        customers_(customers),
        use_memo_(use_memo),
        memo_(use_memo ? static_cast<std::size_t>(customers_) *
                             (customers_ + 1)
                       : 0) {}

  static ElementarySolver for_dish(const ExpectedUtilityTable& table, int dish,
                                   int customers, bool use_memo = true) {
    std::vector<double> eu(static_cast<std::size_t>(customers) * customers);
    for (int pos = 1; pos <= customers; ++pos)
      for (int n = 1; n <= customers; ++n)
        eu[static_cast<std::size_t>(pos - 1) * customers + (n - 1)] =
            table(pos, dish, n);
    return ElementarySolver(std::move(eu), customers, use_memo);
  }

  // Returns (d_i, m_i) for the decider at `pos` given `n_before` prior
  // requesters of the dish.
  std::pair<int, int> decide(int pos, int n_before) {
    if (pos < 1 || pos > customers_)
      throw std::domain_error("ElementarySolver: position out of range");
    if (n_before < 0 || n_before > pos - 1)
      throw std::domain_error("ElementarySolver: observation out of range");
    Node* slot = nullptr;
    if (use_memo_) {
      slot = &memo_[static_cast<std::size_t>(pos - 1) * (customers_ + 1) +
                    n_before];
      if (slot->d >= 0) return {slot->d, slot->m};
    }
    int d;
    int m;
    if (pos == customers_) {
      d = utility_positive(eu(pos, n_before + 1)) ? 1 : 0;
      m = 0;
    } else {
      auto [d1, m1] = decide(pos + 1, n_before + 1);
      m = m1 + d1;
      if (utility_positive(eu(pos, n_before + m + 1))) {
        d = 1;
      } else {
        auto [d0, m0] = decide(pos + 1, n_before);
        m = m0 + d0;
        d = 0;
      }
    }
    if (slot) {
      slot->d = static_cast<std::int8_t>(d);
      slot->m = static_cast<std::int16_t>(m);
    }
    return {d, m};
  }

 private:
  struct Node {
    std::int8_t d = -1;
    std::int16_t m = 0;
  };

  double eu(int pos, int n) const {
    return eu_[static_cast<std::size_t>(pos - 1) * customers_ + (n - 1)];
  }

  std::vector<double> eu_;
  int customers_;
  bool use_memo_;
  std::vector<Node> memo_;
};

// ---------------------------------------------------------------------------
// Budgeted recursive best response over the candidate set Phi.
//
// Per-dish counts are packed into one 64-bit word (bit_width(N) bits per
// dish), so a memo key is (position, packed counts) and vector sums become
// single integer additions. Memoization is exact for the same reason as in
// the elementary case. One solver instance is not thread-safe; solvers are
// cheap to construct per thread.
// ---------------------------------------------------------------------------
class JointSolver {
 public:
  struct Decision {
    std::uint32_t cand = 0;  // index into the candidate set
    std::uint64_t m = 0;     // packed per-dish successor counts
  };

  JointSolver(const GameConfig& cfg, const Belief& beliefs,
              std::span<const int> order, bool use_memo = true)
      : cands_(CandidateSet::enumerate(cfg.dishes, cfg.budget)),
        eu_(cfg, beliefs, order),
        order_(order.begin(), order.end()),
        dishes_(cfg.dishes),
        customers_(cfg.customers),
        use_memo_(use_memo) {
    bits_ = std::bit_width(static_cast<unsigned>(customers_));
    if ((dishes_ + 1) * bits_ > 64)
      throw CapacityError("JointSolver: counts do not fit one 64-bit key");
    cand_packed_.resize(cands_.size());
    for (int h = 0; h < cands_.size(); ++h) {
      std::uint64_t p = 0;
      for (int j : cands_.dish_lists[h]) p |= 1ull << (j * bits_);
      cand_packed_[h] = p;
    }
    util_buf_.resize(dishes_);
  }

  JointSolver(const GameConfig& cfg, const Belief& beliefs,
              bool use_memo = true)
      : JointSolver(cfg, beliefs, identity_helper(cfg.customers), use_memo) {}

  const CandidateSet& candidates() const { return cands_; }

  std::uint64_t pack(std::span<const int> counts) const {
    std::uint64_t packed = 0;
    for (int j = 0; j < dishes_; ++j)
      packed |= static_cast<std::uint64_t>(counts[j]) << (j * bits_);
    return packed;
  }

  std::vector<int> unpack(std::uint64_t packed) const {
    std::vector<int> counts(dishes_);
    for (int j = 0; j < dishes_; ++j) counts[j] = field(packed, j);
    return counts;
  }

  Decision decide(int pos, std::uint64_t counts) {
    const std::uint64_t key =
        (static_cast<std::uint64_t>(pos) << (dishes_ * bits_)) | counts;
    if (use_memo_) {
      if (const Entry* e = cache_.find(key)) return {e->cand, e->m};
    }
    Decision out;
    if (pos == customers_) {
      // Last decider: requests the dishes with the highest strictly
      // positive utilities, at most L of them.
      for (int j = 0; j < dishes_; ++j)
        util_buf_[j] = eu_(pos, j, field(counts, j) + 1);
      const std::uint32_t mask = top_budget_positive(util_buf_, cands_.budget);
      out.cand = static_cast<std::uint32_t>(cands_.index_of(mask));
      out.m = 0;
    } else {
      double best_u = 0.0;
      bool first = true;
      for (int h = 0; h < cands_.size(); ++h) {
        const Decision child = decide(pos + 1, counts + cand_packed_[h]);
        const std::uint64_t m = child.m + cand_packed_[child.cand];
        double u = 0.0;
        for (int j : cands_.dish_lists[h])
          u += eu_(pos, j, field(counts, j) + field(m, j) + 1);
        if (first || u > best_u + kUtilityDeadband) {
          best_u = u;
          out.cand = static_cast<std::uint32_t>(h);
          out.m = m;
          first = false;
        }
      }
    }
    if (use_memo_) cache_.insert(key, out.cand, out.m);
    return out;
  }

  // Plays positions 1..N in order, accumulating observations; columns are
  // written at the customer ids the order maps positions to.
  DecisionMatrix solve() {
    DecisionMatrix d(dishes_, customers_);
    std::uint64_t counts = 0;
    for (int pos = 1; pos <= customers_; ++pos) {
      const Decision r = decide(pos, counts);
      for (int j : cands_.dish_lists[r.cand]) d.at(j, order_[pos - 1]) = 1;
      counts += cand_packed_[r.cand];
    }
    return d;
  }

 private:
  struct Entry {
    std::uint64_t key = 0;
    std::uint32_t cand = 0;
    std::uint64_t m = 0;
  };

  // Open-addressing cache; keys are never zero because pos >= 1 occupies
  // the bits above the packed counts.
  class Cache {
   public:
    Cache() { table_.resize(1u << 12); }
    const Entry* find(std::uint64_t key) const {
      std::size_t i = slot(key);
      for (;;) {
        const Entry& e = table_[i];
        if (e.key == 0) return nullptr;
        if (e.key == key) return &e;
        i = (i + 1) & mask();
      }
    }
    void insert(std::uint64_t key, std::uint32_t cand, std::uint64_t m) {
      if ((count_ + 1) * 10 > table_.size() * 7) grow();
      std::size_t i = slot(key);
      while (table_[i].key != 0) {
        if (table_[i].key == key) return;
        i = (i + 1) & mask();
      }
      table_[i] = {key, cand, m};
      ++count_;
    }

   private:
    std::size_t mask() const { return table_.size() - 1; }
    std::size_t slot(std::uint64_t key) const {
      return static_cast<std::size_t>(splitmix64(key)) & mask();
    }
    void grow() {
      std::vector<Entry> old = std::move(table_);
      table_.assign(old.size() * 2, Entry{});
      count_ = 0;
      for (const Entry& e : old) {
        if (e.key == 0) continue;
        std::size_t i = slot(e.key);
        while (table_[i].key != 0) i = (i + 1) & mask();
        table_[i] = e;
        ++count_;
      }
    }
    std::vector<Entry> table_;
    std::size_t count_ = 0;
  };

  static std::vector<int> identity_helper(int n) { return identity_order(n); }

  int field(std::uint64_t packed, int dish) const {
    return static_cast<int>((packed >> (dish * bits_)) &
                            ((1ull << bits_) - 1));
  }

  CandidateSet cands_;
  ExpectedUtilityTable eu_;
  std::vector<int> order_;
  int dishes_;
  int customers_;
  int bits_ = 0;
  bool use_memo_;
  std::vector<std::uint64_t> cand_packed_;
  std::vector<double> util_buf_;
  Cache cache_;
};

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

// Single-dish best response for the decider at position `customer` (1-based)
// given `n_before` prior requesters. Returns (d_i, m_i).
inline std::pair<int, int> br_eibg(const Distribution& belief_row,
                                   int n_before, int customer,
                                   const GameConfig& cfg, int dish = 0) {
  const int n = cfg.customers;
  if (customer < 1 || customer > n)
    throw std::domain_error("br_eibg: customer index out of range");
  std::vector<double> eu(static_cast<std::size_t>(n) * n);
  for (int pos = 1; pos <= n; ++pos)
    for (int k = 1; k <= n; ++k)
      eu[static_cast<std::size_t>(pos - 1) * n + (k - 1)] =
          expected_utility(belief_row, cfg.signal_model, cfg.utility, pos - 1,
                           dish, k, cfg.state_set);
  ElementarySolver solver(std::move(eu), n);
  return solver.decide(customer, n_before);
}

struct BrIbgResult {
  std::vector<std::uint8_t> decision;
  Prediction prediction;
};

// Budgeted best response for the decider at position `customer` given the
// per-dish observation. Returns the chosen request vector and the
// prediction consistent with it.
inline BrIbgResult br_ibg(const Belief& beliefs, const Observation& obs,
                          int customer, const GameConfig& cfg) {
  if (customer < 1 || customer > cfg.customers)
    throw std::domain_error("br_ibg: customer index out of range");
  if (static_cast<int>(obs.counts.size()) != cfg.dishes)
    throw std::domain_error("br_ibg: observation size mismatch");
  for (int c : obs.counts)
    if (c < 0 || c > customer - 1)
      throw std::domain_error("br_ibg: observation count out of range");
  JointSolver solver(cfg, beliefs);
  const auto r = solver.decide(customer, solver.pack(obs.counts));
  BrIbgResult out;
  out.decision.assign(cfg.dishes, 0);
  for (int j : solver.candidates().dish_lists[r.cand]) out.decision[j] = 1;
  out.prediction.counts = solver.unpack(r.m);
  return out;
}

inline DecisionMatrix solve_equilibrium_joint(const GameConfig& cfg,
                                              const Belief& beliefs,
                                              std::span<const int> order,
                                              bool use_memo = true) {
  JointSolver solver(cfg, beliefs, order, use_memo);
  return solver.solve();
}

inline DecisionMatrix solve_equilibrium_joint(const GameConfig& cfg,
                                              const Belief& beliefs,
                                              bool use_memo = true) {
  return solve_equilibrium_joint(cfg, beliefs, identity_order(cfg.customers),
                                 use_memo);
}

// Unconstrained game solved dish by dish (the joint game decouples when the
// budget does not bind).
inline DecisionMatrix solve_equilibrium_elementary(const GameConfig& cfg,
                                                   const Belief& beliefs,
                                                   std::span<const int> order) {
  if (!cfg.no_budget())
    throw std::invalid_argument(
        "solve_equilibrium_elementary: requires L >= M");
  const int n = cfg.customers;
  ExpectedUtilityTable table(cfg, beliefs, order);
  DecisionMatrix d(cfg.dishes, n);
  for (int j = 0; j < cfg.dishes; ++j) {
    ElementarySolver solver = ElementarySolver::for_dish(table, j, n);
    int count = 0;
    for (int pos = 1; pos <= n; ++pos) {
      const auto [di, mi] = solver.decide(pos, count);
      d.at(j, order[pos - 1]) = static_cast<std::uint8_t>(di);
      count += di;
    }
  }
  return d;
}

inline DecisionMatrix solve_equilibrium_elementary(const GameConfig& cfg,
                                                   const Belief& beliefs) {
  return solve_equilibrium_elementary(cfg, beliefs,
                                      identity_order(cfg.customers));
}

inline DecisionMatrix solve_equilibrium(const GameConfig& cfg,
                                        const Belief& beliefs,
                                        std::span<const int> order) {
  return cfg.no_budget() ? solve_equilibrium_elementary(cfg, beliefs, order)
                         : solve_equilibrium_joint(cfg, beliefs, order);
}

inline DecisionMatrix solve_equilibrium(const GameConfig& cfg,
                                        const Belief& beliefs) {
  return solve_equilibrium(cfg, beliefs, identity_order(cfg.customers));
}

// ---------------------------------------------------------------------------
// Equilibrium verification and structural checks
// ---------------------------------------------------------------------------

struct NashReport {
  bool is_equilibrium = true;
  int customer = -1;                      // first customer with a deviation
  std::vector<std::uint8_t> improvement;  // the better request vector
  double gain = 0.0;
};

// Exhaustive no-profitable-deviation check: holding every other column
// fixed, no candidate may beat customer i's column by more than `tol`.
inline NashReport verify_nash(const DecisionMatrix& d, const Belief& beliefs,
                              const GameConfig& cfg, double tol = 1e-9) {
  if (d.dishes != cfg.dishes || d.customers != cfg.customers)
    throw std::invalid_argument("verify_nash: matrix shape mismatch");
  const CandidateSet cands = CandidateSet::enumerate(cfg.dishes, cfg.budget);
  const auto order = identity_order(cfg.customers);
  const ExpectedUtilityTable eu(cfg, beliefs, order);
  std::vector<int> totals(cfg.dishes);
  for (int j = 0; j < cfg.dishes; ++j) totals[j] = d.row_sum(j);

  NashReport report;
  for (int i = 0; i < cfg.customers; ++i) {
    double current = 0.0;
    for (int j = 0; j < cfg.dishes; ++j)
      if (d.at(j, i)) current += eu(i + 1, j, totals[j]);
    for (int h = 0; h < cands.size(); ++h) {
      double u = 0.0;
      for (int j : cands.dish_lists[h])
        u += eu(i + 1, j, totals[j] - d.at(j, i) + 1);
      if (u > current + tol) {
        report.is_equilibrium = false;
        report.customer = i;
        report.improvement.assign(cfg.dishes, 0);
        for (int j : cands.dish_lists[h]) report.improvement[j] = 1;
        report.gain = u - current;
        return report;
      }
    }
  }
  return report;
}

// Largest sharer count n in [0, max_customers] at which the expected
// utility stays strictly positive. Assumes a homogeneous utility (the
// first customer's parameters are used) decreasing in n.
inline int compute_n_T(const Distribution& belief_row,
                       const SignalModel& signals, const UtilityModel& utility,
                       const StateSet& state_set, int dish,
                       int max_customers) {
  int n_t = 0;
  for (int n = 1; n <= max_customers; ++n)
    if (utility_positive(expected_utility(belief_row, signals, utility, 0,
                                          dish, n, state_set)))
      n_t = n;
  return n_t;
}

inline int compute_n_T(const GameConfig& cfg, const Belief& beliefs,
                       int dish = 0) {
  return compute_n_T(beliefs.probs.at(dish), cfg.signal_model, cfg.utility,
                     cfg.state_set, dish, cfg.customers);
}

// True iff every row is a prefix of ones (columns ordered by decision
// order).
inline bool threshold_check(const DecisionMatrix& d) {
  for (int j = 0; j < d.dishes; ++j)
    for (int i = 1; i < d.customers; ++i)
      if (d.at(j, i) > d.at(j, i - 1)) return false;
  return true;
}

// Equal-sharing structure of the homogeneous equal-state budget game:
// every dish is requested by n_T customers when n_T <= floor(NL/M), and by
// floor(NL/M) or ceil(NL/M) otherwise.
inline bool equal_share_check(const DecisionMatrix& d, int n_t,
                              const GameConfig& cfg) {
  if (!cfg.utility.homogeneous_customers())
    throw std::domain_error("equal_share_check: customers not homogeneous");
  for (double c : cfg.utility.cost)
    if (c != cfg.utility.cost.front())
      throw std::domain_error("equal_share_check: dish costs differ");
  for (int s : cfg.true_states)
    if (s != cfg.true_states.front())
      throw std::domain_error("equal_share_check: dish states differ");
  const long long effective_budget = std::min(cfg.budget, cfg.dishes);
  const long long total = static_cast<long long>(cfg.customers) *
                          effective_budget;
  const long long floor_share = total / cfg.dishes;
  const long long ceil_share = (total + cfg.dishes - 1) / cfg.dishes;
  for (int j = 0; j < d.dishes; ++j) {
    const int s = d.row_sum(j);
    if (n_t <= floor_share) {
      if (s != n_t) return false;
    } else {
      if (s != floor_share && s != ceil_share) return false;
    }
  }
  return true;
}

}  // namespace ibg
