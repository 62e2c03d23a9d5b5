#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "marsim/rng.hpp"

namespace marsim {

// Discrete policy: a probability row per state, initialized equiprobable.
// Updates implement the direct-policy-search rule
//   pi(s,a*) <- pi + beta [1 - pi]      (reinforced action)
//   pi(s,a)  <- pi + beta [0 - pi]      (every other action)
// iterated |r| times. For negative rewards the taken action is demoted via
// the second equation and the freed mass goes to the remaining actions in
// proportion to their current probabilities.
class PolicyTable {
 public:
  PolicyTable(int state_count, int action_count)
      : states_(state_count),
        actions_(action_count),
        probs_(static_cast<std::size_t>(state_count) * action_count,
               1.0 / action_count) {}

  int state_count() const { return states_; }
  int action_count() const { return actions_; }

  double prob(int s, int a) const { return probs_[index(s, a)]; }

  // One uniform draw per call.
  int sample(int s, Rng& rng) const {
    const double u = rng.uniform01();
    const double* row = &probs_[index(s, 0)];
    double cum = 0.0;
    for (int a = 0; a < actions_; ++a) {
      cum += row[a];
      if (u < cum) return a;
    }
    return actions_ - 1;
  }

  void update(int s, int taken, int reward, double beta) {
    if (reward == 0) return;
    const int iterations = reward > 0 ? reward : -reward;
    double* row = &probs_[index(s, 0)];
    for (int it = 0; it < iterations; ++it) {
      if (reward > 0) {
        for (int a = 0; a < actions_; ++a) {
          if (a == taken)
            row[a] += beta * (1.0 - row[a]);
          else
            row[a] += beta * (0.0 - row[a]);
        }
      } else {
        const double freed = beta * row[taken];
        row[taken] -= freed;
        double others = 0.0;
        for (int a = 0; a < actions_; ++a)
          if (a != taken) others += row[a];
        if (others > 0.0) {
          // ratio first: row[a] / others <= 1, so denormal remainders
          // cannot overflow the redistribution
          for (int a = 0; a < actions_; ++a)
            if (a != taken) row[a] += freed * (row[a] / others);
        } else {
          const double share = freed / (actions_ - 1);
          for (int a = 0; a < actions_; ++a)
            if (a != taken) row[a] += share;
        }
      }
    }
  }

  bool is_uniform(double tol = 1e-12) const {
    const double p = 1.0 / actions_;
    for (double v : probs_)
      if (std::fabs(v - p) > tol) return false;
    return true;
  }

  double row_sum(int s) const {
    double sum = 0.0;
    for (int a = 0; a < actions_; ++a) sum += prob(s, a);
    return sum;
  }

 private:
  std::size_t index(int s, int a) const {
    return static_cast<std::size_t>(s) * actions_ + a;
  }

  int states_;
  int actions_;
  std::vector<double> probs_;
};

// Auxiliary action-value table backing the trade-timing filter: running mean
// of observed payoffs per (state, action). A cell never visited stays at the
// neutral value 0.
class ActionValueTable {
 public:
  ActionValueTable(int state_count, int action_count)
      : states_(state_count),
        actions_(action_count),
        values_(static_cast<std::size_t>(state_count) * action_count, 0.0),
        counts_(static_cast<std::size_t>(state_count) * action_count, 0) {}

  int state_count() const { return states_; }
  int action_count() const { return actions_; }

  double value(int s, int a) const { return values_[index(s, a)]; }
  std::uint64_t count(int s, int a) const { return counts_[index(s, a)]; }

  void record(int s, int a, double payoff) {
    const std::size_t i = index(s, a);
    counts_[i] += 1;
    values_[i] += (payoff - values_[i]) / static_cast<double>(counts_[i]);
  }

  double max_value(int s) const {
    double best = value(s, 0);
    for (int a = 1; a < actions_; ++a) best = std::max(best, value(s, a));
    return best;
  }

 private:
  std::size_t index(int s, int a) const {
    return static_cast<std::size_t>(s) * actions_ + a;
  }

  int states_;
  int actions_;
  std::vector<double> values_;
  std::vector<std::uint64_t> counts_;
};

}  // namespace marsim
