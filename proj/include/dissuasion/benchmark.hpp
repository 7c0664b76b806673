#pragma once

// The no-information benchmark: the receiver solves a two-period one-armed
// bandit alone. Its payoff is a floor for the receiver and for the
// sender's cost in every regime; its cost is a ceiling for the sender.

#include "dissuasion/model.hpp"

namespace dissuasion {

/// RR: refrain twice. AC: act, then act again iff the first signal was
/// positive. AA: act twice.
enum class BenchmarkStrategy { RR, AC, AA };

const char* to_string(BenchmarkStrategy s);

struct BenchmarkReport {
  BenchmarkStrategy strategy = BenchmarkStrategy::RR;
  double receiver_payoff = 0;
  double sender_cost = 0;
};

/// pi(q): 0 up to q_i, the AC line up to q_ii, 2u(q) above.
double no_info_payoff(double q, const Model& model);

/// N(q): expected number of times the receiver acts without information.
double no_info_cost(double q, const Model& model);

/// Optimal receiver behaviour without information. Breakpoints resolve to the
/// cheaper strategy for the sender (RR at q_i, AC at q_ii).
BenchmarkReport optimal_no_info(double q, const Model& model);

}  // namespace dissuasion
