#pragma once

// Exact evaluation of the extensive-form game for arbitrary pure receiver
// strategies, receiver best responses by enumeration, incentive checks and
// seeded Monte Carlo playouts.
//
// Histories are explicit: (period-1 message, own period-1 action, signal,
// period-2 message). Acting is free of information when the receiver
// refrains: the signal is then positive in both states. Beliefs at every node
// are recomputed from the path weights of the history.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dissuasion/benchmark.hpp"
#include "dissuasion/model.hpp"
#include "dissuasion/scenarios.hpp"

namespace dissuasion {

enum class Conditioning { None, ByAction, BySignal };

Conditioning conditioning_for(Regime regime);

/// A two-message rule: probability of sending g in each state. Message ℓ is
/// sent otherwise. An extreme split <r;1> has good_rate = gamma, bad_rate = 0.
struct Disclosure {
  double good_rate = 0;
  double bad_rate = 0;

  static Disclosure silent() { return {}; }
  static Disclosure from_split(const BeliefSplit& split) { return {split.gamma, 0.0}; }
  static Disclosure from_optional(const std::optional<BeliefSplit>& split) {
    return split ? from_split(*split) : silent();
  }

  double probability(Message m, State s) const {
    const double g = s == State::Good ? good_rate : bad_rate;
    return m == Message::Good ? g : 1 - g;
  }
};

/// Commitment messaging plan. period2 is indexed by the period-1 message and
/// a condition slot: slot 0 for None; Refrain/Act for ByAction;
/// Positive/Negative for BySignal.
struct SenderStrategy {
  Conditioning mode = Conditioning::None;
  Disclosure period1;
  std::array<std::array<Disclosure, 2>, 2> period2{};

  void set_period2(Message period1_message, Condition condition, Disclosure rule);
  const Disclosure& period2_rule(Message period1_message, Action own_action, Signal signal) const;

  /// No information in either period.
  static SenderStrategy silent(Conditioning mode = Conditioning::None);
};

/// Builds the canonical messaging plan described by an equilibrium report.
SenderStrategy sender_from_report(const EquilibriumReport& report);

/// Pure receiver strategy. Since the period-1 action is a function of the
/// period-1 message, a period-2 history is identified by (m1, signal, m2);
/// the own action is period1[m1]. Unset entries mark unreachable histories.
struct ReceiverStrategy {
  std::array<std::optional<Action>, 2> period1{};
  std::array<std::optional<Action>, 8> period2{};

  static constexpr int history_index(Message m1, Signal s, Message m2) {
    return (m1 == Message::Good ? 4 : 0) + (s == Signal::Negative ? 2 : 0) + (m2 == Message::Good ? 1 : 0);
  }

  std::optional<Action> first(Message m1) const { return period1[m1 == Message::Good ? 1 : 0]; }
  std::optional<Action> second(Message m1, Signal s, Message m2) const {
    return period2[history_index(m1, s, m2)];
  }
  void set_first(Message m1, Action a) { period1[m1 == Message::Good ? 1 : 0] = a; }
  void set_second(Message m1, Signal s, Message m2, Action a) { period2[history_index(m1, s, m2)] = a; }

  /// Entry-wise code used for deterministic tie-breaking: 0 unset, 1 R, 2 A.
  std::array<std::uint8_t, 10> encoding() const;

  /// Acts exactly when a message g has been received (in either period).
  static ReceiverStrategy compliance();
  /// The benchmark strategy played while ignoring all messages.
  static ReceiverStrategy ignoring_messages(BenchmarkStrategy kind);
};

struct OutcomeStats {
  double receiver_payoff = 0;
  double sender_cost = 0;
  double prob_act_period1 = 0;
  double prob_act_period2 = 0;
  double prob_act_at_interior_belief = 0;
  /// Sum of path probabilities; equals 1 for a well-formed evaluation.
  double total_probability = 0;
};

/// Thrown when a receiver strategy is consulted at a positive-probability
/// history it leaves undefined.
struct UndefinedHistory : std::logic_error {
  using std::logic_error::logic_error;
};

OutcomeStats evaluate_exact(const SenderStrategy& sender, const ReceiverStrategy& receiver, double q,
                            const Model& model);

/// Every pure receiver strategy over the histories that some receiver
/// behaviour reaches with positive probability against `sender`. The count is
/// 2^(reachable m1) * 2^(reachable (m1, signal, m2) tuples).
std::vector<ReceiverStrategy> enumerate_receiver_strategies(const SenderStrategy& sender, double q,
                                                            const Model& model);

struct BestResponse {
  ReceiverStrategy strategy;
  OutcomeStats outcome;
};

/// Receiver payoffs within this distance count as a tie.
inline constexpr double kIndifferenceTol = 1e-12;

/// Payoff-maximising receiver strategy. Ties go to the lowest sender cost,
/// then to the lexicographically smallest encoding.
BestResponse best_response(const SenderStrategy& sender, double q, const Model& model);

/// Largest payoff gain any receiver strategy has over `claimed`.
double ic_check(const SenderStrategy& sender, const ReceiverStrategy& claimed, double q, const Model& model);

struct SimulationResult {
  OutcomeStats mean;
  OutcomeStats standard_error;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo playouts with std::mt19937_64 seeded by `seed`. Each playout
/// draws exactly four uniforms, in order: state, period-1 message, signal,
/// period-2 message. A uniform is the top 53 bits of one generator output
/// scaled by 2^-53.
SimulationResult simulate(const SenderStrategy& sender, const ReceiverStrategy& receiver, double q,
                          const Model& model, std::uint64_t samples, std::uint64_t seed);

}  // namespace dissuasion
