#include "dissuasion/game_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace dissuasion {

Conditioning conditioning_for(Regime regime) {
  switch (regime) {
    case Regime::Unconditional: return Conditioning::None;
    case Regime::ActionBased: return Conditioning::ByAction;
    case Regime::SignalBased: return Conditioning::BySignal;
  }
  throw std::invalid_argument("unknown regime");
}

namespace {

constexpr std::array<State, 2> kStates{State::Good, State::Bad};
constexpr std::array<Message, 2> kMessages{Message::Silent, Message::Good};
constexpr std::array<Signal, 2> kSignals{Signal::Positive, Signal::Negative};
constexpr std::array<Action, 2> kActions{Action::Refrain, Action::Act};

int message_index(Message m) { return m == Message::Good ? 1 : 0; }

int condition_slot(Conditioning mode, Condition c) {
  switch (mode) {
    case Conditioning::None:
      if (c == Condition::Always) return 0;
      break;
    case Conditioning::ByAction:
      if (c == Condition::Refrain) return 0;
      if (c == Condition::Act) return 1;
      break;
    case Conditioning::BySignal:
      if (c == Condition::Positive) return 0;
      if (c == Condition::Negative) return 1;
      break;
  }
  throw std::invalid_argument(std::string("condition '") + to_string(c) +
                              "' is not available to this sender's conditioning mode");
}

double state_probability(State s, double q) { return s == State::Good ? q : 1 - q; }

double signal_probability(Signal sig, Action a1, State s, const Model& model) {
  if (a1 == Action::Refrain) return sig == Signal::Positive ? 1.0 : 0.0;
  const double pos = model.positive_rate(s);
  return sig == Signal::Positive ? pos : 1 - pos;
}

double act_payoff(State s, const Model& model) { return s == State::Good ? 1.0 : -model.c(); }

struct PathVisit {
  State state;
  Message m1;
  Action a1;
  Signal signal;
  Message m2;
  Action a2;
  double probability;
};

// Calls f for every positive-probability path of the strategy pair.
template <class F>
void for_each_path(const SenderStrategy& sender, const ReceiverStrategy& receiver, double q,
                   const Model& model, F&& f) {
  for (State st : kStates) {
    const double ps = state_probability(st, q);
    if (ps <= 0) continue;
    for (Message m1 : kMessages) {
      const double p1 = sender.period1.probability(m1, st);
      if (p1 <= 0) continue;
      const auto a1 = receiver.first(m1);
      if (!a1) throw UndefinedHistory(std::string("no period-1 action after message ") + to_string(m1));
      for (Signal sig : kSignals) {
        const double psig = signal_probability(sig, *a1, st, model);
        if (psig <= 0) continue;
        const Disclosure& rule = sender.period2_rule(m1, *a1, sig);
        for (Message m2 : kMessages) {
          const double p2 = rule.probability(m2, st);
          if (p2 <= 0) continue;
          const auto a2 = receiver.second(m1, sig, m2);
          if (!a2) {
            throw UndefinedHistory(std::string("no period-2 action at history (") + to_string(m1) + "," +
                                   to_string(*a1) + "," + to_string(sig) + "," + to_string(m2) + ")");
          }
          f(PathVisit{st, m1, *a1, sig, m2, *a2, ps * p1 * psig * p2});
        }
      }
    }
  }
}

// Joint (state, node) weights; a node's belief is good / (good + bad).
struct NodeWeights {
  std::array<std::array<double, 2>, 2> first{};   // [m1][state]
  std::array<std::array<double, 2>, 8> second{};  // [history][state]

  static bool interior(const std::array<double, 2>& w) { return w[0] > 0 && w[1] > 0; }
  bool interior_first(Message m1) const { return interior(first[message_index(m1)]); }
  bool interior_second(Message m1, Signal s, Message m2) const {
    return interior(second[ReceiverStrategy::history_index(m1, s, m2)]);
  }
};

NodeWeights node_weights(const SenderStrategy& sender, const ReceiverStrategy& receiver, double q,
                         const Model& model) {
  NodeWeights w;
  for_each_path(sender, receiver, q, model, [&](const PathVisit& v) {
    const int s = v.state == State::Good ? 0 : 1;
    w.first[message_index(v.m1)][s] += v.probability;
    w.second[ReceiverStrategy::history_index(v.m1, v.signal, v.m2)][s] += v.probability;
  });
  return w;
}

struct PathOutcome {
  double payoff = 0;
  double cost = 0;
  double act1 = 0;
  double act2 = 0;
  double interior = 0;
};

PathOutcome path_outcome(const PathVisit& v, const NodeWeights& w, const Model& model) {
  PathOutcome o;
  const double stage = act_payoff(v.state, model);
  if (v.a1 == Action::Act) {
    o.payoff += stage;
    o.act1 = 1;
    if (w.interior_first(v.m1)) o.interior = 1;
  }
  if (v.a2 == Action::Act) {
    o.payoff += stage;
    o.act2 = 1;
    if (w.interior_second(v.m1, v.signal, v.m2)) o.interior = 1;
  }
  o.cost = o.act1 + o.act2;
  return o;
}

}  // namespace

void SenderStrategy::set_period2(Message m1, Condition condition, Disclosure rule) {
  period2[message_index(m1)][condition_slot(mode, condition)] = rule;
}

const Disclosure& SenderStrategy::period2_rule(Message m1, Action own_action, Signal signal) const {
  int slot = 0;
  if (mode == Conditioning::ByAction) slot = own_action == Action::Refrain ? 0 : 1;
  if (mode == Conditioning::BySignal) slot = signal == Signal::Positive ? 0 : 1;
  return period2[message_index(m1)][slot];
}

SenderStrategy SenderStrategy::silent(Conditioning mode) {
  SenderStrategy s;
  s.mode = mode;
  return s;
}

SenderStrategy sender_from_report(const EquilibriumReport& report) {
  SenderStrategy s = SenderStrategy::silent(conditioning_for(report.regime));
  s.period1 = Disclosure::from_optional(report.period1_split);
  for (const auto& rule : report.period2_policy) {
    s.set_period2(rule.period1_message, rule.condition, Disclosure::from_optional(rule.split));
  }
  return s;
}

std::array<std::uint8_t, 10> ReceiverStrategy::encoding() const {
  std::array<std::uint8_t, 10> code{};
  auto enc = [](const std::optional<Action>& a) -> std::uint8_t {
    if (!a) return 0;
    return *a == Action::Refrain ? 1 : 2;
  };
  for (int i = 0; i < 2; ++i) code[i] = enc(period1[i]);
  for (int i = 0; i < 8; ++i) code[2 + i] = enc(period2[i]);
  return code;
}

ReceiverStrategy ReceiverStrategy::compliance() {
  ReceiverStrategy r;
  for (Message m1 : kMessages) {
    r.set_first(m1, m1 == Message::Good ? Action::Act : Action::Refrain);
    for (Signal s : kSignals) {
      for (Message m2 : kMessages) {
        const bool revealed = m1 == Message::Good || m2 == Message::Good;
        r.set_second(m1, s, m2, revealed ? Action::Act : Action::Refrain);
      }
    }
  }
  return r;
}

ReceiverStrategy ReceiverStrategy::ignoring_messages(BenchmarkStrategy kind) {
  ReceiverStrategy r;
  for (Message m1 : kMessages) {
    r.set_first(m1, kind == BenchmarkStrategy::RR ? Action::Refrain : Action::Act);
    for (Signal s : kSignals) {
      for (Message m2 : kMessages) {
        Action a = Action::Refrain;
        if (kind == BenchmarkStrategy::AA) a = Action::Act;
        if (kind == BenchmarkStrategy::AC && s == Signal::Positive) a = Action::Act;
        r.set_second(m1, s, m2, a);
      }
    }
  }
  return r;
}

OutcomeStats evaluate_exact(const SenderStrategy& sender, const ReceiverStrategy& receiver, double q,
                            const Model& model) {
  check_belief(q, "prior");
  const NodeWeights w = node_weights(sender, receiver, q, model);
  OutcomeStats stats;
  for_each_path(sender, receiver, q, model, [&](const PathVisit& v) {
    const PathOutcome o = path_outcome(v, w, model);
    stats.receiver_payoff += v.probability * o.payoff;
    stats.sender_cost += v.probability * o.cost;
    stats.prob_act_period1 += v.probability * o.act1;
    stats.prob_act_period2 += v.probability * o.act2;
    stats.prob_act_at_interior_belief += v.probability * o.interior;
    stats.total_probability += v.probability;
  });
  return stats;
}

std::vector<ReceiverStrategy> enumerate_receiver_strategies(const SenderStrategy& sender, double q,
                                                            const Model& model) {
  check_belief(q, "prior");
  std::vector<Message> first_nodes;
  std::vector<int> second_nodes;
  for (Message m1 : kMessages) {
    bool m1_reachable = false;
    for (State st : kStates) {
      if (state_probability(st, q) > 0 && sender.period1.probability(m1, st) > 0) m1_reachable = true;
    }
    if (!m1_reachable) continue;
    first_nodes.push_back(m1);
    for (Signal sig : kSignals) {
      for (Message m2 : kMessages) {
        bool reachable = false;
        for (State st : kStates) {
          if (!(state_probability(st, q) > 0 && sender.period1.probability(m1, st) > 0)) continue;
          for (Action a1 : kActions) {
            if (signal_probability(sig, a1, st, model) > 0 &&
                sender.period2_rule(m1, a1, sig).probability(m2, st) > 0) {
              reachable = true;
            }
          }
        }
        if (reachable) second_nodes.push_back(ReceiverStrategy::history_index(m1, sig, m2));
      }
    }
  }

  const std::size_t bits = first_nodes.size() + second_nodes.size();
  std::vector<ReceiverStrategy> all;
  all.reserve(std::size_t{1} << bits);
  for (std::uint32_t mask = 0; mask < (1u << bits); ++mask) {
    ReceiverStrategy r;
    std::size_t bit = 0;
    for (Message m1 : first_nodes) {
      r.set_first(m1, (mask >> bit++) & 1u ? Action::Act : Action::Refrain);
    }
    for (int idx : second_nodes) {
      r.period2[idx] = (mask >> bit++) & 1u ? Action::Act : Action::Refrain;
    }
    all.push_back(r);
  }
  return all;
}

BestResponse best_response(const SenderStrategy& sender, double q, const Model& model) {
  const auto candidates = enumerate_receiver_strategies(sender, q, model);
  std::vector<OutcomeStats> outcomes;
  outcomes.reserve(candidates.size());
  double best_payoff = -std::numeric_limits<double>::infinity();
  for (const auto& r : candidates) {
    outcomes.push_back(evaluate_exact(sender, r, q, model));
    best_payoff = std::max(best_payoff, outcomes.back().receiver_payoff);
  }
  double best_cost = std::numeric_limits<double>::infinity();
  for (const auto& o : outcomes) {
    if (o.receiver_payoff >= best_payoff - kIndifferenceTol) best_cost = std::min(best_cost, o.sender_cost);
  }
  std::size_t chosen = candidates.size();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& o = outcomes[i];
    if (o.receiver_payoff < best_payoff - kIndifferenceTol || o.sender_cost > best_cost + kIndifferenceTol) {
      continue;
    }
    if (chosen == candidates.size() || candidates[i].encoding() < candidates[chosen].encoding()) chosen = i;
  }
  return {candidates[chosen], outcomes[chosen]};
}

double ic_check(const SenderStrategy& sender, const ReceiverStrategy& claimed, double q, const Model& model) {
  const double claimed_payoff = evaluate_exact(sender, claimed, q, model).receiver_payoff;
  double gain = -std::numeric_limits<double>::infinity();
  for (const auto& r : enumerate_receiver_strategies(sender, q, model)) {
    gain = std::max(gain, evaluate_exact(sender, r, q, model).receiver_payoff - claimed_payoff);
  }
  return gain;
}

SimulationResult simulate(const SenderStrategy& sender, const ReceiverStrategy& receiver, double q,
                          const Model& model, std::uint64_t samples, std::uint64_t seed) {
  check_belief(q, "prior");
  if (samples == 0) throw std::invalid_argument("simulate needs at least one sample");
  const NodeWeights w = node_weights(sender, receiver, q, model);

  std::mt19937_64 gen(seed);
  auto uniform = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };

  std::array<double, 5> sum{}, sum_sq{};
  for (std::uint64_t n = 0; n < samples; ++n) {
    const double u_state = uniform(), u_m1 = uniform(), u_signal = uniform(), u_m2 = uniform();
    PathVisit v{};
    v.state = u_state < q ? State::Good : State::Bad;
    v.m1 = u_m1 < sender.period1.probability(Message::Good, v.state) ? Message::Good : Message::Silent;
    const auto a1 = receiver.first(v.m1);
    if (!a1) throw UndefinedHistory("simulation reached an undefined period-1 history");
    v.a1 = *a1;
    v.signal = (v.a1 == Action::Refrain || u_signal < model.positive_rate(v.state)) ? Signal::Positive
                                                                                     : Signal::Negative;
    const Disclosure& rule = sender.period2_rule(v.m1, v.a1, v.signal);
    v.m2 = u_m2 < rule.probability(Message::Good, v.state) ? Message::Good : Message::Silent;
    const auto a2 = receiver.second(v.m1, v.signal, v.m2);
    if (!a2) throw UndefinedHistory("simulation reached an undefined period-2 history");
    v.a2 = *a2;

    const PathOutcome o = path_outcome(v, w, model);
    const std::array<double, 5> x{o.payoff, o.cost, o.act1, o.act2, o.interior};
    for (std::size_t k = 0; k < x.size(); ++k) {
      sum[k] += x[k];
      sum_sq[k] += x[k] * x[k];
    }
  }

  const double n = static_cast<double>(samples);
  std::array<double, 5> mean{}, se{};
  for (std::size_t k = 0; k < mean.size(); ++k) {
    mean[k] = sum[k] / n;
    if (samples > 1) {
      const double var = std::max(0.0, (sum_sq[k] - n * mean[k] * mean[k]) / (n - 1));
      se[k] = std::sqrt(var / n);
    }
  }
  auto pack = [](const std::array<double, 5>& a, double total) {
    return OutcomeStats{a[0], a[1], a[2], a[3], a[4], total};
  };
  return {pack(mean, 1.0), pack(se, 0.0), samples, seed};
}

}  // namespace dissuasion
