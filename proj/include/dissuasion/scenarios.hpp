#pragma once

// Closed-form Stackelberg equilibria under the three information-provision
// regimes, plus the pre-convexification cost curves they are built from.

#include <optional>
#include <string>
#include <vector>

#include "dissuasion/model.hpp"

namespace dissuasion {

enum class Regime { Unconditional, ActionBased, SignalBased };

/// What a period-2 disclosure may be conditioned on. Unconditional rules use
/// Always; action-based rules use Refrain/Act; signal-based rules use the
/// public period-1 signal.
enum class Condition { Always, Refrain, Act, Positive, Negative };

const char* to_string(Regime r);
const char* to_string(Condition c);
/// Accepts "unconditional", "action", "signal" (and the full enum names).
Regime parse_regime(const std::string& text);

/// The condition values available to a regime, in canonical order.
std::vector<Condition> conditions_for(Regime regime);

struct Period2Rule {
  Message period1_message = Message::Silent;
  Condition condition = Condition::Always;
  std::optional<BeliefSplit> split;  // nullopt: no information
};

struct EquilibriumReport {
  Regime regime = Regime::Unconditional;
  double prior = 0;
  std::optional<BeliefSplit> period1_split;
  std::vector<Period2Rule> period2_policy;
  double receiver_payoff = 0;
  double sender_cost = 0;
  bool attains_lower_bound = false;

  /// Rule for the given branch, or nullptr when the branch is not listed.
  const Period2Rule* rule(Message period1_message, Condition condition) const;
};

/// Information only in period 1: split q into <q_i;1> above q_i.
EquilibriumReport unconditional_equilibrium(double q, const Model& model);

/// Period-2 information conditioned on refraining; above p_star the prior is
/// first split into <p_star;1>.
EquilibriumReport action_based_equilibrium(double q, const Model& model);

/// Signal-conditioned disclosure. Coincides with the action-based equilibrium
/// (conditioning on a positive signal) when alpha_g <= 1/2 or q <= p_e;
/// otherwise split into <p_e;1>, then <xi(p_e);1> after a positive signal.
EquilibriumReport signal_based_equilibrium(double q, const Model& model);

EquilibriumReport equilibrium(Regime regime, double q, const Model& model);

/// Sender's equilibrium cost only (N^U, N^A, N^S).
double equilibrium_cost(Regime regime, double q, const Model& model);

/// Sender's cost above p_star when period-2 disclosure cannot stop period-1
/// action and the receiver plays AC or AA. Requires q >= p_star.
double action_precvx_cost(double q, const Model& model);

/// Sender's cost when information can be given only in period 2 and only
/// conditioned on the signal. Requires alpha_g > 1/2.
double signal_precvx_cost(double q, const Model& model);

/// Smallest period-2 unconditional revelation probability that keeps the
/// receiver from exploring in period 1, for q in [q_i, q_m]. Checks that
/// q * gamma_hat is never below N^U(q).
double gamma_hat_unconditional(double q, const Model& model);

}  // namespace dissuasion
