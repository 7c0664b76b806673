#pragma once

// Game primitives for the two-period dissuasion game: parameters, belief
// arithmetic, extreme belief splits and the cutoff beliefs derived from them.

#include <optional>
#include <vector>

namespace dissuasion {

/// Absolute tolerance for equalities between closed-form quantities.
inline constexpr double kExactTol = 1e-12;
/// Tolerance for comparative (ordering) assertions.
inline constexpr double kCompareTol = 1e-9;

enum class State { Good, Bad };
enum class Signal { Positive, Negative };
enum class Action { Refrain, Act };
enum class Message { Good, Silent };  // g and ℓ

const char* to_string(Signal s);
const char* to_string(Action a);
const char* to_string(Message m);

/// Primitives of the game. `c` is the receiver's expected loss from acting in
/// the bad state; `alpha_g` / `alpha_l` are the probabilities that acting
/// produces a positive signal in the good / bad state.
struct GameParams {
  double c = 1.0;
  double alpha_g = 0.75;
  double alpha_l = 0.25;
};

/// Returns `params` unchanged, or throws std::domain_error naming the
/// violated constraint.
GameParams validate_params(const GameParams& params);

/// Cutoff beliefs. `p_star_star` and `p_e` exist only when alpha_g > 1/2.
struct Thresholds {
  double q_i = 0;          // RR / AC boundary
  double q_ii = 0;         // AC / AA boundary
  double q_m = 0;          // zero of the one-stage payoff
  double p_star = 0;       // fixed point of the no-information payoff
  std::optional<double> p_star_star;
  std::optional<double> p_e;
};

/// Validated parameters together with their thresholds. Immutable once built.
class Model {
 public:
  explicit Model(const GameParams& params);

  const GameParams& params() const { return params_; }
  const Thresholds& thresholds() const { return thresholds_; }

  double c() const { return params_.c; }
  double alpha_g() const { return params_.alpha_g; }
  double alpha_l() const { return params_.alpha_l; }
  /// Probability of a positive signal after acting in `state`.
  double positive_rate(State state) const {
    return state == State::Good ? params_.alpha_g : params_.alpha_l;
  }

 private:
  GameParams params_;
  Thresholds thresholds_;
};

/// Computes every threshold and checks their mutual ordering; a failed check
/// throws std::logic_error since it can only come from a bug.
Thresholds thresholds(const GameParams& params);

/// Receiver's expected stage payoff from acting at belief q: q - (1-q)c.
double stage_payoff(double q, const Model& model);
double stage_payoff(double q, const GameParams& params);

/// Bayes update of belief q after observing `signal` from acting.
/// Beliefs 0 and 1 are absorbing.
double posterior_update(double q, Signal signal, const Model& model);

struct SplitBranch {
  double posterior = 0;
  double probability = 0;
};

/// A Bayes-plausible decomposition of `prior`. For the two-branch extreme
/// split <r;1>, `gamma` is the probability of message g in the good state.
/// Zero-probability branches are dropped, so a no-information split has a
/// single branch.
struct BeliefSplit {
  double prior = 0;
  double gamma = 0;
  std::vector<SplitBranch> branches;

  double mean() const;
  double total_probability() const;
};

/// Splits q into <r;1>: reveal the good state with probability
/// gamma = (q-r)/((1-r)q), otherwise pool. Requires 0 <= r <= q, q > 0.
BeliefSplit make_split(double q, double r);

/// (q - pi(q)) / (1 - pi(q)); the posterior left after the period-2 split that
/// hands the receiver exactly the no-information payoff. Requires q <= p_star.
double xi(double q, const Model& model);

/// Throws std::domain_error unless 0 <= q <= 1.
void check_belief(double q, const char* what = "belief");

}  // namespace dissuasion
