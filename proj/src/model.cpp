#include "dissuasion/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dissuasion/benchmark.hpp"

namespace dissuasion {

const char* to_string(Signal s) { return s == Signal::Positive ? "+" : "-"; }
const char* to_string(Action a) { return a == Action::Act ? "A" : "R"; }
const char* to_string(Message m) { return m == Message::Good ? "g" : "l"; }

void check_belief(double q, const char* what) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::domain_error(std::string(what) + " must lie in [0,1], got " + std::to_string(q));
  }
}

GameParams validate_params(const GameParams& params) {
  if (!std::isfinite(params.c) || !(params.c > 0.0)) {
    throw std::domain_error("c must be positive");
  }
  for (double a : {params.alpha_g, params.alpha_l}) {
    if (!(a > 0.0 && a < 1.0)) {
      throw std::domain_error("signal probabilities must lie in the open interval (0,1)");
    }
  }
  if (!(params.alpha_l < params.alpha_g)) {
    throw std::domain_error("alpha ordering: alpha_g must exceed alpha_l");
  }
  return params;
}

namespace {

void require(bool ok, const char* invariant) {
  if (!ok) throw std::logic_error(std::string("threshold invariant violated: ") + invariant);
}

}  // namespace

Thresholds thresholds(const GameParams& raw) {
  const GameParams p = validate_params(raw);
  const double c = p.c, ag = p.alpha_g, al = p.alpha_l;

  Thresholds t;
  t.q_i = c * (1 + al) / ((1 + ag) + c * (1 + al));
  t.q_ii = c * (1 - al) / ((1 - ag) + c * (1 - al));
  t.q_m = c / (1 + c);
  // Fixed point of pi on the AA branch when it lands there, on the AC branch
  // otherwise. The knife edge 2ag - al == 1 takes the AA formula.
  const bool aa_branch = 2 * ag - al <= 1;
  t.p_star = aa_branch ? 2 * c / (1 + 2 * c) : (1 + al) * c / (ag + (1 + al) * c);

  if (ag > 0.5) {
    t.p_star_star = c / (ag + c);
    // u(q)/(1-ag) = q(1+ag) - (1-q)(1+al)c, both sides linear in q.
    const double numer = c - (1 - ag) * (1 + al) * c;
    const double denom = (1 + c) - (1 - ag) * (1 + ag + (1 + al) * c);
    t.p_e = numer / denom;
  }

  require(0 < t.q_i && t.q_i < t.q_m && t.q_m < t.q_ii && t.q_ii < 1, "0 < q_i < q_m < q_ii < 1");
  require(t.p_star > t.q_m, "p_star > q_m");
  require(aa_branch ? t.p_star >= t.q_ii - kExactTol : t.p_star < t.q_ii + kExactTol,
          "p_star >= q_ii iff 2 alpha_g - alpha_l <= 1");
  if (t.p_e) {
    const double pe = *t.p_e;
    require(t.q_m < pe && pe < std::min(t.p_star, t.q_ii), "q_m < p_e < min(p_star, q_ii)");
    require(pe < *t.p_star_star, "p_e < p_star_star");
    // The closed form must satisfy the defining equation on the AC branch.
    const double lhs = (pe - (1 - pe) * c) / (1 - ag);
    const double rhs = pe * (1 + ag) - (1 - pe) * (1 + al) * c;
    require(std::abs(lhs - rhs) <= kExactTol * std::max(1.0, std::abs(lhs)) * 16, "p_e residual");
  }
  return t;
}

Model::Model(const GameParams& params) : params_(validate_params(params)), thresholds_(dissuasion::thresholds(params)) {}

double stage_payoff(double q, const GameParams& params) { return q - (1 - q) * params.c; }

double stage_payoff(double q, const Model& model) { return stage_payoff(q, model.params()); }

double posterior_update(double q, Signal signal, const Model& model) {
  check_belief(q);
  if (q == 0.0 || q == 1.0) return q;
  const double ag = model.alpha_g(), al = model.alpha_l();
  if (signal == Signal::Positive) {
    return q * ag / (q * ag + (1 - q) * al);
  }
  return q * (1 - ag) / (q * (1 - ag) + (1 - q) * (1 - al));
}

double BeliefSplit::mean() const {
  double m = 0;
  for (const auto& b : branches) m += b.probability * b.posterior;
  return m;
}

double BeliefSplit::total_probability() const {
  double s = 0;
  for (const auto& b : branches) s += b.probability;
  return s;
}

BeliefSplit make_split(double q, double r) {
  check_belief(q, "prior");
  check_belief(r, "split target");
  if (!(q > 0.0)) throw std::domain_error("split requires a positive prior");
  if (r > q) throw std::domain_error("split target must not exceed the prior");

  BeliefSplit split;
  split.prior = q;
  split.gamma = (r == q) ? 0.0 : (q - r) / ((1 - r) * q);
  const double reveal = q * split.gamma;  // probability of message g
  if (reveal > 0) split.branches.push_back({1.0, reveal});
  if (reveal < 1) split.branches.push_back({r, 1 - reveal});
  return split;
}

double xi(double q, const Model& model) {
  check_belief(q);
  if (q > model.thresholds().p_star) {
    throw std::domain_error("xi is only defined up to p_star");
  }
  const double pi = no_info_payoff(q, model);
  const double value = (q - pi) / (1 - pi);
  // Rounding at the fixed point itself.
  return value < 0 && value > -kExactTol ? 0.0 : value;
}

}  // namespace dissuasion
