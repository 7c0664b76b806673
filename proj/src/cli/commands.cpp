#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "dissuasion/benchmark.hpp"
#include "dissuasion/game_engine.hpp"
#include "dissuasion/oracle.hpp"

namespace dissuasion::cli {

using nlohmann::ordered_json;

namespace {

// JSON number carrying the same 12 significant digits as the text output.
double rounded(double x) { return std::strtod(format_number(x).c_str(), nullptr); }

ordered_json optional_number(const std::optional<double>& x) {
  return x ? ordered_json(rounded(*x)) : ordered_json(nullptr);
}

ordered_json params_json(const GameParams& p) {
  return {{"c", rounded(p.c)}, {"alpha_g", rounded(p.alpha_g)}, {"alpha_l", rounded(p.alpha_l)}};
}

ordered_json thresholds_json(const Thresholds& t) {
  return {{"q_i", rounded(t.q_i)},       {"q_ii", rounded(t.q_ii)},
          {"q_m", rounded(t.q_m)},       {"p_star", rounded(t.p_star)},
          {"p_star_star", optional_number(t.p_star_star)}, {"p_e", optional_number(t.p_e)}};
}

ordered_json stats_json(const OutcomeStats& s) {
  return {{"receiver_payoff", rounded(s.receiver_payoff)},
          {"sender_cost", rounded(s.sender_cost)},
          {"prob_act_period1", rounded(s.prob_act_period1)},
          {"prob_act_period2", rounded(s.prob_act_period2)},
          {"prob_act_at_interior_belief", rounded(s.prob_act_at_interior_belief)}};
}

// Sends the command's text to --out when given, else to `out`.
int emit(const RunConfig& config, std::ostream& out, const std::function<void(std::ostream&)>& write) {
  if (config.output_path.empty()) {
    write(out);
    return 0;
  }
  std::ofstream file(config.output_path, std::ios::binary | std::ios::trunc);
  if (!file) throw UsageError("cannot open output file '" + config.output_path + "'");
  write(file);
  return 0;
}

const char* fixed_thresholds_format(double x, char* buf, std::size_t size) {
  std::snprintf(buf, size, "%#.12g", x);
  return buf;
}

}  // namespace

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void parse_grid(const std::string& text, RunConfig& config) {
  std::stringstream ss(text);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c) || c.find(':') != std::string::npos) {
    throw UsageError("grid must look like start:stop:points");
  }
  try {
    std::size_t used = 0;
    config.grid_start = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    config.grid_stop = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
    config.grid_points = std::stoi(c, &used);
    if (used != c.size()) throw std::invalid_argument(c);
  } catch (const std::logic_error&) {
    throw UsageError("grid must look like start:stop:points");
  }
  if (!(config.grid_start >= 0 && config.grid_start < config.grid_stop && config.grid_stop <= 1)) {
    throw UsageError("grid needs 0 <= start < stop <= 1");
  }
  if (config.grid_points < 2) throw UsageError("grid needs at least 2 points");
}

std::uint64_t default_seed() {
  const char* env = std::getenv("DISSUADE_SEED");
  if (env == nullptr || *env == '\0') return 42;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || *env == '-') throw UsageError("DISSUADE_SEED must be a non-negative integer");
  return v;
}

int cmd_thresholds(const RunConfig& config, std::ostream& out) {
  const Model model(config.params);
  const auto& t = model.thresholds();
  return emit(config, out, [&](std::ostream& os) {
    if (config.format == Format::Json) {
      os << thresholds_json(t).dump(2) << '\n';
      return;
    }
    char buf[40];
    auto line = [&](const char* name, const std::optional<double>& v) {
      os << name << '=' << (v ? fixed_thresholds_format(*v, buf, sizeof buf) : "null") << '\n';
    };
    line("q_i", t.q_i);
    line("q_ii", t.q_ii);
    line("q_m", t.q_m);
    line("p_star", t.p_star);
    line("p_star_star", t.p_star_star);
    line("p_e", t.p_e);
  });
}

int cmd_sweep(const RunConfig& config, std::ostream& out) {
  const Model model(config.params);
  const auto& t = model.thresholds();
  ordered_json meta{{"params", params_json(config.params)}, {"thresholds", thresholds_json(t)}};

  struct Row {
    double q, pi, n, n_u, n_a, n_s;
    std::optional<double> precvx_a, precvx_s;
  };
  std::vector<Row> rows;
  for (int k = 0; k < config.grid_points; ++k) {
    const double q = k + 1 == config.grid_points
                         ? config.grid_stop
                         : config.grid_start + k * (config.grid_stop - config.grid_start) / (config.grid_points - 1);
    Row r{q,
          no_info_payoff(q, model),
          no_info_cost(q, model),
          equilibrium_cost(Regime::Unconditional, q, model),
          equilibrium_cost(Regime::ActionBased, q, model),
          equilibrium_cost(Regime::SignalBased, q, model),
          std::nullopt,
          std::nullopt};
    if (q >= t.p_star) r.precvx_a = action_precvx_cost(q, model);
    if (t.p_e && q > *t.p_e) r.precvx_s = signal_precvx_cost(q, model);
    rows.push_back(r);
  }

  return emit(config, out, [&](std::ostream& os) {
    if (config.format == Format::Json) {
      ordered_json doc = meta;
      doc["rows"] = ordered_json::array();
      for (const auto& r : rows) {
        doc["rows"].push_back({{"q", rounded(r.q)},
                               {"pi", rounded(r.pi)},
                               {"n", rounded(r.n)},
                               {"n_u", rounded(r.n_u)},
                               {"n_a", rounded(r.n_a)},
                               {"n_s", rounded(r.n_s)},
                               {"precvx_a", optional_number(r.precvx_a)},
                               {"precvx_s", optional_number(r.precvx_s)}});
      }
      os << doc.dump(2) << '\n';
      return;
    }
    os << "# " << meta.dump() << '\n';
    os << "q,pi,n,n_u,n_a,n_s,precvx_a,precvx_s\n";
    for (const auto& r : rows) {
      os << format_number(r.q) << ',' << format_number(r.pi) << ',' << format_number(r.n) << ','
         << format_number(r.n_u) << ',' << format_number(r.n_a) << ',' << format_number(r.n_s) << ','
         << (r.precvx_a ? format_number(*r.precvx_a) : "") << ',' << (r.precvx_s ? format_number(*r.precvx_s) : "")
         << '\n';
    }
  });
}

int cmd_simulate(const RunConfig& config, std::ostream& out) {
  if (!config.regime) throw UsageError("simulate needs --regime");
  if (!config.q) throw UsageError("simulate needs --q");
  if (config.n_samples == 0) throw UsageError("simulate needs --n >= 1");
  const Model model(config.params);
  const double q = *config.q;
  const auto report = equilibrium(*config.regime, q, model);
  const auto sender = sender_from_report(report);
  const auto receiver = best_response(sender, q, model).strategy;
  const auto exact = evaluate_exact(sender, receiver, q, model);
  const auto sim = simulate(sender, receiver, q, model, config.n_samples, config.seed);

  return emit(config, out, [&](std::ostream& os) {
    if (config.format == Format::Csv) {
      os << "# " << ordered_json{{"regime", to_string(*config.regime)}, {"q", rounded(q)},
                                 {"params", params_json(config.params)}, {"samples", sim.samples},
                                 {"seed", sim.seed}}.dump()
         << '\n';
      os << "statistic,exact,empirical,standard_error\n";
      const auto e = stats_json(exact), m = stats_json(sim.mean), s = stats_json(sim.standard_error);
      for (const auto& [key, value] : e.items()) {
        os << key << ',' << format_number(value.get<double>()) << ',' << format_number(m[key].get<double>())
           << ',' << format_number(s[key].get<double>()) << '\n';
      }
      return;
    }
    ordered_json doc{{"regime", to_string(*config.regime)},
                     {"q", rounded(q)},
                     {"params", params_json(config.params)},
                     {"samples", sim.samples},
                     {"seed", sim.seed},
                     {"exact", stats_json(exact)},
                     {"empirical", stats_json(sim.mean)},
                     {"standard_error", stats_json(sim.standard_error)}};
    os << doc.dump(2) << '\n';
  });
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Model model(config.params);
  if (!(config.grid_step > 0 && config.grid_step <= 0.01)) throw UsageError("--grid-step must lie in (0, 0.01]");

  std::vector<CheckResult> checks;
  for (auto c : verify_lemma1(config.params).checks) {
    c.name = "lemma1." + c.name;
    checks.push_back(c);
  }

  auto curves = CostCurves::closed_form(model);
  if (config.inject_fault) {
    curves.n_s = [model](double q) { return 1.5 * equilibrium_cost(Regime::SignalBased, q, model) + 0.1; };
  }
  for (auto c : verify_orderings(config.params, 2000, curves).checks) {
    c.name = "ordering." + c.name;
    checks.push_back(c);
  }

  for (Regime regime : {Regime::Unconditional, Regime::ActionBased, Regime::SignalBased}) {
    CheckResult closed{std::string("engine.") + to_string(regime) + ".closed_form", kExactTol, 0, true, ""};
    CheckResult ic{std::string("engine.") + to_string(regime) + ".incentives", kCompareTol, 0, true, ""};
    for (int k = 1; k <= 200; ++k) {
      const double q = k / 201.0;
      const auto report = equilibrium(regime, q, model);
      const auto sender = sender_from_report(report);
      const auto receiver = ReceiverStrategy::compliance();
      const auto stats = evaluate_exact(sender, receiver, q, model);
      const double residual = std::max(std::abs(stats.sender_cost - report.sender_cost),
                                       std::abs(stats.receiver_payoff - report.receiver_payoff));
      if (residual > closed.worst_residual) closed.worst_residual = residual;
      if (residual > closed.tolerance && closed.passed) {
        closed.passed = false;
        closed.detail = "first mismatch at q=" + format_number(q);
      }
      const double gain = ic_check(sender, receiver, q, model);
      if (gain > ic.worst_residual) ic.worst_residual = gain;
      if (gain > ic.tolerance && ic.passed) {
        ic.passed = false;
        ic.detail = "profitable receiver deviation at q=" + format_number(q);
      }
    }
    checks.push_back(closed);
    checks.push_back(ic);
  }

  const double tol = 5 * config.grid_step;
  for (Regime regime : {Regime::Unconditional, Regime::ActionBased, Regime::SignalBased}) {
    CheckResult bf{std::string("brute_force.") + to_string(regime), tol, 0, true, ""};
    for (double q : {0.3, 0.5, 0.56, 0.7, 0.8, 0.95}) {
      const double found = brute_force_optimal_cost(regime, q, model, config.grid_step).cost;
      const double residual = std::abs(found - equilibrium_cost(regime, q, model));
      bf.worst_residual = std::max(bf.worst_residual, residual);
      if (residual > tol && bf.passed) {
        bf.passed = false;
        bf.detail = "closed form missed at q=" + format_number(q);
      }
    }
    checks.push_back(bf);
  }

  bool all = true;
  ordered_json doc{{"params", params_json(config.params)}, {"grid_step", config.grid_step}, {"checks", ordered_json::array()}};
  for (const auto& c : checks) {
    ordered_json item{{"name", c.name}, {"tolerance", c.tolerance}, {"worst_residual", c.worst_residual}, {"pass", c.passed}};
    if (!c.detail.empty()) item["detail"] = c.detail;
    doc["checks"].push_back(item);
    if (!c.passed) {
      all = false;
      err << "verify: check failed: " << c.name << (c.detail.empty() ? "" : " (" + c.detail + ")") << '\n';
    }
  }
  doc["pass"] = all;
  emit(config, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  return all ? 0 : 1;
}

namespace {

struct Flags {
  std::optional<double> c, alpha_g, alpha_l, q, grid_step;
  std::optional<std::string> grid, regime, format, out, config;
  std::optional<std::int64_t> n;
  std::optional<std::uint64_t> seed;
  bool inject_fault = false;
};

void add_common_options(CLI::App& sub, Flags& f) {
  sub.add_option("--c", f.c, "Cost of acting in the bad state");
  sub.add_option("--alpha-g", f.alpha_g, "Probability of a positive signal in the good state");
  sub.add_option("--alpha-l", f.alpha_l, "Probability of a positive signal in the bad state");
  sub.add_option("--q", f.q, "Prior belief of the good state");
  sub.add_option("--grid", f.grid, "Sweep grid start:stop:points");
  sub.add_option("--regime", f.regime, "unconditional|action|signal");
  sub.add_option("--n", f.n, "Monte Carlo samples");
  sub.add_option("--seed", f.seed, "Random seed (default: DISSUADE_SEED or 42)");
  sub.add_option("--grid-step", f.grid_step, "Brute-force grid step");
  sub.add_option("--format", f.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  sub.add_option("--out", f.out, "Output file");
  sub.add_option("--config", f.config, "JSON file with parameters; flags override it");
  sub.add_flag("--inject-fault", f.inject_fault)->group("");
}

void apply_config_file(const std::string& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw UsageError("config file must hold a JSON object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "c") config.params.c = value.get<double>();
      else if (key == "alpha_g") config.params.alpha_g = value.get<double>();
      else if (key == "alpha_l") config.params.alpha_l = value.get<double>();
      else if (key == "q") config.q = value.get<double>();
      else if (key == "regime") config.regime = parse_regime(value.get<std::string>());
      else if (key == "seed") config.seed = value.get<std::uint64_t>();
      else if (key == "n") config.n_samples = value.get<std::uint64_t>();
      else if (key == "grid_step") config.grid_step = value.get<double>();
      else if (key == "grid") parse_grid(value.get<std::string>(), config);
      else throw UsageError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("bad value in config file: " + std::string(e.what()));
  }
}

RunConfig build_config(const Flags& f) {
  RunConfig config;
  config.seed = default_seed();
  if (f.config) apply_config_file(*f.config, config);
  if (f.c) config.params.c = *f.c;
  if (f.alpha_g) config.params.alpha_g = *f.alpha_g;
  if (f.alpha_l) config.params.alpha_l = *f.alpha_l;
  if (f.q) config.q = *f.q;
  if (f.grid) parse_grid(*f.grid, config);
  if (f.regime) config.regime = parse_regime(*f.regime);
  if (f.n) {
    if (*f.n < 0) throw UsageError("--n must be non-negative");
    config.n_samples = static_cast<std::uint64_t>(*f.n);
  }
  if (f.seed) config.seed = *f.seed;
  if (f.grid_step) config.grid_step = *f.grid_step;
  if (f.format) config.format = *f.format == "json" ? Format::Json : Format::Csv;
  if (f.out) config.output_path = *f.out;
  config.inject_fault = f.inject_fault;

  validate_params(config.params);
  if (config.q) check_belief(*config.q, "q");
  return config;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-period dissuasion game: thresholds, sweeps, simulation and verification", "dissuade"};
  app.require_subcommand(1, 1);
  Flags flags;
  auto* thresholds = app.add_subcommand("thresholds", "Print the cutoff beliefs");
  auto* sweep = app.add_subcommand("sweep", "Tabulate payoffs and costs over a grid of priors");
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo run of a regime's equilibrium");
  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  for (auto* sub : {thresholds, sweep, simulate_cmd, verify}) add_common_options(*sub, flags);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    const RunConfig config = build_config(flags);
    if (thresholds->parsed()) return cmd_thresholds(config, out);
    if (sweep->parsed()) return cmd_sweep(config, out);
    if (simulate_cmd->parsed()) return cmd_simulate(config, out);
    return cmd_verify(config, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace dissuasion::cli
