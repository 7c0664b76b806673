#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <ostream>
#include <string>
#include <vector>

#include "dissuasion/model.hpp"
#include "dissuasion/scenarios.hpp"

namespace dissuasion::cli {

enum class Format { Csv, Json };

struct RunConfig {
  GameParams params;
  std::optional<double> q;
  double grid_start = 0.0;
  double grid_stop = 1.0;
  int grid_points = 101;
  std::optional<Regime> regime;
  std::uint64_t n_samples = 1000000;
  std::uint64_t seed = 42;
  std::string output_path;  // empty: standard output
  Format format = Format::Csv;
  double grid_step = 1e-3;
  bool inject_fault = false;  // corrupts N^S inside verify
};

/// Thrown for bad user input; mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// "start:stop:points".
void parse_grid(const std::string& text, RunConfig& config);

/// Seed used when --seed is absent: DISSUADE_SEED if set, else 42.
std::uint64_t default_seed();

/// %.12g formatting shared by every command.
std::string format_number(double x);

int cmd_thresholds(const RunConfig& config, std::ostream& out);
int cmd_sweep(const RunConfig& config, std::ostream& out);
int cmd_simulate(const RunConfig& config, std::ostream& out);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses the argument vector (without the program name) and dispatches.
/// Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dissuasion::cli
