// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

// Config-driven suite runner behind the command-line tool.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mnns/grid.hpp"
#include "mnns/mild_solver.hpp"

namespace mnns {

enum class Command {
  verify_young,
  verify_decay,
  verify_riesz,
  verify_bilinear,
  scaling_check,
  solve,
  local_solve,
  aniso_demo,
};

std::string_view command_name(Command c);
/// Throws config on an unknown name.
Command parse_command(std::string_view name);

struct GridSpec {
  std::vector<std::size_t> points;
  std::vector<double> half_widths;
  Boundary boundary = Boundary::truncated;

  std::size_t dims() const { return points.size(); }
  TensorGrid make() const;
};

struct SolverSettings {
  double T = 1.0;
  std::size_t nodes = 32;
  double grading = 0.8;
  std::size_t quadrature = 16;
  double picard_tol = 1e-8;
  std::size_t max_iter = 10;
  bool smallness_guard = true;
  /// Amplitude of the Taylor-Green data; unset picks the one that puts
  /// 4 N2 ||u0||_X at target_product.
  std::optional<double> amplitude;
  double target_product = 0.45;
  /// Extra factor on the amplitude (the local branch uses 50).
  double scale = 1.0;
  /// Steps of the time-stepping cross-check; 0 skips it.
  std::size_t oracle_steps = 100;
  double oracle_tolerance = 1e-3;
  bool save_trajectory = false;
};

struct ExperimentConfig {
  Command command = Command::verify_young;
  GridSpec grid;
  /// Exponent vectors; +inf is allowed where the suite accepts it.
  std::vector<double> p, q;
  std::uint64_t seed = 7;
  std::size_t cases = 100;
  /// Suite tolerance; unset uses the per-command default.
  std::optional<double> tolerance;
  std::filesystem::path output_dir = "mnns-out";

  // verify-decay: gradient variant and the grid for the continuity cases.
  bool gradient = true;
  std::size_t continuity_points = 0;  // 0: no continuity cases
  double continuity_half_width = 16.0;

  // verify-bilinear: every split is probed on every trajectory pair.
  std::vector<BilinearSplit> splits;
  /// Ratio budget of the Riesz/Leray probes (default 10) or the bilinear
  /// probes (default 5).
  std::optional<double> budget;

  // scaling-check
  std::vector<double> lambdas{0.5, 2.0};

  // solve, local-solve, verify-bilinear
  SolverSettings solver;

  // aniso-demo: f = <x_1>^{-a} <x'>^{-b} on growing boxes of fixed spacing.
  double aniso_a = 0.25, aniso_b = 1.5;
  std::vector<double> domain_half_widths{8, 16, 32, 64};
  double domain_spacing = 0.5;
  double plain_p = 3.0;

  double effective_tolerance() const;
  double effective_budget() const;
  /// Solver parameters with p and q filled in.
  SolverConfig solver_config() const;
};

/// Parses the TOML schema documented in the README. Unknown keys are
/// rejected; errors carry ErrorCode::config.
ExperimentConfig parse_config(std::string_view toml_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string to_toml(const ExperimentConfig& cfg);

std::vector<std::string> preset_names();
/// Throws config on an unknown name.
ExperimentConfig preset(std::string_view name);

/// Every hypothesis of the targeted estimate, checked before any compute.
/// Throws hypothesis, config or dimension_mismatch.
void validate(const ExperimentConfig& cfg);

using Quantities = std::vector<std::pair<std::string, double>>;

struct CaseRecord {
  std::size_t index = 0;
  std::string label;
  /// Canonical JSON of the case inputs and its FNV-1a 64 digest.
  std::string inputs;
  std::string inputs_digest;
  Quantities measured;
  Quantities predicted;
  /// The pass condition in terms of the recorded names.
  std::string check;
  bool pass = false;
};

struct Report {
  std::string command;
  std::string config_json;
  std::vector<CaseRecord> cases;
  Quantities summary;
  /// Contraction certificate for the solve commands, else empty.
  std::string certificate_json;
  double wall_clock_seconds = 0.0;

  bool passed() const;
  std::string to_json() const;
  std::string to_csv() const;
};

/// FNV-1a, 64 bit, as 16 hex digits.
std::string fnv1a64_hex(std::string_view bytes);

/// Validates, then runs the suite. Numerical failures are recorded in the
/// report rather than thrown, except errors raised by the underlying
/// modules, which propagate.
Report run_suite(const ExperimentConfig& cfg);

/// validate + run_suite + report.json / report.csv in `out`. Returns 0 when
/// every check passes, 1 on numerical failure, 2 on config or hypothesis
/// errors. Diagnostics go to `log`.
int run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out, std::string* log);

}  // namespace mnns
