#pragma once

// Run orchestration: resolve configuration, train, score against the
// problem's oracle, and write artifacts (CSV tables, SVG plots, resolved
// config, checkpoint).

#include <optional>
#include <string>

#include "dem/loss.hpp"
#include "dem/metrics.hpp"
#include "dem/problems.hpp"
#include "dem/trainer.hpp"

namespace dem::run {

struct RunOverrides {
  std::optional<int> epochs;
  std::optional<double> learning_rate;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> engine;  // "tape" | "batched" | "auto"
  std::optional<int> n_1d;
  std::optional<int> nx, ny;
  std::optional<int> plate_resolution;
  std::optional<bool> kirsch_analytic_traction;
  std::optional<int> fem_nx, fem_ny;
  std::optional<int> diag_every;
  std::optional<int> checkpoint_every;
  std::optional<std::string> config_path;  // JSON config loaded first
  std::string out_dir;                     // resolved by the CLI
  bool plots = true;
};

struct ResolvedRun {
  prob::ProblemDef prob;
  int fem_nx = 40;
  int fem_ny = 120;
  bool kirsch_analytic_traction = false;
};

// Applies (in order) built-in defaults, the optional config file, then
// explicit overrides.
ResolvedRun resolve(prob::ProblemCode code, const RunOverrides& o);

// Minimum R^2 targets for a problem's well-posed variables.
struct Threshold {
  std::string variable;
  double min_r2;
};
std::vector<Threshold> primary_thresholds(prob::ProblemCode code);

// Variables whose reference is near-constant; they pass when either the
// low-variance flag is set or the max abs error stays under a tenth of the
// reference stress scale.
std::vector<std::string> near_constant_rows(prob::ProblemCode code);

bool acceptance_pass(const prob::ProblemDef& prob,
                     const metrics::SolutionReport& report,
                     std::string* detail = nullptr);

struct RunOutcome {
  ResolvedRun resolved;
  metrics::SolutionReport report;
  loss::LossValues final_loss;
  int epochs_run = 0;
  bool pass = false;
  std::string detail;
};

RunOutcome run_problem(prob::ProblemCode code, const RunOverrides& o);

// Runs every problem with defaults; emits the score grid (text + CSV) and
// returns whether all rows met their targets.
bool run_score_table(const std::string& out_dir, std::string* table_text);

}  // namespace dem::run
