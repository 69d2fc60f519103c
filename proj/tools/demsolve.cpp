// Command-line entry point.
//
// Verbs:
//   run <CODE>         train one problem, score it, write artifacts
//   table3             run all problems and emit the score grid
//   export-mesh <CODE> write the problem's node set as CSV
//   gradcheck <CODE>   verify loss gradients against finite differences
//
// Exit codes: 0 success, 1 acceptance failure, 2 configuration error,
// 3 numerical abort.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "dem/gradcheck.hpp"
#include "dem/runner.hpp"
#include "dem/sampling.hpp"
#include "dem/trainer.hpp"

namespace {

std::string out_base() {
  if (const char* env = std::getenv("DEMSOLVE_OUT")) return env;
  return "out";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-minimizing neural solver for thermo-elastic benchmarks"};
  app.require_subcommand(1);

  std::string code_str;
  dem::run::RunOverrides ov;
  int epochs = -1;
  double lr = -1.0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string engine, config_path, out_dir;
  int n_1d = -1, nx = -1, ny = -1, plate_res = -1, fem_nx = -1, fem_ny = -1;
  int diag_every = -1, checkpoint_every = -1;
  bool kirsch_analytic = false;
  bool no_plots = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--epochs", epochs, "training epochs");
    cmd->add_option("--lr", lr, "learning rate");
    cmd->add_option("--seed", seed, "random seed")
        ->each([&](const std::string&) { seed_set = true; });
    cmd->add_option("--engine", engine, "tape|batched|auto");
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--nodes-1d", n_1d, "1d node count");
    cmd->add_option("--nx", nx, "2d grid nodes along x1");
    cmd->add_option("--ny", ny, "2d grid nodes along x2");
    cmd->add_option("--plate-resolution", plate_res,
                    "radial resolution of the hole mesh");
    cmd->add_option("--fem-nx", fem_nx, "FEM oracle elements along x1");
    cmd->add_option("--fem-ny", fem_ny, "FEM oracle elements along x2");
    cmd->add_option("--diag-every", diag_every, "diagnostic capture cadence");
    cmd->add_option("--checkpoint-every", checkpoint_every,
                    "checkpoint cadence (0 = final only)");
    cmd->add_flag("--kirsch-analytic-traction", kirsch_analytic,
                  "apply closed-form tractions on right and top edges");
    cmd->add_flag("--no-plots", no_plots, "skip SVG plot output");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "train and score one problem");
  run_cmd->add_option("code", code_str, "problem code")->required();
  add_common(run_cmd);

  CLI::App* table_cmd =
      app.add_subcommand("table3", "run all problems and print the score grid");
  table_cmd->add_option("--out", out_dir, "output directory");

  CLI::App* mesh_cmd =
      app.add_subcommand("export-mesh", "write a problem's node set as CSV");
  mesh_cmd->add_option("code", code_str, "problem code")->required();
  mesh_cmd->add_option("--out", out_dir, "output directory");

  CLI::App* grad_cmd = app.add_subcommand(
      "gradcheck", "compare loss gradients with finite differences");
  grad_cmd->add_option("code", code_str, "problem code")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      const dem::prob::ProblemCode code = dem::prob::code_from_string(code_str);
      if (epochs >= 0) ov.epochs = epochs;
      if (lr > 0) ov.learning_rate = lr;
      if (seed_set) ov.seed = seed;
      if (!engine.empty()) ov.engine = engine;
      if (!config_path.empty()) ov.config_path = config_path;
      if (n_1d > 0) ov.n_1d = n_1d;
      if (nx > 0) ov.nx = nx;
      if (ny > 0) ov.ny = ny;
      if (plate_res > 0) ov.plate_resolution = plate_res;
      if (fem_nx > 0) ov.fem_nx = fem_nx;
      if (fem_ny > 0) ov.fem_ny = fem_ny;
      if (diag_every >= 0) ov.diag_every = diag_every;
      if (checkpoint_every >= 0) ov.checkpoint_every = checkpoint_every;
      if (kirsch_analytic) ov.kirsch_analytic_traction = true;
      ov.plots = !no_plots;
      ov.out_dir = out_dir.empty() ? out_base() + "/" + code_str : out_dir;

      const dem::run::RunOutcome r = dem::run::run_problem(code, ov);
      std::cout << code_str << ": epochs=" << r.epochs_run
                << " final_loss=" << r.final_loss.total << '\n';
      for (const auto& s : r.report.scores)
        std::cout << "  " << s.variable << " R2=" << s.r2
                  << (s.low_variance ? " (low variance)" : "") << '\n';
      std::cout << (r.pass ? "PASS" : "FAIL") << ": " << r.detail << '\n';
      std::cout << "artifacts: " << ov.out_dir << '\n';
      return r.pass ? 0 : 1;
    }
    if (table_cmd->parsed()) {
      const std::string dir = out_dir.empty() ? out_base() : out_dir;
      std::filesystem::create_directories(dir);
      std::string text;
      const bool ok = dem::run::run_score_table(dir, &text);
      std::cout << text;
      std::cout << "table written to " << dir << "/table3.csv\n";
      return ok ? 0 : 1;
    }
    if (mesh_cmd->parsed()) {
      const dem::prob::ProblemCode code = dem::prob::code_from_string(code_str);
      const dem::prob::ProblemDef p = dem::prob::make_problem(code);
      const dem::mesh::NodeSet nodes = dem::prob::build_nodes(p);
      const std::string dir = out_dir.empty() ? out_base() : out_dir;
      std::filesystem::create_directories(dir);
      const std::string path = dir + "/" + code_str + "_nodes.csv";
      dem::mesh::write_csv(nodes, path);
      std::cout << "wrote " << path << " (" << nodes.points.rows()
                << " interior nodes, measure " << nodes.measure() << ")\n";
      return 0;
    }
    if (grad_cmd->parsed()) {
      const dem::prob::ProblemCode code = dem::prob::code_from_string(code_str);
      const dem::check::GradCheckResult r = dem::check::gradcheck(code);
      std::cout << code_str << " gradcheck: max rel err tape="
                << r.max_rel_tape << " batched=" << r.max_rel_batched
                << " -> " << (r.pass ? "PASS" : "FAIL") << '\n';
      return r.pass ? 0 : 1;
    }
  } catch (const dem::train::NumericalError& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
