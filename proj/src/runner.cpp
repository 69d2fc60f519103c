#include "dem/runner.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "dem/checkpoint.hpp"
#include "dem/csv.hpp"
#include "dem/engines.hpp"
#include "dem/reference.hpp"
#include "dem/svg.hpp"

namespace dem::run {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json resolved_to_json(const ResolvedRun& r) {
  const auto& p = r.prob;
  return json{{"problem", prob::to_string(p.code)},
              {"epochs", p.train.epochs},
              {"learning_rate", p.train.learning_rate},
              {"decay_every", p.train.decay_every},
              {"decay_factor", p.train.decay_factor},
              {"seed", p.train.seed},
              {"engine", p.train.engine == train::Engine::Tape      ? "tape"
                         : p.train.engine == train::Engine::Batched ? "batched"
                                                                    : "auto"},
              {"diag_every", p.train.diag_every},
              {"checkpoint_every", p.train.checkpoint_every},
              {"n_1d", p.sampling.n_1d},
              {"nx", p.sampling.nx},
              {"ny", p.sampling.ny},
              {"plate_resolution", p.sampling.plate_resolution},
              {"kirsch_analytic_traction", r.kirsch_analytic_traction},
              {"fem_nx", r.fem_nx},
              {"fem_ny", r.fem_ny}};
}

void apply_json(ResolvedRun& r, const json& j) {
  auto& p = r.prob;
  if (j.contains("epochs")) p.train.epochs = j["epochs"].get<int>();
  if (j.contains("learning_rate"))
    p.train.learning_rate = j["learning_rate"].get<double>();
  if (j.contains("decay_every")) p.train.decay_every = j["decay_every"].get<int>();
  if (j.contains("decay_factor"))
    p.train.decay_factor = j["decay_factor"].get<double>();
  if (j.contains("seed")) p.train.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("engine")) {
    const std::string e = j["engine"].get<std::string>();
    p.train.engine = e == "tape"      ? train::Engine::Tape
                     : e == "batched" ? train::Engine::Batched
                                      : train::Engine::Auto;
  }
  if (j.contains("diag_every")) p.train.diag_every = j["diag_every"].get<int>();
  if (j.contains("checkpoint_every"))
    p.train.checkpoint_every = j["checkpoint_every"].get<int>();
  if (j.contains("n_1d")) p.sampling.n_1d = j["n_1d"].get<int>();
  if (j.contains("nx")) p.sampling.nx = j["nx"].get<int>();
  if (j.contains("ny")) p.sampling.ny = j["ny"].get<int>();
  if (j.contains("plate_resolution"))
    p.sampling.plate_resolution = j["plate_resolution"].get<int>();
  if (j.contains("kirsch_analytic_traction"))
    r.kirsch_analytic_traction = j["kirsch_analytic_traction"].get<bool>();
  if (j.contains("fem_nx")) r.fem_nx = j["fem_nx"].get<int>();
  if (j.contains("fem_ny")) r.fem_ny = j["fem_ny"].get<int>();
}

}  // namespace

ResolvedRun resolve(prob::ProblemCode code, const RunOverrides& o) {
  ResolvedRun r;
  r.prob = prob::make_problem(code);
  if (o.config_path) {
    std::ifstream in(*o.config_path);
    if (!in)
      throw std::invalid_argument("cannot open config: " + *o.config_path);
    json j;
    in >> j;
    if (j.contains("problem") &&
        j["problem"].get<std::string>() != prob::to_string(code))
      throw std::invalid_argument("config file is for a different problem");
    apply_json(r, j);
  }
  auto& p = r.prob;
  if (o.epochs) p.train.epochs = *o.epochs;
  if (o.learning_rate) p.train.learning_rate = *o.learning_rate;
  if (o.seed) p.train.seed = *o.seed;
  if (o.engine) {
    p.train.engine = *o.engine == "tape"      ? train::Engine::Tape
                     : *o.engine == "batched" ? train::Engine::Batched
                     : *o.engine == "auto"
                         ? train::Engine::Auto
                         : throw std::invalid_argument("bad engine: " +
                                                       *o.engine);
  }
  if (o.n_1d) p.sampling.n_1d = *o.n_1d;
  if (o.nx) p.sampling.nx = *o.nx;
  if (o.ny) p.sampling.ny = *o.ny;
  if (o.plate_resolution) p.sampling.plate_resolution = *o.plate_resolution;
  if (o.diag_every) p.train.diag_every = *o.diag_every;
  if (o.checkpoint_every) p.train.checkpoint_every = *o.checkpoint_every;
  if (o.kirsch_analytic_traction)
    r.kirsch_analytic_traction = *o.kirsch_analytic_traction;
  if (o.fem_nx) r.fem_nx = *o.fem_nx;
  if (o.fem_ny) r.fem_ny = *o.fem_ny;

  if (r.kirsch_analytic_traction && code == prob::ProblemCode::Kirsch) {
    p.tractions.clear();
    p.tractions.push_back({"right", {0.0, 0.0}, true});
    p.tractions.push_back({"top", {0.0, 0.0}, true});
  }
  return r;
}

std::vector<Threshold> primary_thresholds(prob::ProblemCode code) {
  using prob::ProblemCode;
  switch (code) {
    case ProblemCode::OneDFgmElasDirch:
    case ProblemCode::OneDFgmElasNeu:
      return {{"u1", 0.999}, {"eps11", 0.9}};
    case ProblemCode::OneDElasBf:
      return {{"u1", 0.999}, {"eps11", 0.9}};
    case ProblemCode::OneDFgmThermoElas:
      return {{"u1", 0.999}, {"T", 0.999}, {"eps11", 0.9}};
    case ProblemCode::Kirsch:
      return {{"u1", 0.99}, {"u2", 0.985}, {"sigma11", 0.9}, {"sigma12", 0.9}};
    case ProblemCode::TwoDFgmElasNeu:
    case ProblemCode::TwoDFgmElasDirch:
      return {{"u1", 0.99}, {"u2", 0.99}};
    case ProblemCode::TwoDFgmThermoElas:
      return {{"u1", 0.99}, {"u2", 0.99}, {"T", 0.999}};
  }
  return {};
}

std::vector<std::string> near_constant_rows(prob::ProblemCode code) {
  using prob::ProblemCode;
  switch (code) {
    case ProblemCode::OneDFgmElasDirch:
    case ProblemCode::OneDFgmElasNeu:
    case ProblemCode::OneDFgmThermoElas:
      return {"sigma11"};
    case ProblemCode::TwoDFgmElasNeu:
    case ProblemCode::TwoDFgmElasDirch:
      return {"sigma22"};
    default:
      return {};
  }
}

bool acceptance_pass(const prob::ProblemDef& prob,
                     const metrics::SolutionReport& report,
                     std::string* detail) {
  std::ostringstream msg;
  bool ok = true;
  for (const auto& th : primary_thresholds(prob.code)) {
    const auto& s = report.score(th.variable);
    const bool pass = s.r2 >= th.min_r2;
    ok = ok && pass;
    msg << th.variable << " R2=" << s.r2 << (pass ? " >= " : " < ")
        << th.min_r2 << (pass ? " ok" : " FAIL") << "; ";
  }
  for (const auto& var : near_constant_rows(prob.code)) {
    const auto& s = report.score(var);
    // Reference stress scale for this problem.
    double scale = 0.0;
    for (std::size_t i = 0; i < report.variables.size(); ++i)
      if (report.variables[i] == var)
        scale = report.reference[i].cwiseAbs().maxCoeff();
    const bool pass =
        s.low_variance || s.max_abs_err <= 0.1 * std::max(scale, 1e-12);
    ok = ok && pass;
    msg << var << (s.low_variance ? " low-variance ok"
                                  : (pass ? " maxerr ok" : " FAIL"))
        << "; ";
  }
  if (detail) *detail = msg.str();
  return ok;
}

namespace {

void write_loss_csv(const std::string& path,
                    const train::TrainingTrace& trace) {
  io::CsvWriter csv(path, {"epoch", "W_elastic", "W_thermal", "W_ext", "total"});
  for (std::size_t e = 0; e < trace.history.size(); ++e) {
    const auto& v = trace.history[e];
    csv.row({static_cast<double>(e), v.elastic, v.thermal, v.external,
             v.total});
  }
}

void write_diag_csv(const std::string& path,
                    const train::TrainingTrace& trace) {
  io::CsvWriter csv(path,
                    {"epoch", "layer", "act_mean", "act_std", "w_mean",
                     "w_std", "b_mean", "b_std", "gw_mean", "gw_std",
                     "gb_mean", "gb_std"});
  for (const auto& d : trace.diagnostics) {
    const std::size_t n = d.w_mean.size();
    for (std::size_t l = 0; l < n; ++l) {
      csv.row({static_cast<double>(d.epoch), static_cast<double>(l),
               l < d.act_mean.size() ? d.act_mean[l] : 0.0,
               l < d.act_std.size() ? d.act_std[l] : 0.0, d.w_mean[l],
               d.w_std[l], d.b_mean[l], d.b_std[l],
               l < d.gw_mean.size() ? d.gw_mean[l] : 0.0,
               l < d.gw_std.size() ? d.gw_std[l] : 0.0,
               l < d.gb_mean.size() ? d.gb_mean[l] : 0.0,
               l < d.gb_std.size() ? d.gb_std[l] : 0.0});
    }
  }
}

void write_fields_csv(const std::string& path, const prob::ProblemDef& prob,
                      const mesh::NodeSet& nodes, const eng::Prediction& pred,
                      const ref::ReferenceField& reference) {
  std::vector<std::string> header{"x1", "x2"};
  const auto vars = metrics::problem_variables(prob);
  for (const auto& v : vars) {
    header.push_back("pred_" + v);
    header.push_back("ref_" + v);
  }
  io::CsvWriter csv(path, header);
  auto value = [&](const std::string& var, bool is_pred,
                   Eigen::Index i) -> double {
    const auto& u = is_pred ? pred.u : reference.u;
    const auto& s = is_pred ? pred.stress : reference.stress;
    const auto& e = is_pred ? pred.eel : reference.eel;
    if (var == "u1") return u(i, 0);
    if (var == "u2") return u(i, 1);
    if (var == "T") return is_pred ? pred.temp[i] : reference.temp[i];
    if (var == "sigma11") return s(i, 0);
    if (var == "sigma22") return s(i, 1);
    if (var == "sigma12") return s(i, 2);
    if (var == "eps11") return e(i, 0);
    if (var == "eps22") return e(i, 1);
    if (var == "eps12") return e(i, 2);
    return 0.0;
  };
  for (Eigen::Index i = 0; i < nodes.points.rows(); ++i) {
    std::vector<double> row{nodes.points(i, 0), nodes.points(i, 1)};
    for (const auto& v : vars) {
      row.push_back(value(v, true, i));
      row.push_back(value(v, false, i));
    }
    csv.row(row);
  }
}

void write_scores_csv(const std::string& path,
                      const metrics::SolutionReport& report) {
  std::ofstream out(path);
  out.precision(12);
  out << "variable,r2,mse,max_abs_err,ref_variance,low_variance\n";
  for (const auto& s : report.scores)
    out << s.variable << ',' << s.r2 << ',' << s.mse << ',' << s.max_abs_err
        << ',' << s.ref_variance << ',' << (s.low_variance ? 1 : 0) << '\n';
}

void write_plots(const std::string& dir, const prob::ProblemDef& prob,
                 const mesh::NodeSet& nodes,
                 const train::TrainingTrace& trace,
                 const eng::Prediction& pred,
                 const ref::ReferenceField& reference) {
  // Loss curve.
  plot::Series total;
  total.label = "total loss";
  for (std::size_t e = 0; e < trace.history.size(); ++e) {
    total.x.push_back(static_cast<double>(e));
    total.y.push_back(trace.history[e].total);
  }
  plot::line_chart(dir + "/loss.svg", prob.name + " training loss", "epoch",
                   "loss", {total});

  // Field comparisons.
  if (prob.dim == 1) {
    auto line = [&](const std::string& name, const Eigen::VectorXd& p,
                    const Eigen::VectorXd& r) {
      plot::Series sp, sr;
      sp.label = "predicted";
      sr.label = "reference";
      for (Eigen::Index i = 0; i < nodes.points.rows(); ++i) {
        sp.x.push_back(nodes.points(i, 0));
        sp.y.push_back(p[i]);
        sr.x.push_back(nodes.points(i, 0));
        sr.y.push_back(r[i]);
      }
      plot::line_chart(dir + "/field_" + name + ".svg",
                       prob.name + " " + name, "x", name, {sp, sr});
    };
    line("u1", pred.u.col(0), reference.u.col(0));
    line("sigma11", pred.stress.col(0), reference.stress.col(0));
    if (pred.has_temp) line("T", pred.temp, reference.temp);
  } else {
    plot::field_map(dir + "/field_u1_pred.svg", prob.name + " u1 (predicted)",
                    nodes.points, nodes.weights, pred.u.col(0));
    plot::field_map(dir + "/field_u1_ref.svg", prob.name + " u1 (reference)",
                    nodes.points, nodes.weights, reference.u.col(0));
    plot::field_map(dir + "/field_u2_pred.svg", prob.name + " u2 (predicted)",
                    nodes.points, nodes.weights, pred.u.col(1));
    plot::field_map(dir + "/field_u2_ref.svg", prob.name + " u2 (reference)",
                    nodes.points, nodes.weights, reference.u.col(1));
    plot::field_map(dir + "/field_sigma11_pred.svg",
                    prob.name + " sigma11 (predicted)", nodes.points,
                    nodes.weights, pred.stress.col(0));
    plot::field_map(dir + "/field_sigma11_ref.svg",
                    prob.name + " sigma11 (reference)", nodes.points,
                    nodes.weights, reference.stress.col(0));
    if (pred.has_temp) {
      plot::field_map(dir + "/field_T_pred.svg", prob.name + " T (predicted)",
                      nodes.points, nodes.weights, pred.temp);
      plot::field_map(dir + "/field_T_ref.svg", prob.name + " T (reference)",
                      nodes.points, nodes.weights, reference.temp);
    }
  }

  // Layer statistic bands (activations, weights, gradients).
  if (!trace.diagnostics.empty()) {
    const std::size_t n_act = trace.diagnostics.front().act_mean.size();
    const std::size_t n_lay = trace.diagnostics.front().w_mean.size();
    auto band = [&](const std::string& file, const std::string& title,
                    std::size_t count, auto mean_of, auto std_of) {
      std::vector<plot::Band> bands(count);
      for (std::size_t l = 0; l < count; ++l) {
        bands[l].label = "layer " + std::to_string(l + 1);
        for (const auto& d : trace.diagnostics) {
          bands[l].x.push_back(d.epoch);
          bands[l].mean.push_back(mean_of(d, l));
          bands[l].stdev.push_back(std_of(d, l));
        }
      }
      plot::band_chart(dir + "/" + file, prob.name + " " + title, "epoch",
                       bands);
    };
    band("activations.svg", "activation distribution", n_act,
         [](const train::LayerDiag& d, std::size_t l) { return d.act_mean[l]; },
         [](const train::LayerDiag& d, std::size_t l) { return d.act_std[l]; });
    band("weights.svg", "weight distribution", n_lay,
         [](const train::LayerDiag& d, std::size_t l) { return d.w_mean[l]; },
         [](const train::LayerDiag& d, std::size_t l) { return d.w_std[l]; });
    band("gradients.svg", "gradient distribution", n_lay,
         [](const train::LayerDiag& d, std::size_t l) { return d.gw_mean[l]; },
         [](const train::LayerDiag& d, std::size_t l) { return d.gw_std[l]; });
  }
}

}  // namespace

RunOutcome run_problem(prob::ProblemCode code, const RunOverrides& o) {
  RunOutcome out;
  out.resolved = resolve(code, o);
  const auto& p = out.resolved.prob;

  fs::create_directories(o.out_dir);
  {
    std::ofstream cfg(o.out_dir + "/config.json");
    cfg << resolved_to_json(out.resolved).dump(1) << '\n';
  }

  const mesh::NodeSet nodes = prob::build_nodes(p);
  train::CheckpointFn ckpt;
  if (p.train.checkpoint_every > 0) {
    ckpt = [&](int epoch, const std::vector<nn::MlpParams>& params) {
      io::save_checkpoint(
          o.out_dir + "/checkpoint_" + std::to_string(epoch) + ".json",
          p.nets, params);
    };
  }
  const train::TrainResult result = train::train(p, nodes, p.train, ckpt);
  out.epochs_run = result.trace.epochs_run;
  if (!result.trace.history.empty()) out.final_loss = result.trace.history.back();

  const ref::ReferenceField reference = ref::reference_at_nodes(
      p, nodes, out.resolved.fem_nx, out.resolved.fem_ny);
  const eng::Prediction pred = eng::predict(p, result.params, nodes.points);
  out.report = metrics::score_problem(p, nodes, pred, reference);
  out.pass = acceptance_pass(p, out.report, &out.detail);

  write_loss_csv(o.out_dir + "/loss.csv", result.trace);
  write_diag_csv(o.out_dir + "/diagnostics.csv", result.trace);
  write_fields_csv(o.out_dir + "/fields.csv", p, nodes, pred, reference);
  write_scores_csv(o.out_dir + "/scores.csv", out.report);
  io::save_checkpoint(o.out_dir + "/checkpoint.json", p.nets, result.params);
  if (o.plots) write_plots(o.out_dir, p, nodes, result.trace, pred, reference);
  return out;
}

bool run_score_table(const std::string& out_dir, std::string* table_text) {
  const std::vector<std::string> cols{"u1",    "u2",    "sigma11",
                                      "sigma12", "sigma22", "eps11",
                                      "eps12",  "eps22",  "T"};
  std::ostringstream table;
  table << std::left << std::setw(22) << "Problem";
  for (const auto& c : cols) table << std::setw(10) << c;
  table << std::setw(6) << "pass" << '\n';

  std::ofstream csv(out_dir + "/table3.csv");
  csv << "problem";
  for (const auto& c : cols) csv << ',' << c;
  csv << ",pass\n";

  bool all_ok = true;
  for (prob::ProblemCode code : prob::all_codes()) {
    RunOverrides o;
    o.out_dir = out_dir + "/" + prob::to_string(code);
    RunOutcome r;
    bool ok = false;
    std::string note;
    try {
      r = run_problem(code, o);
      ok = r.pass;
      note = r.detail;
    } catch (const std::exception& e) {
      note = e.what();
    }
    all_ok = all_ok && ok;
    table << std::left << std::setw(22) << prob::to_string(code);
    csv << prob::to_string(code);
    for (const auto& c : cols) {
      if (r.report.has(c)) {
        const double v = r.report.score(c).r2;
        std::ostringstream cell;
        cell.precision(4);
        cell << std::fixed << v;
        table << std::setw(10) << cell.str();
        csv << ',' << v;
      } else {
        table << std::setw(10) << "-";
        csv << ",-";
      }
    }
    table << std::setw(6) << (ok ? "ok" : "FAIL") << '\n';
    csv << ',' << (ok ? 1 : 0) << '\n';
    if (!ok) table << "    detail: " << note << '\n';
  }
  if (table_text) *table_text = table.str();
  return all_ok;
}

}  // namespace dem::run
