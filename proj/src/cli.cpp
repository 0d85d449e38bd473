#include "discomax/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "discomax/dataset.hpp"
#include "discomax/diagnostics.hpp"
#include "discomax/errors.hpp"
#include "discomax/evaluation.hpp"
#include "discomax/solver.hpp"

namespace discomax {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw io_error("write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ec2;
    fs::remove(tmp, ec2);
    throw io_error("cannot move temp file onto '" + path + "': " + ec.message());
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string sibling_path(const std::string& out_path, const char* suffix) {
  fs::path p(out_path);
  p.replace_extension();
  p += suffix;
  return p.string();
}

double parse_double_flag(const std::string& s, const char* flag) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw usage_error(std::string(flag) + " expects a number, got '" + s + "'");
  }
}

struct WFlag {
  WSchedule schedule = WSchedule::dcor_per_iteration;
  double value = 1.0;
  std::string echo = "dcor";
};

WFlag parse_w_flag(const std::string& s) {
  WFlag w;
  w.echo = s;
  if (s == "dcor") {
    w.schedule = WSchedule::dcor_per_iteration;
    return w;
  }
  if (s.rfind("fixed:", 0) == 0) {
    w.schedule = WSchedule::fixed;
    w.value = parse_double_flag(s.substr(6), "--w fixed:<v>");
    if (!(w.value > 0.0)) throw usage_error("--w fixed value must be positive");
    return w;
  }
  throw usage_error("--w expects 'dcor' or 'fixed:<value>', got '" + s + "'");
}

struct GammaFlag {
  GammaPolicy policy = GammaPolicy::auto_midpoint;
  double value = 1.0;
  std::string echo = "auto";
};

GammaFlag parse_gamma_flag(const std::string& s, bool allow_off) {
  GammaFlag g;
  g.echo = s;
  if (s == "auto") return g;
  if (s == "off") {
    if (!allow_off) throw usage_error("--gamma 'off' is not accepted by this command");
    g.policy = GammaPolicy::off;
    return g;
  }
  g.policy = GammaPolicy::fixed;
  g.value = parse_double_flag(s, "--gamma");
  if (g.value == 0.0) throw usage_error("--gamma must be nonzero");
  return g;
}

UpdateRule parse_update_flag(const std::string& s) {
  if (s == "mm") return UpdateRule::mm;
  if (s == "cccp") return UpdateRule::cccp;
  throw usage_error("--update expects 'mm' or 'cccp', got '" + s + "'");
}

InitPolicy parse_init_flag(const std::string& s) {
  if (s == "gaussian") return InitPolicy::gaussian;
  if (s == "subset") return InitPolicy::feature_subset;
  throw usage_error("--init expects 'gaussian' or 'subset', got '" + s + "'");
}

ordered_json report_to_json(const EvalReport& report) {
  ordered_json j;
  j["method"] = report.method;
  j["per_fold_rmse"] = report.per_fold_rmse;
  j["mean_rmse"] = report.mean_rmse;
  j["dimension"] = report.dimension;
  j["seed"] = report.seed;
  j["knn_k"] = report.knn_k;
  return j;
}

void emit_json(const ordered_json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_file_atomic(out_path, text);
}

struct EmbedOptions {
  std::string input;
  std::string response;
  std::size_t dim = 2;
  std::size_t iters = 100;
  std::string update = "mm";
  std::string w = "dcor";
  std::string gamma = "auto";
  std::string init = "gaussian";
  std::uint64_t seed = 0;
  bool standardize = false;
  bool timings = false;
  std::string out = "embedding.csv";
  std::string trace;
  double loss_tol = 0.0;
};

int do_embed(const EmbedOptions& opt) {
  const std::vector<std::string> responses = split_list(opt.response);
  if (responses.empty()) throw usage_error("--response expects at least one column name");
  const Dataset ds = load_csv(opt.input, responses, opt.standardize);
  if (opt.dim < 1 || opt.dim > ds.x.cols())
    throw usage_error("--dim must be between 1 and the feature count (" +
                      std::to_string(ds.x.cols()) + ")");
  if (opt.iters < 1) throw usage_error("--iters must be at least 1");
  if (opt.loss_tol < 0.0) throw usage_error("--loss-tol must be nonnegative");

  const WFlag w = parse_w_flag(opt.w);
  const GammaFlag gamma = parse_gamma_flag(opt.gamma, /*allow_off=*/true);

  SolverConfig cfg;
  cfg.target_dim = opt.dim;
  cfg.update = parse_update_flag(opt.update);
  cfg.w_schedule = w.schedule;
  cfg.w_fixed = w.value;
  cfg.gamma_policy = gamma.policy;
  cfg.gamma_fixed = gamma.value;
  cfg.max_iter = opt.iters;
  cfg.loss_tol = opt.loss_tol;
  cfg.seed = opt.seed;
  cfg.init = parse_init_flag(opt.init);

  const EmbeddingResult result = run(ds, cfg);

  // Embedding CSV: 17 significant digits so reloading is lossless.
  std::string csv = "dim_1";
  for (std::size_t j = 1; j < cfg.target_dim; ++j) csv += ",dim_" + std::to_string(j + 1);
  csv += "\n";
  for (std::size_t i = 0; i < result.embedding.rows(); ++i) {
    for (std::size_t j = 0; j < result.embedding.cols(); ++j) {
      if (j > 0) csv += ',';
      csv += format_g17(result.embedding(i, j));
    }
    csv += '\n';
  }

  ordered_json trace = ordered_json::array();
  for (const IterationRecord& rec : result.trace) {
    ordered_json row;
    row["iter"] = rec.iter;
    row["loss"] = rec.loss;
    row["dcor2_lap_norm"] = rec.dcor2_lap_norm;
    row["dcor2_lap_stated"] = rec.dcor2_lap_stated;
    row["dcor2_classical"] = rec.dcor2_classical;
    row["w"] = rec.w;
    row["step_norm"] = rec.step_norm;
    // Measured times differ between runs; zero keeps reruns byte-identical
    // unless timings were requested explicitly.
    row["ms"] = opt.timings ? rec.ms : 0.0;
    trace.push_back(std::move(row));
  }

  const GammaInterval interval = gamma_interval(ds.x, ds.y);
  ordered_json manifest;
  manifest["command"] = "embed";
  manifest["input"] = opt.input;
  manifest["response"] = responses;
  manifest["standardize"] = opt.standardize;
  manifest["dim"] = cfg.target_dim;
  manifest["update"] = opt.update;
  manifest["w"] = w.echo;
  manifest["gamma"] = gamma.echo;
  manifest["init"] = opt.init;
  manifest["iters"] = cfg.max_iter;
  manifest["loss_tol"] = cfg.loss_tol;
  manifest["seed"] = cfg.seed;
  manifest["timings"] = opt.timings;
  manifest["gamma_interval"] = {interval.lo, interval.hi};
  manifest["gamma_used"] = result.gamma_used;
  manifest["iterations_run"] = result.trace.size();
  manifest["stop_reason"] = to_string(result.stop_reason);
  manifest["version"] = kVersion;

  const std::string trace_path = opt.trace.empty() ? sibling_path(opt.out, ".trace.json")
                                                   : opt.trace;
  const std::string manifest_path = sibling_path(opt.out, ".manifest.json");
  write_file_atomic(opt.out, csv);
  write_file_atomic(trace_path, trace.dump(2) + "\n");
  write_file_atomic(manifest_path, manifest.dump(2) + "\n");

  std::cout << "wrote " << opt.out << " (" << result.embedding.rows() << "x"
            << result.embedding.cols() << "), " << result.trace.size()
            << " iterations, stop=" << to_string(result.stop_reason) << "\n";
  return 0;
}

struct CheckOptions {
  std::string input;
  std::string response;
  std::string gamma = "auto";
  std::uint64_t seed = 0;
  std::string out;
};

int do_check(const CheckOptions& opt) {
  const std::vector<std::string> responses = split_list(opt.response);
  if (responses.empty()) throw usage_error("--response expects at least one column name");
  const Dataset ds = load_csv(opt.input, responses, /*standardize=*/false);

  const GammaFlag gamma = parse_gamma_flag(opt.gamma, /*allow_off=*/false);
  double gamma_value = gamma.value;
  if (gamma.policy == GammaPolicy::auto_midpoint)
    gamma_value = gamma_interval(ds.x, ds.y).midpoint();

  const ConvergenceReport report = convergence_report(ds.x, ds.y, gamma_value, opt.seed);

  ordered_json j;
  j["input"] = opt.input;
  j["response"] = responses;
  j["gamma_interval"] = {report.interval.lo, report.interval.hi};
  j["gamma_used"] = report.gamma_used;
  j["psd_lower_ok"] = report.psd_lower_ok;
  j["psd_upper_ok"] = report.psd_upper_ok;
  j["trace_condition_ok"] = report.trace_condition_ok;
  j["update_map_radius"] = report.radius;
  j["strong_attraction"] = report.strong_attraction;
  j["seed"] = opt.seed;
  emit_json(j, opt.out);
  return 0;
}

struct EvalOptions {
  std::string input;
  std::string response;
  std::size_t dim = 2;
  std::size_t folds = 5;
  std::size_t knn_k = 5;
  std::size_t iters = 100;
  std::string checkpoints;
  std::uint64_t seed = 0;
  std::string baselines = "identity,random_projection";
  std::string out;
};

int do_eval(const EvalOptions& opt) {
  const std::vector<std::string> responses = split_list(opt.response);
  if (responses.empty()) throw usage_error("--response expects at least one column name");
  const Dataset ds = load_csv(opt.input, responses, /*standardize=*/false);
  if (opt.dim < 1 || opt.dim > ds.x.cols())
    throw usage_error("--dim must be between 1 and the feature count (" +
                      std::to_string(ds.x.cols()) + ")");
  if (opt.iters < 1) throw usage_error("--iters must be at least 1");

  std::vector<std::size_t> checkpoints;
  if (opt.checkpoints.empty()) {
    checkpoints.push_back(opt.iters);
  } else {
    for (const std::string& item : split_list(opt.checkpoints)) {
      const double v = parse_double_flag(item, "--checkpoints");
      if (v < 1 || v != std::floor(v)) throw usage_error("--checkpoints expects integers >= 1");
      checkpoints.push_back(static_cast<std::size_t>(v));
    }
    for (std::size_t c = 1; c < checkpoints.size(); ++c)
      if (checkpoints[c] <= checkpoints[c - 1])
        throw usage_error("--checkpoints must be strictly ascending");
    if (checkpoints.back() > opt.iters)
      throw usage_error("--checkpoints entries must not exceed --iters");
  }

  SolverConfig cfg;
  cfg.target_dim = opt.dim;
  cfg.max_iter = opt.iters;
  cfg.seed = opt.seed;

  const FoldPlan plan = kfold_plan(ds.x.rows(), opt.folds, opt.seed);
  const IterationSelection selection =
      select_iterations_by_cv(ds, cfg, checkpoints, plan, opt.knn_k);

  std::vector<double> y(ds.y.rows());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = ds.y(i, 0);

  ordered_json methods;
  for (std::size_t c = 0; c < selection.checkpoints.size(); ++c) {
    if (selection.checkpoints[c] == selection.best_iteration) {
      EvalReport best = selection.reports[c];
      best.method = "discomax";
      methods["discomax"] = report_to_json(best);
    }
  }

  const auto baselines = baseline_embeddings(ds.x, opt.dim, opt.seed);
  for (const std::string& name : split_list(opt.baselines)) {
    if (!baselines.count(name)) throw usage_error("unknown baseline '" + name + "'");
    methods[name] = report_to_json(cv_rmse(baselines.at(name), y, plan, opt.knn_k, name));
  }

  ordered_json j;
  j["input"] = opt.input;
  j["response"] = responses;
  j["dim"] = opt.dim;
  j["folds"] = opt.folds;
  j["knn_k"] = opt.knn_k;
  j["seed"] = opt.seed;
  j["fold_seed"] = plan.seed;
  j["fold_sizes"] = [&] {
    std::vector<std::size_t> sizes(plan.k, 0);
    for (const std::size_t f : plan.assignments) sizes[f]++;
    return sizes;
  }();
  j["note"] =
      "embeddings are fit on all rows before cross-validation (transductive); "
      "only the regressor is cross-validated, so fold leakage is possible";
  j["checkpoints"] = selection.checkpoints;
  j["selected_iteration"] = selection.best_iteration;
  j["methods"] = std::move(methods);
  ordered_json checkpoint_reports = ordered_json::array();
  for (const EvalReport& report : selection.reports)
    checkpoint_reports.push_back(report_to_json(report));
  j["checkpoint_reports"] = std::move(checkpoint_reports);
  emit_json(j, opt.out);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"supervised embedding by distance-correlation maximization"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  EmbedOptions embed;
  CLI::App* embed_cmd = app.add_subcommand("embed", "learn a low-dimensional embedding");
  embed_cmd->add_option("--input", embed.input, "input CSV path")->required();
  embed_cmd->add_option("--response", embed.response, "response column name(s), comma separated")
      ->required();
  embed_cmd->add_option("--dim", embed.dim, "target dimension")->required();
  embed_cmd->add_option("--iters", embed.iters, "iteration budget");
  embed_cmd->add_option("--update", embed.update, "update rule: mm|cccp");
  embed_cmd->add_option("--w", embed.w, "weight schedule: dcor|fixed:<v>");
  embed_cmd->add_option("--gamma", embed.gamma, "prescale policy: auto|<v>|off");
  embed_cmd->add_option("--init", embed.init, "start embedding: gaussian|subset");
  embed_cmd->add_option("--seed", embed.seed, "random seed");
  embed_cmd->add_flag("--standardize", embed.standardize, "standardize feature columns");
  embed_cmd->add_flag("--timings", embed.timings,
                      "write measured per-iteration ms into the trace (reruns then differ)");
  embed_cmd->add_option("--out", embed.out, "embedding CSV output path");
  embed_cmd->add_option("--trace", embed.trace, "trace JSON output path");
  embed_cmd->add_option("--loss-tol", embed.loss_tol, "relative loss-change stop threshold");

  CheckOptions check;
  CLI::App* check_cmd = app.add_subcommand("check", "convergence diagnostics report");
  check_cmd->add_option("--input", check.input, "input CSV path")->required();
  check_cmd->add_option("--response", check.response, "response column name(s)")->required();
  check_cmd->add_option("--gamma", check.gamma, "prescale: auto|<v>");
  check_cmd->add_option("--seed", check.seed, "random seed");
  check_cmd->add_option("--out", check.out, "report path (stdout when omitted)");

  EvalOptions eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "cross-validated k-NN evaluation");
  eval_cmd->add_option("--input", eval.input, "input CSV path")->required();
  eval_cmd->add_option("--response", eval.response, "response column name(s)")->required();
  eval_cmd->add_option("--dim", eval.dim, "target dimension")->required();
  eval_cmd->add_option("--folds", eval.folds, "fold count");
  eval_cmd->add_option("--knn-k", eval.knn_k, "k-NN neighbor count");
  eval_cmd->add_option("--iters", eval.iters, "iteration budget");
  eval_cmd->add_option("--checkpoints", eval.checkpoints,
                       "iteration counts to evaluate, comma separated");
  eval_cmd->add_option("--seed", eval.seed, "random seed");
  eval_cmd->add_option("--baselines", eval.baselines, "baseline embeddings to include");
  eval_cmd->add_option("--out", eval.out, "report path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ERROR USAGE: " << e.what() << "\n";
    return 2;
  }

  try {
    if (embed_cmd->parsed()) return do_embed(embed);
    if (check_cmd->parsed()) return do_check(check);
    if (eval_cmd->parsed()) return do_eval(eval);
    std::cerr << "ERROR USAGE: no command given\n";
    return 2;
  } catch (const usage_error& e) {
    std::cerr << "ERROR " << e.code() << ": " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    std::cerr << "ERROR " << e.code() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "ERROR INTERNAL: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace discomax
