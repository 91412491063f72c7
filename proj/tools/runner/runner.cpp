#include "runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>

#include "config.hpp"
#include "dnc/csv.hpp"
#include "dnc/errors.hpp"
#include "dnc/hum.hpp"
#include "dnc/newton.hpp"
#include "dnc/random_fields.hpp"
#include "dnc/verify.hpp"

namespace dnc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(Pipeline p) {
  switch (p) {
    case Pipeline::solve_forward: return "solve-forward";
    case Pipeline::null_control: return "null-control";
    case Pipeline::null_control_nonlinear: return "null-control-nonlinear";
    case Pipeline::verify: return "verify";
  }
  return "unknown";
}

std::optional<Pipeline> parse_pipeline(std::string_view name) {
  for (auto p : {Pipeline::solve_forward, Pipeline::null_control,
                 Pipeline::null_control_nonlinear, Pipeline::verify}) {
    if (name == to_string(p)) return p;
  }
  return std::nullopt;
}

namespace {

/// Diagnostics, assertion flags and sweep metrics of one run. Filled
/// incrementally so a failing pipeline still reports what it reached.
struct Report {
  json diagnostics = json::object();
  json assertions = json::object();
  json metrics = json::object();

  void check(const std::string& name, bool ok) { assertions[name] = ok; }
  bool passed() const {
    return std::all_of(assertions.begin(), assertions.end(),
                       [](const json& v) { return v.get<bool>(); });
  }
};

class Output {
 public:
  Output(fs::path dir, bool csv) : dir_(std::move(dir)), csv_(csv) {}

  void csv(const std::string& name, const std::function<void(std::ostream&)>& write) const {
    if (!csv_) return;
    std::ofstream os(dir_ / name, std::ios::binary);
    if (!os) throw ConfigError("output.directory", "cannot write " + (dir_ / name).string());
    write(os);
  }

 private:
  fs::path dir_;
  bool csv_;
};

void write_field_csv(std::ostream& os, const Field2D& f, const SpaceTimeGrid& grid,
                     std::string_view name) {
  CsvWriter csv(os, {"t", "x", name});
  for (int j = 0; j <= grid.nt; ++j) {
    for (int i = 0; i <= grid.nx; ++i) {
      csv.field(grid.t[j]).field(grid.x[i]).field(f(j, i));
      csv.end_row();
    }
  }
}

bool all_finite(const Field2D& f) {
  return std::all_of(f.data().begin(), f.data().end(), [](double v) { return std::isfinite(v); });
}

double max_abs(const Field2D& f) {
  double m = 0.0;
  for (double v : f.data()) m = std::max(m, std::abs(v));
  return m;
}

double safe_ratio(double num, double den) { return den > 0 ? num / den : 0.0; }

void validate(const ProblemData& pd, const SpaceTimeGrid& grid) {
  try {
    validate_degeneracy(pd.a);
  } catch (const CoefficientError& e) {
    throw ConfigError("problem.a", e.what());
  }
  try {
    validate_problem(pd, grid);
  } catch (const CoefficientError& e) {
    throw ConfigError("problem", e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigError("problem", e.what());
  }
}

HumOptions hum_options(const ExperimentConfig& c) {
  HumOptions h;
  h.tol_terminal = c.hum.tol_terminal;
  h.log_weight_window = c.hum.window;
  return h;
}

void solve_forward(const ExperimentConfig& c, const Output& out, Report& rep) {
  const auto grid = make_grid(c);
  const auto pd = make_problem(c.problem, grid);
  validate(pd, grid);
  NonlinearOptions nl;
  nl.scheme = c.discretization.scheme;
  const Field2D u = forward_solve_nonlinear(pd, grid.make_field(), grid, nl);
  const double terminal = l2_norm(u.row(grid.nt), grid);
  rep.diagnostics = {{"u0_norm", l2_norm(pd.u0, grid)}, {"terminal_norm", terminal}};
  rep.metrics["terminal_norm"] = terminal;
  rep.check("state_finite", all_finite(u));
  out.csv("trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, u, grid); });
}

json stage_json(const StageReport& s) {
  return {{"n", s.n},
          {"cg_iters", s.cg_iters},
          {"converged", s.converged},
          {"Jn_log", s.Jn.log_value()},
          {"terminal_norm", s.terminal_norm},
          {"ctrl_weighted_norm_log", s.norms.control_log},
          {"state_weighted_norm_log", s.norms.state_log},
          {"clipped_fraction", s.clipped_fraction}};
}

void null_control(const ExperimentConfig& c, const Output& out, Report& rep) {
  const auto grid = make_grid(c);
  const auto pd = make_problem(c.problem, grid);
  validate(pd, grid);
  rep.metrics = {{"success", false}, {"terminal_ratio", nullptr}, {"h_max", nullptr}};

  const LinearParabolic sys(pd.a, linearized_potential(pd.f, grid), grid, c.discretization.scheme);
  const auto fields = build_weight_fields(carleman_params(c, c.hum.s), pd.a, grid);
  const ControlProblem problem(sys, pd.omega, grid.make_field(), pd.u0);
  const auto r =
      solve_null_control(problem, fields, pd.omega, penalty_schedule(c.hum), hum_options(c));

  json stages = json::array();
  bool norms_finite = true;
  for (const auto& s : r.stages) {
    stages.push_back(stage_json(s));
    norms_finite = norms_finite && std::isfinite(s.norms.control_log) &&
                   std::isfinite(s.norms.state_log);
  }
  const double ratio = safe_ratio(r.terminal_norm, r.free_terminal_norm);
  rep.diagnostics = {{"u0_norm", r.u0_norm},
                     {"terminal_norm", r.terminal_norm},
                     {"free_terminal_norm", r.free_terminal_norm},
                     {"terminal_ratio", ratio},
                     {"h_max", max_abs(r.h)},
                     {"all_stages_converged", r.all_stages_converged},
                     {"stages", stages}};
  rep.metrics = {{"success", r.success}, {"terminal_ratio", ratio}, {"h_max", max_abs(r.h)}};
  rep.check("terminal_reduction", r.success);
  rep.check("stage_monotone", r.terminal_monotone);
  // Zero data leaves both weighted norms at log 0 = -inf.
  rep.check("weighted_norms_finite", norms_finite || r.u0_norm == 0.0);

  out.csv("stages.csv", [&](std::ostream& os) { write_stages_csv(os, r.stages); });
  out.csv("control.csv", [&](std::ostream& os) { write_field_csv(os, r.h, grid, "h"); });
  out.csv("state.csv", [&](std::ostream& os) { write_field_csv(os, r.u, grid, "u"); });
  out.csv("weights.csv", [&](std::ostream& os) { write_weights_csv(os, fields, grid); });
}

void null_control_nonlinear(const ExperimentConfig& c, const Output& out, Report& rep) {
  const auto grid = make_grid(c);
  const auto pd = make_problem(c.problem, grid);
  validate(pd, grid);
  rep.metrics = {{"converged", false}, {"iterations", nullptr}, {"terminal_ratio", nullptr}};

  const LinearParabolic sys(pd.a, linearized_potential(pd.f, grid), grid, c.discretization.scheme);
  const auto fields = build_weight_fields(carleman_params(c, c.hum.s), pd.a, grid);
  NewtonOptions opts;
  opts.tol = c.newton.tol;
  opts.maxit = c.newton.maxit;
  opts.divergence_window = c.newton.divergence_window;
  opts.replay.scheme = c.discretization.scheme;
  const auto r =
      local_null_control(pd, sys, fields, penalty_schedule(c.hum), hum_options(c), opts);

  json history = json::array();
  for (const auto& s : r.history) {
    history.push_back({{"k", s.k},
                       {"increment_log", s.increment_log},
                       {"residual_log", s.residual_log},
                       {"contraction", s.contraction},
                       {"terminal_norm_linear", s.terminal_norm_linear},
                       {"cg_iters", s.cg_iters}});
  }
  const double ratio = safe_ratio(r.terminal_norm_replay, r.free_terminal_norm_nonlinear);
  rep.diagnostics = {{"iterations", r.iterations},
                     {"converged", r.converged},
                     {"u0_norm", r.u0_norm},
                     {"terminal_norm_replay", r.terminal_norm_replay},
                     {"free_terminal_norm_nonlinear", r.free_terminal_norm_nonlinear},
                     {"terminal_ratio", ratio},
                     {"replay_gap", r.replay_gap},
                     {"history", history}};
  rep.metrics = {{"converged", r.converged}, {"iterations", r.iterations}, {"terminal_ratio", ratio}};
  rep.check("newton_converged", r.converged);
  rep.check("replay_reduction",
            r.terminal_norm_replay <= c.hum.tol_terminal * r.free_terminal_norm_nonlinear);

  out.csv("newton.csv", [&](std::ostream& os) { write_newton_csv(os, r); });
  out.csv("control.csv", [&](std::ostream& os) { write_field_csv(os, r.h, grid, "h"); });
  out.csv("state.csv", [&](std::ostream& os) { write_field_csv(os, r.u_replay, grid, "u"); });
}

bool uses_only_hardy(const VerifySpec& v) {
  return std::all_of(v.checks.begin(), v.checks.end(),
                     [](const std::string& c) { return c == "hardy" || c == "hardy_ensemble"; });
}

class VerifyRun {
 public:
  VerifyRun(const ExperimentConfig& c, Report& rep)
      : c_(c), rep_(rep), grid_(make_grid(c)), pd_(make_problem(c.problem, grid_)) {}

  void run(const Output& out) {
    // Hardy checks only read a, so they also accept coefficients outside the
    // weakly degenerate class (the linear coefficient in particular).
    if (!uses_only_hardy(c_.verify)) validate(pd_, grid_);
    for (const auto& name : c_.verify.checks) dispatch(name);
    out.csv("verify.csv", [&](std::ostream& os) { write_verify_csv(os, reports_); });
  }

 private:
  void dispatch(const std::string& name) {
    if (name == "hardy") return hardy();
    if (name == "hardy_ensemble") return hardy_ensemble();
    if (name == "carleman_phi") return carleman(name, CarlemanKind::phi_weights);
    if (name == "carleman_A") return carleman(name, CarlemanKind::A_weights);
    if (name == "carleman_phi_sweep") return carleman_sweep(name, CarlemanKind::phi_weights);
    if (name == "carleman_A_sweep") return carleman_sweep(name, CarlemanKind::A_weights);
    if (name == "energy") return energy();
    if (name == "nonlocal_sup") return controlled_pair_check(name);
    if (name == "bilinear") return controlled_pair_check(name);
    if (name == "claim1") return claim1();
  }

  /// Records a group of reports under one check name.
  void record(const std::string& name, std::vector<InequalityReport> group, json extra = {}) {
    double max_ratio = 0.0;
    bool pass = true;
    for (auto& r : group) {
      r.name = name;
      max_ratio = std::max(max_ratio, r.ratio);
      pass = pass && r.pass && std::isfinite(r.ratio);
    }
    json d = {{"members", group.size()}, {"max_ratio", max_ratio}, {"cap", c_.cap(name)}};
    if (extra.is_object()) d.update(extra);
    if (extra.contains("plateau")) pass = pass && extra["plateau"].get<bool>();
    d["pass"] = pass;
    rep_.diagnostics[name] = d;
    rep_.metrics["max_ratio_" + name] = max_ratio;
    rep_.check(name, pass);
    std::move(group.begin(), group.end(), std::back_inserter(reports_));
  }

  const LinearParabolic& system() {
    if (!sys_) {
      sys_.emplace(pd_.a, linearized_potential(pd_.f, grid_), grid_, c_.discretization.scheme);
    }
    return *sys_;
  }

  const WeightFields& carleman_fields() {
    if (!fields_) fields_ = build_weight_fields(carleman_params(c_, c_.carleman.s), pd_.a, grid_);
    return *fields_;
  }

  void hardy() {
    std::vector<double> w(grid_.nodes());
    for (int i = 0; i <= grid_.nx; ++i) w[i] = grid_.x[i] * (1 - grid_.x[i]);
    const double theta = hardy_admissible_theta(pd_.a);
    record("hardy", {hardy_poincare_ratio(pd_.a, w, grid_, c_.cap("hardy"))},
           {{"admissible_theta", theta}});
  }

  void hardy_ensemble() {
    std::vector<InequalityReport> group;
    for (int k = 0; k < c_.verify.hardy_members; ++k) {
      const auto seed = member_seed(c_.verify.seed, static_cast<std::uint64_t>(k));
      auto r = hardy_poincare_ratio(pd_.a, random_sine_profile(grid_, seed), grid_,
                                    c_.cap("hardy_ensemble"));
      r.seed = seed;
      group.push_back(std::move(r));
    }
    record("hardy_ensemble", std::move(group));
  }

  void carleman(const std::string& name, CarlemanKind kind) {
    record(name, carleman_ensemble(kind, system(), carleman_fields(), pd_.omega, c_.verify.members,
                                   c_.verify.seed, c_.cap(name)));
  }

  void carleman_sweep(const std::string& name, CarlemanKind kind) {
    std::vector<InequalityReport> group;
    std::vector<double> maxima;
    for (double s : c_.verify.s_values) {
      const auto fields = build_weight_fields(carleman_params(c_, s), pd_.a, grid_);
      auto part = carleman_ensemble(kind, system(), fields, pd_.omega, c_.verify.members,
                                    c_.verify.seed, c_.cap(name));
      double m = 0.0;
      for (const auto& r : part) m = std::max(m, r.ratio);
      maxima.push_back(m);
      std::move(part.begin(), part.end(), std::back_inserter(group));
    }
    const double fop = safe_ratio(maxima.back(), maxima[maxima.size() - 2]);
    record(name, std::move(group),
           {{"s_values", c_.verify.s_values},
            {"max_ratio_per_s", maxima},
            {"final_over_penultimate", fop},
            {"plateau", fop <= c_.verify.plateau_max}});
  }

  void energy() {
    std::vector<InequalityReport> group;
    for (int k = 0; k < c_.verify.members; ++k) {
      const auto su = member_seed(c_.verify.seed, 2 * static_cast<std::uint64_t>(k));
      const auto sf = member_seed(c_.verify.seed, 2 * static_cast<std::uint64_t>(k) + 1);
      auto r = energy_estimate_ratio(system(), random_sine_profile(grid_, su),
                                     random_sine_field(grid_, sf), c_.cap("energy"));
      r.seed = su;
      group.push_back(std::move(r));
    }
    record("energy", std::move(group));
  }

  const NullControlResult& controlled_pair() {
    if (!pair_) {
      hum_fields_ = build_weight_fields(carleman_params(c_, c_.hum.s), pd_.a, grid_);
      const ControlProblem problem(system(), pd_.omega, grid_.make_field(), pd_.u0);
      pair_ = solve_null_control(problem, *hum_fields_, pd_.omega, penalty_schedule(c_.hum),
                                 hum_options(c_));
    }
    return *pair_;
  }

  void controlled_pair_check(const std::string& name) {
    const auto& r = controlled_pair();
    const auto op = assemble_degenerate_operator(pd_.a, grid_);
    if (name == "nonlocal_sup") {
      record(name, {nonlocal_sup_bound(r.u, r.h, *hum_fields_, op, pd_.omega, grid_,
                                       c_.cap(name))});
    } else {
      record(name, {bilinear_bound_check(r.u, r.h, r.u, r.h, *hum_fields_, op, pd_.omega, grid_,
                                         c_.cap(name))});
    }
  }

  void claim1() {
    const double w = claim1_witness(carleman_fields(), grid_);
    auto r = make_report("claim1", LogScaled::from_log(w), LogScaled::from_log(0.0),
                         c_.cap("claim1"));
    r.s = c_.carleman.s;
    r.lambda = c_.carleman.lambda;
    record("claim1", {r}, {{"witness_log", w}});
  }

  const ExperimentConfig& c_;
  Report& rep_;
  SpaceTimeGrid grid_;
  ProblemData pd_;
  std::optional<LinearParabolic> sys_;
  std::optional<WeightFields> fields_;
  std::optional<WeightFields> hum_fields_;
  std::optional<NullControlResult> pair_;
  std::vector<InequalityReport> reports_;
};

struct PointResult {
  int code = exit_code::ok;
  std::string error;
  json metrics = json::object();
};

fs::path resolve_out(const json& raw, const RunOptions& opts) {
  if (!opts.out_dir.empty()) return opts.out_dir;
  if (raw.is_object() && raw.contains("output") && raw["output"].is_object() &&
      raw["output"].contains("directory") && raw["output"]["directory"].is_string()) {
    return raw["output"]["directory"].get<std::string>();
  }
  if (const char* env = std::getenv("DNC_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return "out";
}

void write_summary(const fs::path& dir, const json& summary) {
  std::ofstream os(dir / "summary.json", std::ios::binary);
  if (os) os << summary.dump(2) << '\n';
}

std::string_view status_name(int code) {
  switch (code) {
    case exit_code::ok: return "ok";
    case exit_code::assertion_failed: return "assertion_failed";
    case exit_code::config_error: return "config_error";
    default: return "solver_error";
  }
}

PointResult run_point(Pipeline pipeline, json raw, const fs::path& base_dir, const fs::path& dir,
                      const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  PointResult res;
  Report rep;
  std::optional<ExperimentConfig> config;
  try {
    if (opts.seed) raw["verify"]["seed"] = *opts.seed;
    config = parse_config(raw, base_dir);
    fs::create_directories(dir);
    const Output out(dir, config->writes("csv"));
    switch (pipeline) {
      case Pipeline::solve_forward: solve_forward(*config, out, rep); break;
      case Pipeline::null_control: null_control(*config, out, rep); break;
      case Pipeline::null_control_nonlinear: null_control_nonlinear(*config, out, rep); break;
      case Pipeline::verify: VerifyRun(*config, rep).run(out); break;
    }
    res.code = rep.passed() ? exit_code::ok : exit_code::assertion_failed;
  } catch (const ConfigError& e) {
    res = {exit_code::config_error, e.what()};
  } catch (const json::exception& e) {
    res = {exit_code::config_error, e.what()};
  } catch (const CoefficientError& e) {
    res = {exit_code::config_error, e.what()};
  } catch (const InvalidArgument& e) {
    res = {exit_code::config_error, e.what()};
  } catch (const fs::filesystem_error& e) {
    res = {exit_code::config_error, e.what()};
  } catch (const AdmissibilityFail& e) {
    res = {exit_code::assertion_failed, e.what()};
  } catch (const ZeroDenominator& e) {
    res = {exit_code::assertion_failed, e.what()};
  } catch (const std::exception& e) {
    res = {exit_code::solver_error, e.what()};
  }
  res.metrics = rep.metrics;

  if (!config || config->writes("json")) {
    json summary = {{"subcommand", to_string(pipeline)},
                    {"exit_code", res.code},
                    {"status", status_name(res.code)},
                    {"config", config ? to_json(*config) : raw},
                    {"diagnostics", rep.diagnostics},
                    {"assertions", rep.assertions},
                    {"wall_clock_seconds",
                     std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                         .count()}};
    if (!res.error.empty()) summary["error"] = res.error;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!ec) write_summary(dir, summary);
  }
  return res;
}

std::vector<std::string> metric_columns(Pipeline pipeline, const ExperimentConfig& c) {
  switch (pipeline) {
    case Pipeline::solve_forward: return {"terminal_norm"};
    case Pipeline::null_control: return {"success", "terminal_ratio", "h_max"};
    case Pipeline::null_control_nonlinear: return {"converged", "iterations", "terminal_ratio"};
    case Pipeline::verify: {
      std::vector<std::string> cols;
      for (const auto& name : c.verify.checks) cols.push_back("max_ratio_" + name);
      return cols;
    }
  }
  return {};
}

void write_metric(CsvWriter& csv, const json& metrics, const std::string& key) {
  if (!metrics.contains(key) || metrics[key].is_null()) {
    csv.field(std::numeric_limits<double>::quiet_NaN());
  } else if (metrics[key].is_boolean()) {
    csv.field(metrics[key].get<bool>() ? "true" : "false");
  } else if (metrics[key].is_number_integer()) {
    csv.field(metrics[key].get<long long>());
  } else {
    csv.field(metrics[key].get<double>());
  }
}

}  // namespace

int run(Pipeline pipeline, json config, const fs::path& base_dir, const RunOptions& opts) {
  const fs::path dir = resolve_out(config, opts);
  const auto res = run_point(pipeline, std::move(config), base_dir, dir, opts);
  if (!res.error.empty()) std::cerr << "dnc " << to_string(pipeline) << ": " << res.error << '\n';
  if (!opts.quiet) {
    std::cout << to_string(pipeline) << ": " << status_name(res.code) << " (exit " << res.code
              << "), outputs in " << dir.string() << '\n';
  }
  return res.code;
}

int sweep(Pipeline pipeline, json config, const fs::path& base_dir, const std::string& axis,
          const std::vector<double>& values, const RunOptions& opts) {
  auto fail = [&](const std::string& what) {
    std::cerr << "dnc sweep: " << what << '\n';
    return exit_code::config_error;
  };
  if (values.empty()) return fail("sweep values: list is empty");

  const fs::path root = resolve_out(config, opts);
  json canonical;
  ExperimentConfig base;
  try {
    if (opts.seed) config["verify"]["seed"] = *opts.seed;
    base = parse_config(config, base_dir);
    canonical = to_json(base);
    json probe = canonical;
    set_scalar(probe, axis, values.front());
    fs::create_directories(root);
  } catch (const ConfigError& e) {
    return fail(e.what());
  } catch (const json::exception& e) {
    return fail(e.what());
  } catch (const fs::filesystem_error& e) {
    return fail(e.what());
  }

  std::vector<PointResult> results(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < values.size(); k = next++) {
      json point = canonical;
      RunOptions popts = opts;
      popts.quiet = true;
      popts.seed.reset();
      try {
        set_scalar(point, axis, values[k]);
      } catch (const ConfigError& e) {
        results[k] = {exit_code::config_error, e.what()};
        continue;
      }
      results[k] = run_point(pipeline, point, base_dir, root / ("point_" + std::to_string(k)), popts);
    }
  };
  const auto jobs = static_cast<std::size_t>(std::clamp<int>(opts.jobs, 1, 256));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(jobs, values.size()); ++w) pool.emplace_back(worker);
  }

  const auto columns = metric_columns(pipeline, base);
  std::vector<std::string> header{"axis", "value", "exit_code"};
  header.insert(header.end(), columns.begin(), columns.end());
  int worst = exit_code::ok;
  json points = json::array();
  if (base.writes("csv")) {
    std::ofstream os(root / "sweep.csv", std::ios::binary);
    CsvWriter csv(os, header);
    for (std::size_t k = 0; k < values.size(); ++k) {
      csv.field(axis).field(values[k]).field(results[k].code);
      for (const auto& col : columns) write_metric(csv, results[k].metrics, col);
      csv.end_row();
    }
  }
  for (std::size_t k = 0; k < values.size(); ++k) {
    worst = std::max(worst, results[k].code);
    json p = {{"value", values[k]},
              {"exit_code", results[k].code},
              {"status", status_name(results[k].code)},
              {"directory", "point_" + std::to_string(k)},
              {"metrics", results[k].metrics}};
    if (!results[k].error.empty()) {
      p["error"] = results[k].error;
      std::cerr << "dnc sweep: " << axis << " = " << format_real(values[k]) << ": "
                << results[k].error << '\n';
    }
    points.push_back(std::move(p));
  }
  if (base.writes("json")) {
    write_summary(root, {{"subcommand", "sweep"},
                         {"pipeline", to_string(pipeline)},
                         {"axis", axis},
                         {"values", values},
                         {"exit_code", worst},
                         {"status", status_name(worst)},
                         {"config", canonical},
                         {"points", points}});
  }
  if (!opts.quiet) {
    std::cout << "sweep " << axis << " over " << values.size() << " values: "
              << status_name(worst) << " (exit " << worst << "), outputs in " << root.string()
              << '\n';
  }
  return worst;
}

namespace {

std::optional<json> load_or_report(const fs::path& path) {
  try {
    return read_json_file(path);
  } catch (const ConfigError& e) {
    std::cerr << "dnc: " << e.what() << '\n';
    return std::nullopt;
  }
}

}  // namespace

int run_file(Pipeline pipeline, const fs::path& config_path, const RunOptions& opts) {
  auto j = load_or_report(config_path);
  if (!j) return exit_code::config_error;
  return run(pipeline, std::move(*j), config_path.parent_path(), opts);
}

int sweep_file(Pipeline pipeline, const fs::path& config_path, const std::string& axis,
               const std::vector<double>& values, const RunOptions& opts) {
  auto j = load_or_report(config_path);
  if (!j) return exit_code::config_error;
  return sweep(pipeline, std::move(*j), config_path.parent_path(), axis, values, opts);
}

}  // namespace dnc::cli
