// dnc: configuration-driven runner for the degenerate null-control solvers.

#include <charconv>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "runner/runner.hpp"

namespace {

using dnc::cli::Pipeline;

/// Comma-separated list of reals; nullopt on a malformed entry.
std::optional<std::vector<double>> parse_values(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(start, end - start);
    std::erase_if(item, [](char c) { return c == ' ' || c == '[' || c == ']'; });
    if (!item.empty()) {
      double v = 0.0;
      const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
      if (res.ec != std::errc{} || res.ptr != item.data() + item.size()) return std::nullopt;
      out.push_back(v);
    }
    start = end + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Null controllability experiments for degenerate nonlocal parabolic equations"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool quiet = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "JSON experiment config")->required();
    sub->add_option("--out", out, "Output directory (overrides config and DNC_OUT_DIR)");
    sub->add_option("--seed", seed, "Seed overriding verify.seed");
    sub->add_option("--jobs", jobs, "Parallel sweep points")->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", quiet, "Suppress the status line");
  };

  std::vector<std::pair<CLI::App*, Pipeline>> runs;
  for (auto [name, p, help] : {
           std::tuple{"solve-forward", Pipeline::solve_forward, "Uncontrolled forward solve"},
           std::tuple{"null-control", Pipeline::null_control, "Linear penalized null control"},
           std::tuple{"null-control-nonlinear", Pipeline::null_control_nonlinear,
                      "Newton iteration for the nonlinear problem"},
           std::tuple{"verify", Pipeline::verify, "Inequality and estimate checks"}}) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub);
    runs.emplace_back(sub, p);
  }

  std::string axis;
  std::string values;
  std::string pipeline = "verify";
  auto* sweep = app.add_subcommand("sweep", "Run a pipeline over values of one config key");
  add_common(sweep);
  sweep->add_option("--axis", axis, "Dotted scalar config key, e.g. carleman.s")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--pipeline", pipeline, "Pipeline run at every point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dnc::cli::exit_code::config_error;
  }

  dnc::cli::RunOptions opts;
  opts.out_dir = out;
  if (sweep->count("--seed") > 0 || std::any_of(runs.begin(), runs.end(), [](const auto& r) {
        return r.first->count("--seed") > 0;
      })) {
    opts.seed = seed;
  }
  opts.jobs = jobs;
  opts.quiet = quiet;

  for (const auto& [sub, p] : runs) {
    if (sub->parsed()) return dnc::cli::run_file(p, config, opts);
  }

  const auto p = dnc::cli::parse_pipeline(pipeline);
  if (!p) {
    std::cerr << "dnc sweep: unknown pipeline \"" << pipeline << "\"\n";
    return dnc::cli::exit_code::config_error;
  }
  const auto parsed = parse_values(values);
  if (!parsed) {
    std::cerr << "dnc sweep: --values must be a comma-separated list of numbers\n";
    return dnc::cli::exit_code::config_error;
  }
  return dnc::cli::sweep_file(*p, config, axis, *parsed, opts);
}
