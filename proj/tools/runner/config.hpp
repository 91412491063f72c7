#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dnc/coeffs.hpp"
#include "dnc/hum.hpp"
#include "dnc/newton.hpp"
#include "dnc/pde1d.hpp"
#include "dnc/weights.hpp"

namespace dnc::cli {

/// Invalid configuration; `key()` is the dotted path of the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

struct CoefficientSpec {
  std::string kind = "power";
  double alpha = 0.5;
  std::vector<double> x;
  std::vector<double> values;
};

struct NonlocalSpec {
  std::string kind = "constant";
  double slope = 0.0;
};

struct SemilinearSpec {
  std::string kind = "linear";
  double c = 1.0;
  double k = 1.0;
  double r = 1.0;
  std::vector<double> coeffs;
};

struct InitialSpec {
  std::string kind = "sine";
  double epsilon = 1.0;
  int mode = 1;
};

struct ProblemSpec {
  CoefficientSpec a;
  NonlocalSpec ell;
  SemilinearSpec f;
  ControlWindow omega;
  double T = 1.0;
  InitialSpec u0;
};

struct DiscretizationSpec {
  int nx = 64;
  int nt = 64;
  double gamma = 2.0;
  TimeScheme scheme = TimeScheme::implicit_euler;
};

struct CarlemanSpec {
  double s = 1.0;
  double lambda = 2.0;
  double omega_prime_margin = 0.25;
  double M_fraction = 0.5;
};

struct HumSpec {
  std::vector<double> schedule{1e0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
  double cg_tol = 1e-8;
  int cg_maxit = 500;
  double tol_terminal = 1e-2;
  /// Carleman parameter of the control weights.
  double s = 0.01;
  double window = 8.0;
};

struct NewtonSpec {
  double tol = 1e-6;
  int maxit = 25;
  int divergence_window = 3;
};

struct VerifySpec {
  std::vector<std::string> checks;
  std::uint64_t seed = 1;
  int members = 20;
  int hardy_members = 100;
  std::vector<double> s_values{1.0, 2.0, 4.0, 8.0};
  double plateau_max = 1.2;
  /// Golden maxima file; caps default to cap_factor times its entries.
  std::optional<std::filesystem::path> golden;
  std::map<std::string, double> golden_max;
  double cap_factor = 10.0;
  std::map<std::string, double> caps;
};

struct OutputSpec {
  std::filesystem::path directory = "out";
  std::vector<std::string> formats{"csv", "json"};
};

struct ExperimentConfig {
  ProblemSpec problem;
  DiscretizationSpec discretization;
  CarlemanSpec carleman;
  HumSpec hum;
  NewtonSpec newton;
  VerifySpec verify;
  OutputSpec output;

  bool writes(const std::string& format) const;
  /// Cap for a named check: explicit caps first, then the golden file.
  double cap(const std::string& check) const;
};

/// Every check name the verify pipeline understands.
const std::vector<std::string>& known_checks();

/// Parses and range-checks a configuration. Relative golden paths resolve
/// against `base_dir`.
ExperimentConfig parse_config(const nlohmann::json& j,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Canonical form with every default filled in.
nlohmann::json to_json(const ExperimentConfig& config);

/// Sets the scalar at a dotted key path. Paths missing at the top level are
/// retried under "problem." so "u0.epsilon" addresses problem.u0.epsilon.
void set_scalar(nlohmann::json& j, const std::string& axis, double value);

/// Problem data on a grid; u0 is sampled from the initial-datum spec.
ProblemData make_problem(const ProblemSpec& spec, const SpaceTimeGrid& grid);
DegeneracyCoefficient make_coefficient(const CoefficientSpec& spec);
SpaceTimeGrid make_grid(const ExperimentConfig& config);
CarlemanParams carleman_params(const ExperimentConfig& config, double s);
PenaltySchedule penalty_schedule(const HumSpec& spec);

}  // namespace dnc::cli
