#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "dnc/errors.hpp"

namespace dnc::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

/// Typed access to one JSON object with key-path error reporting.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    for (const auto& [k, v] : j_.items()) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
        throw ConfigError(join(path_, k), "unknown key");
      }
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  Reader child(const char* key) const {
    static const json empty = json::object();
    return Reader(has(key) ? j_.at(key) : empty, join(path_, key));
  }

  double number(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(join(path_, key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(join(path_, key), "must be finite");
    return d;
  }

  double positive(const char* key, double fallback) const {
    const double d = number(key, fallback);
    if (!(d > 0)) throw ConfigError(join(path_, key), "must be positive");
    return d;
  }

  int integer(const char* key, int fallback, int min) const {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(join(path_, key), "expected an integer");
    const auto i = v.get<long long>();
    if (i < min || i > std::numeric_limits<int>::max()) {
      throw ConfigError(join(path_, key), "must be an integer >= " + std::to_string(min));
    }
    return static_cast<int>(i);
  }

  std::uint64_t unsigned_integer(const char* key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw ConfigError(join(path_, key), "expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string string(const char* key, std::string fallback) const {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(join(path_, key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const char* key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(join(path_, key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!v[k].is_number()) {
        throw ConfigError(join(path_, key) + "[" + std::to_string(k) + "]", "expected a number");
      }
      out.push_back(v[k].get<double>());
    }
    return out;
  }

  std::vector<std::string> strings(const char* key, std::vector<std::string> fallback) const {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(join(path_, key), "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!v[k].is_string()) {
        throw ConfigError(join(path_, key) + "[" + std::to_string(k) + "]", "expected a string");
      }
      out.push_back(v[k].get<std::string>());
    }
    return out;
  }

  const json& raw(const char* key) const { return j_.at(key); }
  std::string path(const char* key) const { return join(path_, key); }

 private:
  const json& j_;
  std::string path_;
};

[[noreturn]] void bad_kind(const std::string& path, const std::string& kind) {
  throw ConfigError(path, "unknown kind \"" + kind + "\"");
}

CoefficientSpec parse_coefficient(const Reader& r) {
  r.allow({"kind", "alpha", "x", "values"});
  CoefficientSpec c;
  c.kind = r.string("kind", c.kind);
  if (c.kind == "power" || c.kind == "power_cosine") {
    c.alpha = r.number("alpha", c.alpha);
    if (c.alpha < 0) throw ConfigError(r.path("alpha"), "must be nonnegative");
  } else if (c.kind == "tabulated") {
    c.x = r.numbers("x", {});
    c.values = r.numbers("values", {});
    if (c.x.size() != c.values.size() || c.x.size() < 4) {
      throw ConfigError(r.path("x"), "x and values need equal length >= 4");
    }
  } else {
    bad_kind(r.path("kind"), c.kind);
  }
  return c;
}

NonlocalSpec parse_nonlocal(const Reader& r) {
  r.allow({"kind", "slope"});
  NonlocalSpec n;
  n.kind = r.string("kind", n.kind);
  if (n.kind != "constant" && n.kind != "affine" && n.kind != "tanh") bad_kind(r.path("kind"), n.kind);
  n.slope = r.number("slope", n.slope);
  return n;
}

SemilinearSpec parse_semilinear(const Reader& r) {
  r.allow({"kind", "c", "k", "r", "coeffs"});
  SemilinearSpec f;
  f.kind = r.string("kind", f.kind);
  if (f.kind == "linear") {
    f.c = r.number("c", f.c);
  } else if (f.kind == "sine") {
    f.k = r.number("k", f.k);
  } else if (f.kind == "logistic") {
    f.r = r.number("r", f.r);
  } else if (f.kind == "polynomial") {
    f.coeffs = r.numbers("coeffs", {});
    if (f.coeffs.empty()) throw ConfigError(r.path("coeffs"), "needs at least one coefficient");
  } else {
    bad_kind(r.path("kind"), f.kind);
  }
  return f;
}

InitialSpec parse_initial(const Reader& r) {
  r.allow({"kind", "epsilon", "mode"});
  InitialSpec u;
  u.kind = r.string("kind", u.kind);
  if (u.kind != "zero" && u.kind != "sine") bad_kind(r.path("kind"), u.kind);
  u.epsilon = r.number("epsilon", u.epsilon);
  u.mode = r.integer("mode", u.mode, 1);
  return u;
}

ProblemSpec parse_problem(const Reader& r) {
  r.allow({"a", "ell", "f", "omega", "T", "u0"});
  ProblemSpec p;
  p.a = parse_coefficient(r.child("a"));
  p.ell = parse_nonlocal(r.child("ell"));
  p.f = parse_semilinear(r.child("f"));
  const auto w = r.numbers("omega", {p.omega.left, p.omega.right});
  if (w.size() != 2 || !(0 < w[0] && w[0] < w[1] && w[1] < 1)) {
    throw ConfigError(r.path("omega"), "expected [left, right] with 0 < left < right < 1");
  }
  p.omega = {w[0], w[1]};
  p.T = r.positive("T", p.T);
  p.u0 = parse_initial(r.child("u0"));
  return p;
}

DiscretizationSpec parse_discretization(const Reader& r) {
  r.allow({"nx", "nt", "gamma", "scheme"});
  DiscretizationSpec d;
  d.nx = r.integer("nx", d.nx, 2);
  d.nt = r.integer("nt", d.nt, 2);
  d.gamma = r.number("gamma", d.gamma);
  if (d.gamma < 1) throw ConfigError(r.path("gamma"), "must be >= 1");
  const auto scheme = r.string("scheme", "implicit_euler");
  if (scheme == "implicit_euler") {
    d.scheme = TimeScheme::implicit_euler;
  } else if (scheme == "crank_nicolson") {
    d.scheme = TimeScheme::crank_nicolson;
  } else {
    bad_kind(r.path("scheme"), scheme);
  }
  return d;
}

CarlemanSpec parse_carleman(const Reader& r) {
  r.allow({"s", "lambda", "omega_prime_margin", "M_fraction"});
  CarlemanSpec c;
  c.s = r.positive("s", c.s);
  c.lambda = r.positive("lambda", c.lambda);
  c.omega_prime_margin = r.positive("omega_prime_margin", c.omega_prime_margin);
  if (c.omega_prime_margin >= 0.5) throw ConfigError(r.path("omega_prime_margin"), "must be < 0.5");
  c.M_fraction = r.positive("M_fraction", c.M_fraction);
  return c;
}

HumSpec parse_hum(const Reader& r) {
  r.allow({"schedule", "cg_tol", "cg_maxit", "tol_terminal", "s", "window"});
  HumSpec h;
  h.schedule = r.numbers("schedule", h.schedule);
  h.cg_tol = r.positive("cg_tol", h.cg_tol);
  h.cg_maxit = r.integer("cg_maxit", h.cg_maxit, 1);
  h.tol_terminal = r.positive("tol_terminal", h.tol_terminal);
  h.s = r.positive("s", h.s);
  h.window = r.positive("window", h.window);
  try {
    penalty_schedule(h).validate();
  } catch (const Error& e) {
    throw ConfigError(r.path("schedule"), e.what());
  }
  return h;
}

NewtonSpec parse_newton(const Reader& r) {
  r.allow({"tol", "maxit", "divergence_window"});
  NewtonSpec n;
  n.tol = r.positive("tol", n.tol);
  n.maxit = r.integer("maxit", n.maxit, 1);
  n.divergence_window = r.integer("divergence_window", n.divergence_window, 1);
  return n;
}

std::map<std::string, double> load_golden(const std::filesystem::path& path) {
  json j;
  try {
    j = read_json_file(path);
  } catch (const ConfigError& e) {
    throw ConfigError("verify.golden", e.what());
  }
  std::map<std::string, double> out;
  if (!j.is_object()) throw ConfigError("verify.golden", "expected an object of maxima");
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw ConfigError("verify.golden." + k, "expected a number");
    out[k] = v.get<double>();
  }
  return out;
}

VerifySpec parse_verify(const Reader& r, const std::filesystem::path& base_dir) {
  r.allow({"checks", "seed", "members", "hardy_members", "s_values", "plateau_max", "golden",
           "cap_factor", "caps"});
  VerifySpec v;
  v.checks = r.strings("checks", {});
  for (std::size_t k = 0; k < v.checks.size(); ++k) {
    const auto& names = known_checks();
    if (std::find(names.begin(), names.end(), v.checks[k]) == names.end()) {
      throw ConfigError(r.path("checks") + "[" + std::to_string(k) + "]",
                        "unknown check \"" + v.checks[k] + "\"");
    }
  }
  v.seed = r.unsigned_integer("seed", v.seed);
  v.members = r.integer("members", v.members, 1);
  v.hardy_members = r.integer("hardy_members", v.hardy_members, 1);
  v.s_values = r.numbers("s_values", v.s_values);
  if (v.s_values.size() < 2) throw ConfigError(r.path("s_values"), "needs at least two values");
  for (double s : v.s_values) {
    if (!(s > 0)) throw ConfigError(r.path("s_values"), "values must be positive");
  }
  v.plateau_max = r.positive("plateau_max", v.plateau_max);
  if (r.has("golden")) {
    std::filesystem::path g = r.string("golden", "");
    v.golden = g.is_relative() ? base_dir / g : g;
    v.golden_max = load_golden(*v.golden);
  }
  v.cap_factor = r.positive("cap_factor", v.cap_factor);
  const Reader caps = r.child("caps");
  if (r.has("caps")) {
    for (const auto& [k, val] : r.raw("caps").items()) {
      v.caps[k] = caps.positive(k.c_str(), 1.0);
    }
  }
  return v;
}

OutputSpec parse_output(const Reader& r) {
  r.allow({"directory", "formats"});
  OutputSpec o;
  o.directory = r.string("directory", o.directory.string());
  o.formats = r.strings("formats", o.formats);
  for (const auto& f : o.formats) {
    if (f != "csv" && f != "json") throw ConfigError(r.path("formats"), "unknown format \"" + f + "\"");
  }
  return o;
}

}  // namespace

bool ExperimentConfig::writes(const std::string& format) const {
  return std::find(output.formats.begin(), output.formats.end(), format) != output.formats.end();
}

double ExperimentConfig::cap(const std::string& check) const {
  if (auto it = verify.caps.find(check); it != verify.caps.end()) return it->second;
  if (auto it = verify.golden_max.find(check); it != verify.golden_max.end()) {
    return verify.cap_factor * it->second;
  }
  return std::numeric_limits<double>::infinity();
}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{
      "hardy",         "hardy_ensemble",     "carleman_phi", "carleman_A", "carleman_phi_sweep",
      "carleman_A_sweep", "energy",          "nonlocal_sup", "bilinear",   "claim1"};
  return names;
}

ExperimentConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  const Reader root(j, "");
  root.allow({"problem", "discretization", "carleman", "hum", "newton", "verify", "output"});
  ExperimentConfig c;
  c.problem = parse_problem(root.child("problem"));
  c.discretization = parse_discretization(root.child("discretization"));
  c.carleman = parse_carleman(root.child("carleman"));
  c.hum = parse_hum(root.child("hum"));
  c.newton = parse_newton(root.child("newton"));
  c.verify = parse_verify(root.child("verify"), base_dir);
  c.output = parse_output(root.child("output"));
  return c;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string(), e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_json_file(path), path.parent_path());
}

json to_json(const ExperimentConfig& c) {
  const auto& p = c.problem;
  json a = {{"kind", p.a.kind}};
  if (p.a.kind == "tabulated") {
    a["x"] = p.a.x;
    a["values"] = p.a.values;
  } else {
    a["alpha"] = p.a.alpha;
  }
  json f = {{"kind", p.f.kind}};
  if (p.f.kind == "linear") f["c"] = p.f.c;
  if (p.f.kind == "sine") f["k"] = p.f.k;
  if (p.f.kind == "logistic") f["r"] = p.f.r;
  if (p.f.kind == "polynomial") f["coeffs"] = p.f.coeffs;

  json verify = {{"checks", c.verify.checks},
                 {"seed", c.verify.seed},
                 {"members", c.verify.members},
                 {"hardy_members", c.verify.hardy_members},
                 {"s_values", c.verify.s_values},
                 {"plateau_max", c.verify.plateau_max},
                 {"cap_factor", c.verify.cap_factor},
                 {"caps", c.verify.caps}};
  if (c.verify.golden) verify["golden"] = std::filesystem::absolute(*c.verify.golden).string();

  return {
      {"problem",
       {{"a", a},
        {"ell", {{"kind", p.ell.kind}, {"slope", p.ell.slope}}},
        {"f", f},
        {"omega", {p.omega.left, p.omega.right}},
        {"T", p.T},
        {"u0", {{"kind", p.u0.kind}, {"epsilon", p.u0.epsilon}, {"mode", p.u0.mode}}}}},
      {"discretization",
       {{"nx", c.discretization.nx},
        {"nt", c.discretization.nt},
        {"gamma", c.discretization.gamma},
        {"scheme", c.discretization.scheme == TimeScheme::implicit_euler ? "implicit_euler"
                                                                         : "crank_nicolson"}}},
      {"carleman",
       {{"s", c.carleman.s},
        {"lambda", c.carleman.lambda},
        {"omega_prime_margin", c.carleman.omega_prime_margin},
        {"M_fraction", c.carleman.M_fraction}}},
      {"hum",
       {{"schedule", c.hum.schedule},
        {"cg_tol", c.hum.cg_tol},
        {"cg_maxit", c.hum.cg_maxit},
        {"tol_terminal", c.hum.tol_terminal},
        {"s", c.hum.s},
        {"window", c.hum.window}}},
      {"newton",
       {{"tol", c.newton.tol},
        {"maxit", c.newton.maxit},
        {"divergence_window", c.newton.divergence_window}}},
      {"verify", verify},
      {"output", {{"directory", c.output.directory.string()}, {"formats", c.output.formats}}},
  };
}

void set_scalar(json& j, const std::string& axis, double value) {
  auto locate = [&](const std::string& path) -> json* {
    json* node = &j;
    std::size_t start = 0;
    while (true) {
      const auto dot = path.find('.', start);
      const auto key = path.substr(start, dot - start);
      if (!node->is_object() || !node->contains(key)) return nullptr;
      node = &(*node)[key];
      if (dot == std::string::npos) return node;
      start = dot + 1;
    }
  };
  json* target = locate(axis);
  if (target == nullptr) target = locate("problem." + axis);
  if (target == nullptr) throw ConfigError(axis, "sweep axis not present in the config");
  if (!target->is_number()) throw ConfigError(axis, "sweep axis must name a scalar number");
  if (target->is_number_integer()) {
    if (value != std::floor(value)) throw ConfigError(axis, "integer axis needs integer values");
    *target = static_cast<long long>(value);
  } else {
    *target = value;
  }
}

DegeneracyCoefficient make_coefficient(const CoefficientSpec& spec) {
  if (spec.kind == "power") return DegeneracyCoefficient::power(spec.alpha);
  if (spec.kind == "power_cosine") return DegeneracyCoefficient::power_cosine(spec.alpha);
  return DegeneracyCoefficient::tabulated(spec.x, spec.values);
}

ProblemData make_problem(const ProblemSpec& spec, const SpaceTimeGrid& grid) {
  ProblemData pd;
  pd.a = make_coefficient(spec.a);
  if (spec.ell.kind == "affine") {
    pd.ell = NonlocalFactor::affine(spec.ell.slope);
  } else if (spec.ell.kind == "tanh") {
    pd.ell = NonlocalFactor::tanh(spec.ell.slope);
  }
  if (spec.f.kind == "linear") {
    pd.f = SemilinearTerm::linear(spec.f.c);
  } else if (spec.f.kind == "sine") {
    pd.f = SemilinearTerm::sine(spec.f.k);
  } else if (spec.f.kind == "logistic") {
    pd.f = SemilinearTerm::logistic(spec.f.r);
  } else {
    pd.f = SemilinearTerm::polynomial(spec.f.coeffs);
  }
  pd.omega = spec.omega;
  pd.T = spec.T;
  pd.u0.assign(grid.nodes(), 0.0);
  if (spec.u0.kind == "sine") {
    for (int i = 1; i < grid.nx; ++i) {
      pd.u0[i] = spec.u0.epsilon * std::sin(spec.u0.mode * std::numbers::pi * grid.x[i]);
    }
  }
  return pd;
}

SpaceTimeGrid make_grid(const ExperimentConfig& c) {
  return build_grid(c.discretization.nx, c.discretization.nt, c.problem.T, c.discretization.gamma);
}

CarlemanParams carleman_params(const ExperimentConfig& c, double s) {
  CarlemanParams p;
  p.s = s;
  p.lambda = c.carleman.lambda;
  p.M_fraction = c.carleman.M_fraction;
  p.omega_prime = default_omega_prime(c.problem.omega, c.carleman.omega_prime_margin);
  return p;
}

PenaltySchedule penalty_schedule(const HumSpec& spec) {
  PenaltySchedule p;
  p.n = spec.schedule;
  p.cg_tol = spec.cg_tol;
  p.cg_maxit = spec.cg_maxit;
  return p;
}

}  // namespace dnc::cli
