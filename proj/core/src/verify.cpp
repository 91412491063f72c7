#include "dnc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "dnc/csv.hpp"
#include "dnc/errors.hpp"
#include "dnc/random_fields.hpp"

namespace dnc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Field2D squared(const Field2D& f) {
  Field2D out = f;
  for (double& v : out.data()) v *= v;
  return out;
}

Field2D shifted(const Field2D& logw, double scale, const Field2D* extra, double extra_scale,
                double constant) {
  Field2D out = logw;
  auto& d = out.data();
  for (std::size_t k = 0; k < d.size(); ++k) {
    d[k] = scale * d[k] + constant;
    if (extra) d[k] += extra_scale * extra->data()[k];
  }
  return out;
}

// a v_x^2 at nodes: mean of the adjacent cell values a(mid) (dv/h)^2.
Field2D nodal_gradient_energy(const Field2D& v, const DegenerateOperator& op,
                              const SpaceTimeGrid& grid) {
  Field2D out = grid.make_field();
  std::vector<double> cell(grid.nx);
  for (int j = 0; j <= grid.nt; ++j) {
    for (int c = 0; c < grid.nx; ++c) {
      const double dv = v(j, c + 1) - v(j, c);
      cell[c] = op.conductance[c] * dv * dv / grid.spacing(c);
    }
    out(j, 0) = cell[0];
    out(j, grid.nx) = cell[grid.nx - 1];
    for (int i = 1; i < grid.nx; ++i) out(j, i) = 0.5 * (cell[i - 1] + cell[i]);
  }
  return out;
}

Field2D mask_window(Field2D f, const ControlWindow& omega, const SpaceTimeGrid& grid) {
  for (int j = 0; j <= grid.nt; ++j) {
    for (int i = 0; i <= grid.nx; ++i) {
      if (!omega.contains(grid.x[i])) f(j, i) = 0.0;
    }
  }
  return f;
}

}  // namespace

InequalityReport make_report(std::string name, LogScaled lhs, LogScaled rhs, double cap) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.cap = cap;
  if (lhs.is_zero()) {
    r.ratio = 0.0;
  } else if (rhs.is_zero()) {
    throw ZeroDenominator(r.name + ": right-hand side vanishes while the left-hand side does not");
  } else {
    r.ratio = ratio(lhs, rhs);
  }
  r.pass = r.ratio <= cap;
  return r;
}

double hardy_admissible_theta(const DegeneracyCoefficient& a) {
  constexpr int kSamples = 2000;
  std::vector<double> xs(kSamples), log_a(kSamples);
  for (int k = 0; k < kSamples; ++k) {
    xs[k] = std::pow(10.0, -12.0 + 12.0 * k / (kSamples - 1));
    log_a[k] = std::log(a(xs[k]));
  }
  xs.back() = 1.0;
  log_a.back() = std::log(a(1.0));
  for (int step = 1; step <= 20; ++step) {
    const double theta = 0.05 * step;
    bool ok = true;
    double prev = kInf;
    for (int k = 0; k < kSamples && ok; ++k) {
      const double v = log_a[k] - theta * std::log(xs[k]);
      if (v > prev + 1e-10 * std::max(1.0, std::abs(prev))) ok = false;
      prev = v;
    }
    if (ok) return theta;
  }
  throw AdmissibilityFail("a(x)/x^theta is not nonincreasing for any theta in (0, 1]");
}

InequalityReport hardy_poincare_ratio(const DegeneracyCoefficient& a, std::span<const double> w,
                                      const SpaceTimeGrid& grid, double cap) {
  if (w.size() != static_cast<std::size_t>(grid.nodes())) {
    throw InvalidArgument("hardy_poincare_ratio: w must have nx+1 values");
  }
  if (w[0] != 0.0) throw InvalidArgument("hardy_poincare_ratio: w(0) must vanish");
  hardy_admissible_theta(a);

  std::vector<double> integrand(grid.nodes(), 0.0);
  for (int i = 1; i <= grid.nx; ++i) {
    const double x = grid.x[i];
    integrand[i] = a(x) / (x * x) * w[i] * w[i];
  }
  const double lhs = integrate_space(integrand, grid);
  double rhs = 0.0;
  for (int c = 0; c < grid.nx; ++c) {
    const double h = grid.spacing(c);
    const double dw = w[c + 1] - w[c];
    rhs += a(grid.midpoint(c)) * dw * dw / h;
  }
  if (rhs == 0.0) throw ZeroDenominator("hardy_poincare_ratio: int a |w'|^2 vanishes");
  return make_report("hardy", LogScaled{lhs, 0.0}, LogScaled{rhs, 0.0}, cap);
}

double hardy_ensemble_max(const DegeneracyCoefficient& a, const SpaceTimeGrid& grid, int members,
                          std::uint64_t seed) {
  double best = 0.0;
  for (int k = 0; k < members; ++k) {
    const auto w = random_sine_profile(grid, member_seed(seed, k));
    best = std::max(best, hardy_poincare_ratio(a, w, grid).ratio);
  }
  return best;
}

std::string to_string(CarlemanKind kind) {
  return kind == CarlemanKind::phi_weights ? "carleman_phi" : "carleman_A";
}

InequalityReport carleman_check(CarlemanKind kind, const Field2D& F, std::span<const double> vT,
                                const LinearParabolic& sys, const WeightFields& fields,
                                const ControlWindow& omega, double cap) {
  const auto& grid = sys.grid();
  const Field2D v = sys.backward(F, vT);
  const bool phi = kind == CarlemanKind::phi_weights;
  const Field2D& expo = phi ? fields.phi : fields.A;
  const Field2D& log_w = phi ? fields.log_sigma : fields.log_vs;
  const double s = fields.s;
  const double log_sl = std::log(s * fields.lambda);

  // log W = 2 s (phi or A)
  const Field2D log_W = shifted(expo, 2.0 * s, nullptr, 0.0, 0.0);
  const Field2D v2 = squared(v);

  const LogScaled grad_term = integrate_spacetime_logweight(
      shifted(log_W, 1.0, &log_w, 1.0, log_sl), nodal_gradient_energy(v, sys.op(), grid), grid);
  const LogScaled mass_term =
      integrate_spacetime_logweight(shifted(log_W, 1.0, &log_w, 2.0, 2.0 * log_sl), v2, grid);
  const LogScaled source_term = integrate_spacetime_logweight(log_W, squared(F), grid);
  const LogScaled observation = integrate_spacetime_logweight(
      shifted(log_W, 1.0, &log_w, 3.0, 3.0 * log_sl), mask_window(v2, omega, grid), grid);

  auto r = make_report(to_string(kind), grad_term + mass_term, source_term + observation, cap);
  r.s = s;
  r.lambda = fields.lambda;
  return r;
}

std::vector<InequalityReport> carleman_ensemble(CarlemanKind kind, const LinearParabolic& sys,
                                                const WeightFields& fields,
                                                const ControlWindow& omega, int members,
                                                std::uint64_t seed, double cap) {
  std::vector<InequalityReport> out;
  const auto& grid = sys.grid();
  for (int k = 0; k < members; ++k) {
    const std::uint64_t sf = member_seed(seed, 2 * k);
    const Field2D F = random_sine_field(grid, sf);
    const auto vT = random_sine_profile(grid, member_seed(seed, 2 * k + 1));
    auto r = carleman_check(kind, F, vT, sys, fields, omega, cap);
    r.seed = sf;
    out.push_back(std::move(r));
  }
  return out;
}

SweepReport carleman_s_sweep(CarlemanKind kind, const CarlemanParams& base,
                             const DegeneracyCoefficient& a, const LinearParabolic& sys,
                             const ControlWindow& omega, const std::vector<double>& s_values,
                             int members, std::uint64_t seed) {
  if (s_values.size() < 2) throw InvalidArgument("carleman_s_sweep: need at least two s values");
  SweepReport rep;
  for (double s : s_values) {
    CarlemanParams p = base;
    p.s = s;
    p.M.reset();
    const WeightFields fields = build_weight_fields(p, a, sys.grid());
    double best = 0.0;
    for (const auto& r : carleman_ensemble(kind, sys, fields, omega, members, seed)) {
      best = std::max(best, r.ratio);
    }
    rep.s.push_back(s);
    rep.max_ratio.push_back(best);
  }
  const std::size_t m = rep.max_ratio.size();
  rep.final_over_penultimate = rep.max_ratio[m - 1] / rep.max_ratio[m - 2];
  bool growing = true;
  for (std::size_t k = 1; k < m; ++k) growing = growing && rep.max_ratio[k] > rep.max_ratio[k - 1];
  rep.plateau = !growing;
  return rep;
}

LogScaled e_norm(const Field2D& u, const Field2D& h, const WeightFields& fields,
                 const DegenerateOperator& op, const ControlWindow& omega,
                 const SpaceTimeGrid& grid) {
  for (double v : u.data()) {
    if (std::isnan(v)) throw InvalidArgument("e_norm: NaN in state");
  }
  for (double v : h.data()) {
    if (std::isnan(v)) throw InvalidArgument("e_norm: NaN in control");
  }
  const Field2D log_rho0_sq = shifted(fields.log_rho0, 2.0, nullptr, 0.0, 0.0);
  const Field2D log_rhostar_sq = shifted(fields.log_rhostar, 2.0, nullptr, 0.0, 0.0);

  Field2D residual = grid.make_field();
  std::vector<double> Lu(grid.nodes());
  for (int j = 1; j <= grid.nt; ++j) {
    op.apply(u.row(j), Lu);
    for (int i = 1; i < grid.nx; ++i) {
      const double control = omega.contains(grid.x[i]) ? h(j, i) : 0.0;
      const double r = (u(j, i) - u(j - 1, i)) / grid.dt - Lu[i] - control;
      residual(j, i) = r * r;
    }
  }

  LogScaled total = integrate_spacetime_logweight(log_rho0_sq, squared(u), grid);
  total = total + integrate_spacetime_logweight(log_rhostar_sq,
                                                mask_window(squared(h), omega, grid), grid);
  total = total + integrate_spacetime_logweight(log_rho0_sq, residual, grid);
  const double initial = h1a_norm_sq(u.row(0), op, grid);
  if (initial > 0.0) total = total + LogScaled{initial, 0.0};
  return total;
}

InequalityReport nonlocal_sup_bound(const Field2D& u, const Field2D& h, const WeightFields& fields,
                                    const DegenerateOperator& op, const ControlWindow& omega,
                                    const SpaceTimeGrid& grid, double cap) {
  double best = -kInf;
  for (int j = 0; j < grid.nt; ++j) {
    const double r = integrate_space(u.row(j), grid);
    if (r == 0.0) continue;
    best = std::max(best, -2.0 * fields.M / fields.m[j] + 2.0 * std::log(std::abs(r)));
  }
  auto rep = make_report("nonlocal_sup", LogScaled::from_log(best),
                         e_norm(u, h, fields, op, omega, grid), cap);
  rep.s = fields.s;
  rep.lambda = fields.lambda;
  return rep;
}

double claim1_witness(const WeightFields& fields, const SpaceTimeGrid& grid) {
  double best = -kInf;
  for (int j = 1; j < grid.nt; ++j) {
    const auto row = fields.log_rhostar.row(j);
    const double lo = *std::min_element(row.begin(), row.end());
    best = std::max(best, -2.0 * fields.M / fields.m[j] - 2.0 * lo);
  }
  return best;
}

InequalityReport bilinear_bound_check(const Field2D& u, const Field2D& h, const Field2D& ub,
                                      const Field2D& hb, const WeightFields& fields,
                                      const DegenerateOperator& op, const ControlWindow& omega,
                                      const SpaceTimeGrid& grid, double cap) {
  Field2D integrand = grid.make_field();
  std::vector<double> Lu(grid.nodes());
  for (int j = 0; j <= grid.nt; ++j) {
    const double r = integrate_space(ub.row(j), grid);
    op.apply(u.row(j), Lu);
    for (int i = 1; i < grid.nx; ++i) integrand(j, i) = r * r * Lu[i] * Lu[i];
  }
  const LogScaled lhs = integrate_spacetime_logweight(
      shifted(fields.log_rho0, 2.0, nullptr, 0.0, 0.0), integrand, grid);
  const LogScaled rhs =
      e_norm(u, h, fields, op, omega, grid) * e_norm(ub, hb, fields, op, omega, grid);
  auto rep = make_report("bilinear", lhs, rhs, cap);
  rep.s = fields.s;
  rep.lambda = fields.lambda;
  return rep;
}

InequalityReport energy_estimate_ratio(const LinearParabolic& sys, std::span<const double> u0,
                                       const Field2D& F, double cap) {
  const auto& grid = sys.grid();
  const auto& op = sys.op();
  const Field2D u = sys.forward(F, u0);

  double sup_energy = 0.0;
  double dt_term = 0.0;
  double op_term = 0.0;
  std::vector<double> Lu(grid.nodes()), du(grid.nodes());
  for (int j = 0; j <= grid.nt; ++j) {
    sup_energy = std::max(sup_energy, h1a_norm_sq(u.row(j), op, grid));
    if (j == 0) continue;
    op.apply(u.row(j), Lu);
    for (int i = 0; i <= grid.nx; ++i) du[i] = (u(j, i) - u(j - 1, i)) / grid.dt;
    const double a = l2_norm(du, grid);
    const double b = l2_norm(Lu, grid);
    dt_term += grid.dt * a * a;
    op_term += grid.dt * b * b;
  }
  const double lhs = sup_energy + dt_term + op_term;
  const double rhs = h1a_norm_sq(u0, op, grid) + integrate_spacetime(squared(F), grid);
  return make_report("energy", lhs > 0.0 ? LogScaled{lhs, 0.0} : LogScaled{},
                     rhs > 0.0 ? LogScaled{rhs, 0.0} : LogScaled{}, cap);
}

double energy_ensemble_max(const LinearParabolic& sys, int members, std::uint64_t seed) {
  double best = 0.0;
  for (int k = 0; k < members; ++k) {
    const auto u0 = random_sine_profile(sys.grid(), member_seed(seed, 2 * k));
    const Field2D F = random_sine_field(sys.grid(), member_seed(seed, 2 * k + 1));
    best = std::max(best, energy_estimate_ratio(sys, u0, F).ratio);
  }
  return best;
}

void write_verify_csv(std::ostream& os, const std::vector<InequalityReport>& reports) {
  CsvWriter csv(os, {"check_name", "s", "lambda", "n", "seed", "lhs_log", "rhs_log", "ratio",
                     "pass"});
  for (const auto& r : reports) {
    csv.field(r.name)
        .field(r.s)
        .field(r.lambda)
        .field(r.n)
        .field(static_cast<unsigned long long>(r.seed))
        .field(r.lhs.log_value())
        .field(r.rhs.log_value())
        .field(r.ratio)
        .field(r.pass ? "true" : "false");
    csv.end_row();
  }
}

}  // namespace dnc
