#include "dnc/hum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "dnc/csv.hpp"
#include "dnc/errors.hpp"

namespace dnc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// sum_{j=1..nt} dt sum_i dx_i w a b over all nodes.
double state_dot(const Field2D& w, const Field2D& a, const Field2D& b,
                 const SpaceTimeGrid& grid) {
  double sum = 0.0;
  for (int j = 1; j <= grid.nt; ++j) {
    double row = 0.0;
    for (int i = 1; i < grid.nx; ++i) row += grid.node_weight[i] * w(j, i) * a(j, i) * b(j, i);
    sum += row;
  }
  return sum * grid.dt;
}

void check_finite(const Field2D& f, const char* what) {
  for (double v : f.data()) {
    if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + ": non-finite entry");
  }
}

}  // namespace

PenaltySchedule PenaltySchedule::decades(int k_max) {
  PenaltySchedule s;
  s.n.clear();
  for (int k = 0; k <= k_max; ++k) s.n.push_back(std::pow(10.0, k));
  return s;
}

void PenaltySchedule::validate() const {
  if (n.empty()) throw InvalidArgument("penalty schedule is empty");
  if (!(n.front() >= 1.0)) throw InvalidArgument("penalty schedule must start at n >= 1");
  for (std::size_t k = 1; k < n.size(); ++k) {
    if (!(n[k] > n[k - 1])) throw InvalidArgument("penalty schedule must be strictly increasing");
  }
  if (!(cg_tol > 0.0)) throw InvalidArgument("cg_tol must be positive");
  if (cg_maxit < 1) throw InvalidArgument("cg_maxit must be >= 1");
}

ControlWeights build_control_weights(const WeightFields& fields, const ControlWindow& omega,
                                     const SpaceTimeGrid& grid, double window) {
  if (!fields.has_truncation()) {
    throw InvalidArgument("build_control_weights: truncated weights have not been built");
  }
  if (!(window > 0.0)) throw InvalidArgument("log-weight window must be positive");
  ControlWeights w;
  w.n = fields.n;
  w.window = window;
  w.support = window_nodes(omega, grid);
  if (w.support.empty()) throw InvalidArgument("control window contains no grid nodes");

  double ref = kInf;
  for (int j = 1; j <= grid.nt; ++j) {
    for (int i : w.support) {
      const double v = fields.log_rhostar_n(j, i);
      if (std::isfinite(v)) ref = std::min(ref, v);
    }
  }
  if (!std::isfinite(ref)) throw SolverError("control weight is infinite on the whole support");
  w.log_ref = ref;

  std::size_t clipped = 0, total = 0;
  w.state = grid.make_field();
  w.control = grid.make_field();
  for (int j = 1; j <= grid.nt; ++j) {
    for (int i = 1; i < grid.nx; ++i) {
      const double e = fields.log_rho0_n(j, i) - ref;
      clipped += e > window;
      ++total;
      w.state(j, i) = std::exp(2.0 * std::min(e, window));
    }
    for (int i : w.support) {
      const double e = fields.log_rhostar_n(j, i) - ref;
      clipped += e > window;
      ++total;
      w.control(j, i) = std::exp(2.0 * std::min(e, window));
    }
  }
  w.clipped_fraction = static_cast<double>(clipped) / static_cast<double>(total);
  return w;
}

LogScaled eval_Jn(const Field2D& u, const Field2D& h, const ControlWeights& w,
                  const SpaceTimeGrid& grid) {
  check_finite(u, "eval_Jn");
  check_finite(h, "eval_Jn");
  const double value = 0.5 * (state_dot(w.state, u, u, grid) + state_dot(w.control, h, h, grid));
  if (value == 0.0) return {};
  return {value, 2.0 * w.log_ref};
}

WeightedNorms weighted_norms(const Field2D& u, const Field2D& h, const ControlWeights& w,
                             const SpaceTimeGrid& grid) {
  auto as_log = [&](double v) { return v > 0.0 ? std::log(v) + 2.0 * w.log_ref : -kInf; };
  return {as_log(state_dot(w.control, h, h, grid)), as_log(state_dot(w.state, u, u, grid))};
}

ControlProblem::ControlProblem(const LinearParabolic& sys, const ControlWindow& omega, Field2D g,
                               std::vector<double> u0)
    : sys_(sys), support_(window_nodes(omega, sys.grid())), g_(std::move(g)), u0_(std::move(u0)) {
  const auto& grid = sys_.grid();
  if (g_.rows() != grid.times() || g_.cols() != grid.nodes()) {
    throw InvalidArgument("ControlProblem: source shape does not match the grid");
  }
  if (u0_.size() != static_cast<std::size_t>(grid.nodes())) {
    throw InvalidArgument("ControlProblem: u0 must have nx+1 values");
  }
  if (support_.empty()) throw InvalidArgument("control window contains no grid nodes");
}

Field2D ControlProblem::state(const Field2D& h) const {
  Field2D source = g_;
  for (int j = 1; j <= grid().nt; ++j) {
    for (int i : support_) source(j, i) += h(j, i);
  }
  return sys_.forward(source, u0_);
}

Field2D ControlProblem::control_to_state(const Field2D& h) const {
  Field2D source = grid().make_field();
  for (int j = 1; j <= grid().nt; ++j) {
    for (int i : support_) source(j, i) = h(j, i);
  }
  const std::vector<double> zero(grid().nodes(), 0.0);
  return sys_.forward(source, zero);
}

Field2D ControlProblem::state_to_control(const Field2D& q) const {
  const Field2D sens = sys_.source_sensitivity(sys_.adjoint(q));
  Field2D out = grid().make_field();
  for (int j = 1; j <= grid().nt; ++j) {
    for (int i : support_) out(j, i) = sens(j, i);
  }
  return out;
}

double ControlProblem::control_dot(const Field2D& a, const Field2D& b) const {
  double sum = 0.0;
  const auto& grid = this->grid();
  for (int j = 1; j <= grid.nt; ++j) {
    for (int i : support_) sum += grid.node_weight[i] * a(j, i) * b(j, i);
  }
  return sum * grid.dt;
}

double ControlProblem::control_norm(const Field2D& a) const {
  return std::sqrt(control_dot(a, a));
}

namespace {

Field2D weighted(const Field2D& w, const Field2D& u) {
  Field2D out = u;
  auto& d = out.data();
  const auto& wd = w.data();
  for (std::size_t k = 0; k < d.size(); ++k) d[k] *= wd[k];
  return out;
}

// Adds R h on the support to g in place.
void add_control_mass(Field2D& g, const Field2D& h, const ControlWeights& w,
                      const SpaceTimeGrid& grid) {
  for (int j = 1; j <= grid.nt; ++j) {
    for (int i : w.support) g(j, i) += w.control(j, i) * h(j, i);
  }
}

Field2D hessian_apply(const ControlProblem& problem, const ControlWeights& w, const Field2D& p) {
  Field2D out = problem.state_to_control(weighted(w.state, problem.control_to_state(p)));
  add_control_mass(out, p, w, problem.grid());
  return out;
}

void axpy(Field2D& y, double alpha, const Field2D& x, const std::vector<int>& support, int nt) {
  for (int j = 1; j <= nt; ++j) {
    for (int i : support) y(j, i) += alpha * x(j, i);
  }
}

}  // namespace

Field2D grad_Jn(const ControlProblem& problem, const Field2D& h, const ControlWeights& w) {
  const Field2D u = problem.state(h);
  Field2D g = problem.state_to_control(weighted(w.state, u));
  add_control_mass(g, h, w, problem.grid());
  return g;
}

MinimizeResult minimize_Jn(const ControlProblem& problem, const ControlWeights& w,
                           const Field2D& h_init, double tol, int maxit) {
  const auto& grid = problem.grid();
  const auto& support = problem.support();
  const int nt = grid.nt;
  check_finite(h_init, "minimize_Jn");

  const Field2D zero = grid.make_field();
  const Field2D u_part = problem.state(zero);
  const double c0 = 0.5 * state_dot(w.state, u_part, u_part, grid);
  Field2D b = problem.state_to_control(weighted(w.state, u_part));
  b *= -1.0;
  const double b_norm = problem.control_norm(b);

  MinimizeResult res;
  if (b_norm == 0.0) {
    res.h = zero;
    res.u = u_part;
    res.converged = true;
    res.J_history = {c0};
    return res;
  }

  Field2D h = grid.make_field();
  for (int j = 1; j <= nt; ++j) {
    for (int i : support) h(j, i) = h_init(j, i);
  }
  Field2D r = grad_Jn(problem, h, w);
  r *= -1.0;

  auto precondition = [&](const Field2D& v) {
    Field2D z = grid.make_field();
    for (int j = 1; j <= nt; ++j) {
      for (int i : support) z(j, i) = v(j, i) / w.control(j, i);
    }
    return z;
  };

  auto J_of = [&]() {
    Field2D br = b;
    br += r;
    return c0 - 0.5 * problem.control_dot(br, h);
  };

  Field2D z = precondition(r);
  Field2D p = z;
  double rz = problem.control_dot(r, z);
  res.J_history.push_back(J_of());

  // Stop once the residual is small against both the initial gradient and
  // the control term R h it must balance at the optimum.
  auto small = [&]() {
    const double rn = problem.control_norm(r);
    if (rn > tol * b_norm) return false;
    Field2D Rh = grid.make_field();
    for (int j = 1; j <= nt; ++j) {
      for (int i : support) Rh(j, i) = w.control(j, i) * h(j, i);
    }
    return rn <= tol * problem.control_norm(Rh);
  };

  int it = 0;
  bool converged = small();
  while (!converged && it < maxit) {
    const Field2D Hp = hessian_apply(problem, w, p);
    const double pHp = problem.control_dot(p, Hp);
    if (!(pHp > 0.0)) break;
    const double alpha = rz / pHp;
    axpy(h, alpha, p, support, nt);
    axpy(r, -alpha, Hp, support, nt);
    ++it;
    res.J_history.push_back(J_of());
    if (small()) {
      converged = true;
      break;
    }
    z = precondition(r);
    const double rz_new = problem.control_dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int j = 1; j <= nt; ++j) {
      for (int i : support) p(j, i) = z(j, i) + beta * p(j, i);
    }
  }

  res.u = problem.state(h);
  Field2D g = problem.state_to_control(weighted(w.state, res.u));
  add_control_mass(g, h, w, grid);
  res.relative_residual = problem.control_norm(g) / b_norm;
  res.h = std::move(h);
  res.iterations = it;
  res.converged = converged;
  return res;
}

NullControlResult solve_null_control(const ControlProblem& problem, const WeightFields& fields,
                                     const ControlWindow& omega, const PenaltySchedule& schedule,
                                     const HumOptions& opts, const Field2D* h_init) {
  schedule.validate();
  const auto& grid = problem.grid();
  const int nt = grid.nt;

  Field2D g_sq = problem.g();
  for (double& v : g_sq.data()) {
    if (!std::isfinite(v)) throw SourceWeightDivergence("source g has non-finite entries");
    v *= v;
  }
  Field2D log_w = fields.log_rho0;
  log_w *= 2.0;
  const LogScaled g_weight = integrate_spacetime_logweight(log_w, g_sq, grid);
  if (!g_weight.is_finite() && !g_weight.is_zero()) {
    throw SourceWeightDivergence("weighted source norm int rho_0^2 g^2 is not finite");
  }

  NullControlResult out;
  const Field2D u_free = problem.state(grid.make_field());
  out.free_terminal_norm = l2_norm(u_free.row(nt), grid);
  out.u0_norm = l2_norm(problem.u0(), grid);

  Field2D h = h_init ? *h_init : grid.make_field();
  WeightFields stage_fields = fields;
  for (double n : schedule.n) {
    build_truncated_fields(stage_fields, n, omega, grid);
    ControlWeights w = build_control_weights(stage_fields, omega, grid, opts.log_weight_window);
    MinimizeResult mr = minimize_Jn(problem, w, h, schedule.cg_tol, schedule.cg_maxit);

    StageReport rep;
    rep.n = n;
    rep.cg_iters = mr.iterations;
    rep.converged = mr.converged;
    rep.Jn = eval_Jn(mr.u, mr.h, w, grid);
    rep.terminal_norm = l2_norm(mr.u.row(nt), grid);
    rep.norms = weighted_norms(mr.u, mr.h, w, grid);
    rep.clipped_fraction = w.clipped_fraction;
    if (!out.stages.empty() &&
        rep.terminal_norm > 1.05 * out.stages.back().terminal_norm) {
      out.terminal_monotone = false;
    }
    out.all_stages_converged = out.all_stages_converged && mr.converged;
    out.stages.push_back(rep);

    h = std::move(mr.h);
    out.u = std::move(mr.u);
    out.final_weights = std::move(w);
  }
  out.h = std::move(h);
  out.terminal_norm = out.stages.back().terminal_norm;
  out.norms = out.stages.back().norms;
  const double reference = out.u0_norm > 0.0 ? out.u0_norm : out.free_terminal_norm;
  out.success = out.terminal_norm <= opts.tol_terminal * reference;
  return out;
}

void write_stages_csv(std::ostream& os, const std::vector<StageReport>& stages) {
  CsvWriter csv(os, {"n", "cg_iters", "Jn_mantissa", "Jn_logscale", "terminal_norm",
                     "ctrl_weighted_norm_log", "state_weighted_norm_log"});
  for (const auto& s : stages) {
    csv.field(s.n)
        .field(s.cg_iters)
        .field(s.Jn.mantissa)
        .field(s.Jn.log_scale)
        .field(s.terminal_norm)
        .field(s.norms.control_log)
        .field(s.norms.state_log);
    csv.end_row();
  }
}

}  // namespace dnc
