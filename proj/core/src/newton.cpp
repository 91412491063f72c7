#include "dnc/newton.hpp"

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

// log ||rho_0 v|| under the clipped state weight W = rho_0^2 e^{-2L}.
double weighted_log_norm(const Field2D& v, const ControlWeights& w, const SpaceTimeGrid& grid) {
  double sum = 0.0;
  for (int j = 1; j <= grid.nt; ++j) {
    double row = 0.0;
    for (int i = 1; i < grid.nx; ++i) row += grid.node_weight[i] * w.state(j, i) * v(j, i) * v(j, i);
    sum += row;
  }
  sum *= grid.dt;
  if (sum == 0.0) return -kInf;
  return 0.5 * std::log(sum) + w.log_ref;
}

bool all_finite(const Field2D& f) {
  for (double v : f.data()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

Field2D residual_source(const Field2D& u, const ProblemData& pd, const DegenerateOperator& op,
                        const SpaceTimeGrid& grid) {
  if (u.rows() != grid.times() || u.cols() != grid.nodes()) {
    throw InvalidArgument("residual_source: trajectory shape does not match the grid");
  }
  Field2D g = grid.make_field();
  std::vector<double> Lu(grid.nodes());
  for (int j = 0; j <= grid.nt; ++j) {
    const auto uj = u.row(j);
    const double t = grid.t[j];
    const double ell_minus_one = pd.ell(integrate_space(uj, grid)) - 1.0;
    if (ell_minus_one != 0.0) op.apply(uj, Lu);
    for (int i = 1; i < grid.nx; ++i) {
      const double x = grid.x[i];
      const double nonlinear = pd.f.value(t, x, uj[i]) - pd.f.du(t, x, 0.0) * uj[i];
      g(j, i) = -nonlinear + (ell_minus_one != 0.0 ? ell_minus_one * Lu[i] : 0.0);
    }
  }
  return g;
}

NewtonResult local_null_control(const ProblemData& pd, const LinearParabolic& sys,
                                const WeightFields& fields, const PenaltySchedule& schedule,
                                const HumOptions& hum, const NewtonOptions& opts) {
  if (!(opts.tol > 0.0) || opts.maxit < 1 || opts.divergence_window < 1) {
    throw InvalidArgument("Newton options: need tol > 0, maxit >= 1, divergence_window >= 1");
  }
  const auto& grid = sys.grid();
  const int nt = grid.nt;

  NewtonResult out;
  out.u0_norm = l2_norm(pd.u0, grid);
  Field2D u = grid.make_field();
  Field2D h = grid.make_field();
  Field2D g = residual_source(u, pd, sys.op(), grid);

  double prev_increment = kInf;
  int growth = 0;
  for (int k = 0; k < opts.maxit; ++k) {
    NullControlResult res;
    try {
      const ControlProblem problem(sys, pd.omega, g, pd.u0);
      res = solve_null_control(problem, fields, pd.omega, schedule, hum, k > 0 ? &h : nullptr);
    } catch (const SourceWeightDivergence& e) {
      throw NewtonDivergence(std::string("residual source left the weighted space: ") + e.what());
    }
    Field2D g_next = residual_source(res.u, pd, sys.op(), grid);
    if (!all_finite(res.u) || !all_finite(g_next)) {
      throw NewtonDivergence("non-finite iterate at Newton step " + std::to_string(k));
    }

    Field2D delta = g_next;
    delta -= g;
    NewtonState st;
    st.k = k;
    st.increment_log = weighted_log_norm(delta, res.final_weights, grid);
    st.residual_log = weighted_log_norm(g_next, res.final_weights, grid);
    st.terminal_norm_linear = res.terminal_norm;
    for (const auto& s : res.stages) st.cg_iters += s.cg_iters;
    const double increment = std::exp(st.increment_log);
    if (std::isnan(st.increment_log) || st.increment_log == kInf) {
      throw NewtonDivergence("non-finite Newton increment at step " + std::to_string(k));
    }
    st.contraction = k == 0 ? 0.0 : std::exp(st.increment_log - out.history.back().increment_log);
    out.history.push_back(st);

    u = std::move(res.u);
    h = std::move(res.h);
    g = std::move(g_next);
    out.iterations = k + 1;

    if (st.increment_log == -kInf || st.increment_log <= std::log(opts.tol) + st.residual_log) {
      out.converged = true;
      break;
    }
    growth = increment > prev_increment ? growth + 1 : 0;
    if (growth >= opts.divergence_window) {
      throw NewtonDivergence("Newton increments grew " + std::to_string(growth) +
                             " times in a row; initial datum outside the convergence basin");
    }
    prev_increment = increment;
  }

  out.u_replay = forward_solve_nonlinear(pd, h, grid, opts.replay);
  const Field2D u_free = forward_solve_nonlinear(pd, grid.make_field(), grid, opts.replay);
  out.terminal_norm_replay = l2_norm(out.u_replay.row(nt), grid);
  out.free_terminal_norm_nonlinear = l2_norm(u_free.row(nt), grid);
  double gap = 0.0;
  for (std::size_t k = 0; k < u.data().size(); ++k) {
    gap = std::max(gap, std::abs(out.u_replay.data()[k] - u.data()[k]));
  }
  out.replay_gap = gap;
  out.u = std::move(u);
  out.h = std::move(h);
  return out;
}

void write_newton_csv(std::ostream& os, const NewtonResult& result) {
  CsvWriter csv(os, {"k", "residual_log", "terminal_norm_linear", "terminal_norm_nonlinear_replay"});
  for (std::size_t k = 0; k < result.history.size(); ++k) {
    const auto& st = result.history[k];
    const bool last = k + 1 == result.history.size();
    csv.field(st.k)
        .field(st.residual_log)
        .field(st.terminal_norm_linear)
        .field(last ? result.terminal_norm_replay : std::numeric_limits<double>::quiet_NaN());
    csv.end_row();
  }
}

}  // namespace dnc
