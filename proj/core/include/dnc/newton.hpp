#pragma once

#include <iosfwd>
#include <vector>

#include "dnc/coeffs.hpp"
#include "dnc/hum.hpp"
#include "dnc/pde1d.hpp"
#include "dnc/weights.hpp"

namespace dnc {

/// g(u) = (l(int u) - 1) L u - (f(t,x,u) - c u).
///
/// The linear problem u_t - L u + c u = h chi_omega + g(u) coincides with
/// the nonlinear equation, so a fixed point of the linear control solve
/// against g is a controlled nonlinear state.
Field2D residual_source(const Field2D& u, const ProblemData& pd, const DegenerateOperator& op,
                        const SpaceTimeGrid& grid);

struct NewtonOptions {
  double tol = 1e-6;
  int maxit = 25;
  /// Consecutive growing increments that count as divergence.
  int divergence_window = 3;
  NonlinearOptions replay;
};

struct NewtonState {
  int k = 0;
  /// log of the rho_0-weighted increment norm ||rho_0 (g^{k+1} - g^k)||.
  double increment_log = 0.0;
  /// log of ||rho_0 g^{k+1}||.
  double residual_log = 0.0;
  /// increment_k / increment_{k-1}; 0 for the first iteration.
  double contraction = 0.0;
  double terminal_norm_linear = 0.0;
  int cg_iters = 0;
};

struct NewtonResult {
  Field2D h;
  Field2D u;
  Field2D u_replay;
  std::vector<NewtonState> history;
  bool converged = false;
  int iterations = 0;
  double terminal_norm_replay = 0.0;
  double free_terminal_norm_nonlinear = 0.0;
  double u0_norm = 0.0;
  /// max |u_replay - u| over the grid.
  double replay_gap = 0.0;
};

/// Simplified Newton iteration: (u^{k+1}, h^{k+1}) solves the linear null
/// control problem with source g(u^k), starting from (0, 0). The linear
/// system must carry c = df/du(t,x,0). Throws NewtonDivergence when the
/// increments grow `divergence_window` times in a row or become non-finite.
NewtonResult local_null_control(const ProblemData& pd, const LinearParabolic& sys,
                                const WeightFields& fields, const PenaltySchedule& schedule,
                                const HumOptions& hum, const NewtonOptions& opts);

/// Newton history CSV: k, residual_log, terminal_norm_linear,
/// terminal_norm_nonlinear_replay (the replay runs once, so only the last
/// row carries it; earlier rows hold nan).
void write_newton_csv(std::ostream& os, const NewtonResult& result);

}  // namespace dnc
