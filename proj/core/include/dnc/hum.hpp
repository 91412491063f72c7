#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "dnc/coeffs.hpp"
#include "dnc/mesh.hpp"
#include "dnc/pde1d.hpp"
#include "dnc/weights.hpp"

namespace dnc {

struct PenaltySchedule {
  std::vector<double> n{1e0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
  double cg_tol = 1e-8;
  int cg_maxit = 500;

  /// n_k = 10^k for k = 0..k_max.
  static PenaltySchedule decades(int k_max);
  void validate() const;
};

struct HumOptions {
  /// Terminal success threshold relative to ||u0||.
  double tol_terminal = 1e-2;
  /// Log-weights are clipped at this many e-folds above the reference level.
  double log_weight_window = 8.0;
};

/// Discrete weights of J_n on the control problem.
///
/// The functional minimized is
///   J = 1/2 sum_{j=1..nt} dt sum_i dx_i W u^2 + 1/2 sum dt sum_{i in omega} dx_i R h^2,
/// W = exp(2 min(log rho_{0,n} - L, window)), R = exp(2 min(log rho_{*,n} - L, window)),
/// with L the minimum of log rho_{*,n} over the control support. The true
/// weighted functional is exp(2L) J wherever the clip is inactive.
struct ControlWeights {
  double n = 0.0;
  double log_ref = 0.0;
  double window = 0.0;
  std::vector<int> support;  ///< control nodes (strictly inside omega)
  Field2D state;             ///< W, rows 1..nt
  Field2D control;           ///< R, rows 1..nt on the support, 0 elsewhere

  /// Fraction of (state, control) entries where the clip is active.
  double clipped_fraction = 0.0;
};

ControlWeights build_control_weights(const WeightFields& fields, const ControlWindow& omega,
                                     const SpaceTimeGrid& grid, double window);

/// J_n(u, h) in factored form mantissa * exp(log_scale).
LogScaled eval_Jn(const Field2D& u, const Field2D& h, const ControlWeights& w,
                  const SpaceTimeGrid& grid);

/// The two halves of J_n separately, as natural logs of the full (unscaled)
/// integrals int rho_{*,n}^2 h^2 and int rho_{0,n}^2 u^2.
struct WeightedNorms {
  double control_log = 0.0;
  double state_log = 0.0;
};
WeightedNorms weighted_norms(const Field2D& u, const Field2D& h, const ControlWeights& w,
                             const SpaceTimeGrid& grid);

/// The affine control-to-state map u(h) = S h + u_p of a fixed problem.
class ControlProblem {
 public:
  ControlProblem(const LinearParabolic& sys, const ControlWindow& omega, Field2D g,
                 std::vector<double> u0);

  const LinearParabolic& system() const { return sys_; }
  const SpaceTimeGrid& grid() const { return sys_.grid(); }
  const std::vector<int>& support() const { return support_; }
  const Field2D& g() const { return g_; }
  std::span<const double> u0() const { return u0_; }

  /// u(h) for a control supported on omega (rows 1..nt).
  Field2D state(const Field2D& h) const;
  /// S h with zero g and u0.
  Field2D control_to_state(const Field2D& h) const;
  /// S^* q restricted to the support (zero elsewhere).
  Field2D state_to_control(const Field2D& q) const;

  /// Inner product sum_{j=1..nt} dt sum_{i in support} dx_i a b.
  double control_dot(const Field2D& a, const Field2D& b) const;
  double control_norm(const Field2D& a) const;

 private:
  const LinearParabolic& sys_;
  std::vector<int> support_;
  Field2D g_;
  std::vector<double> u0_;
};

/// grad J_n(h) = R h + S^*(W u(h)) in the control inner product.
Field2D grad_Jn(const ControlProblem& problem, const Field2D& h, const ControlWeights& w);

struct MinimizeResult {
  Field2D h;
  Field2D u;
  int iterations = 0;
  bool converged = false;
  /// Relative gradient norm ||grad|| / ||grad at h = 0|| on exit.
  double relative_residual = 0.0;
  /// Scaled J after every accepted iteration (entry 0 is the start).
  std::vector<double> J_history;
};

/// Preconditioned CG on the quadratic h -> J_n(h), preconditioner R^{-1}.
/// Stops when ||grad|| <= tol ||grad at h = 0|| and ||grad|| <= tol ||R h||. On hitting maxit the last
/// (lowest-J) iterate is returned with converged = false.
MinimizeResult minimize_Jn(const ControlProblem& problem, const ControlWeights& w,
                           const Field2D& h_init, double tol, int maxit);

struct StageReport {
  double n = 0.0;
  int cg_iters = 0;
  bool converged = false;
  LogScaled Jn;
  double terminal_norm = 0.0;
  WeightedNorms norms;
  double clipped_fraction = 0.0;
};

struct NullControlResult {
  Field2D h;
  Field2D u;
  std::vector<StageReport> stages;
  double terminal_norm = 0.0;
  double free_terminal_norm = 0.0;
  double u0_norm = 0.0;
  WeightedNorms norms;
  ControlWeights final_weights;
  bool success = false;
  bool terminal_monotone = true;
  bool all_stages_converged = true;
};

/// Runs the continuation schedule with warm starts. `fields` is copied and
/// its truncated layer rebuilt for each stage.
NullControlResult solve_null_control(const ControlProblem& problem, const WeightFields& fields,
                                     const ControlWindow& omega, const PenaltySchedule& schedule,
                                     const HumOptions& opts, const Field2D* h_init = nullptr);

/// Per-stage CSV: n, cg_iters, Jn_mantissa, Jn_logscale, terminal_norm,
/// ctrl_weighted_norm_log, state_weighted_norm_log.
void write_stages_csv(std::ostream& os, const std::vector<StageReport>& stages);

}  // namespace dnc
