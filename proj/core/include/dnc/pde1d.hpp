#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "dnc/coeffs.hpp"
#include "dnc/mesh.hpp"

namespace dnc {

/// Conservative three-point discretization of (a u_x)_x with Dirichlet
/// ends:
///   (L u)_i = [k_{i+1/2}(u_{i+1} - u_i) - k_{i-1/2}(u_i - u_{i-1})] / dx_i,
/// k_{i+1/2} = a(midpoint) / h_{i+1/2}, dx_i the dual-cell width. L is
/// symmetric and negative semidefinite in the dx-weighted inner product.
struct DegenerateOperator {
  std::vector<double> conductance;  ///< k per cell (nx entries)
  std::vector<double> dual;         ///< dx per node (nx+1 entries)

  int nx() const { return static_cast<int>(conductance.size()); }
  /// out = L u on interior nodes, 0 on the boundary nodes.
  void apply(std::span<const double> u, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> u) const;
};

DegenerateOperator assemble_degenerate_operator(const DegeneracyCoefficient& a,
                                                const SpaceTimeGrid& grid);

/// Discrete weighted norms of a nodal function with zero boundary values.
double l2_norm(std::span<const double> u, const SpaceTimeGrid& grid);
/// ||u||^2 + ||sqrt(a) u_x||^2 with a taken at cell midpoints.
double h1a_norm_sq(std::span<const double> u, const DegenerateOperator& op,
                   const SpaceTimeGrid& grid);

enum class TimeScheme { implicit_euler, crank_nicolson };

double theta_of(TimeScheme scheme);

/// Theta-scheme time stepping for u_t - L u + c u = s on the grid.
///
/// Step j (1..nt) solves
///   M_j u_j = N_j u_{j-1} + theta s_j + (1 - theta) s_{j-1},
///   M_j = I/dt - theta (L - C_j),   N_j = I/dt + (1 - theta)(L - C_{j-1}).
/// M_j and N_j are self-adjoint in the dx-weighted inner product, so the
/// exact discrete adjoint reuses the same factorizations. Tridiagonal
/// factors for every row are computed once at construction.
class LinearParabolic {
 public:
  LinearParabolic(const DegeneracyCoefficient& a, Field2D c, const SpaceTimeGrid& grid,
                  TimeScheme scheme = TimeScheme::implicit_euler);

  const SpaceTimeGrid& grid() const { return grid_; }
  const DegenerateOperator& op() const { return op_; }
  const Field2D& potential() const { return c_; }
  double theta() const { return theta_; }

  /// State with source s (rows 0..nt) and initial datum u0. Boundary
  /// values are forced to zero on every row.
  Field2D forward(const Field2D& source, std::span<const double> u0) const;

  /// Exact discrete adjoint of `forward` for the pairing
  ///   <q, u> = sum_{j=1..nt} dt sum_i dx_i q_{j,i} u_{j,i}.
  /// Rows 1..nt hold P_j from M_j P_j = q_j + N_{j+1} P_{j+1}, P_{nt+1} = 0;
  /// row 0 holds dt N_1 P_1, the sensitivity with respect to u0.
  Field2D adjoint(const Field2D& q) const;

  /// Gradient of <q, forward(s, 0)> with respect to s on rows 1..nt in the
  /// same pairing: theta P_j + (1 - theta) P_{j+1}; row 0 is zero.
  Field2D source_sensitivity(const Field2D& p) const;

  /// Backward problem v_t + L v - c v = F, v(T) = vT, stepped from nt down to 0.
  Field2D backward(const Field2D& F, std::span<const double> vT) const;

  /// Solves M_j x = rhs in place (interior nodes; boundary entries zeroed).
  void solve_step(int j, std::span<double> rhs) const;
  /// y = N_j x for j in 1..nt+1 (N_j uses the potential of row j-1).
  void apply_explicit(int j, std::span<const double> x, std::span<double> y) const;

 private:
  SpaceTimeGrid grid_;
  DegenerateOperator op_;
  Field2D c_;
  double theta_;
  // Thomas factors of the dx-scaled symmetric system: one pivot row per
  // time row, shared off-diagonal.
  Field2D inv_pivot_;
  std::vector<double> offdiag_;
};

/// u_t - (a u_x)_x + c u = g + h chi_omega with u(0) = u0.
Field2D forward_solve_linear(const DegeneracyCoefficient& a, const Field2D& c, const Field2D& g,
                             const Field2D& h, std::span<const double> u0,
                             const SpaceTimeGrid& grid,
                             TimeScheme scheme = TimeScheme::implicit_euler);

/// -p_t - (a p_x)_x + c p = source, p(T) = 0, as the discrete adjoint.
Field2D adjoint_solve(const DegeneracyCoefficient& a, const Field2D& source, const Field2D& c,
                      const SpaceTimeGrid& grid, TimeScheme scheme = TimeScheme::implicit_euler);

struct NonlinearOptions {
  TimeScheme scheme = TimeScheme::implicit_euler;
  double picard_tol = 1e-10;
  int picard_maxit = 50;
};

/// u_t - (l(int u) a u_x)_x + f(t,x,u) = h chi_omega, u(0) = pd.u0.
///
/// Each step runs a Picard loop that lags l(int u) and linearizes f about
/// the previous iterate. The same theta weighting as LinearParabolic is
/// used, so with l = 1 and f = c u both solvers produce the same states.
Field2D forward_solve_nonlinear(const ProblemData& pd, const Field2D& h,
                                const SpaceTimeGrid& grid, const NonlinearOptions& opts = {});

/// Zeroes every node outside the open window omega and every row j = 0.
Field2D restrict_to_window(const Field2D& field, const ControlWindow& omega,
                           const SpaceTimeGrid& grid);

/// Nodes strictly inside omega.
std::vector<int> window_nodes(const ControlWindow& omega, const SpaceTimeGrid& grid);

/// CSV dump: t, x, u.
void write_trajectory_csv(std::ostream& os, const Field2D& u, const SpaceTimeGrid& grid);

}  // namespace dnc
