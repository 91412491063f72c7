#include "dnc/pde1d.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "dnc/csv.hpp"
#include "dnc/errors.hpp"

namespace dnc {

void DegenerateOperator::apply(std::span<const double> u, std::span<double> out) const {
  const int n = nx();
  if (u.size() != static_cast<std::size_t>(n + 1) || out.size() != u.size()) {
    throw InvalidArgument("DegenerateOperator::apply: size mismatch");
  }
  out[0] = 0.0;
  out[n] = 0.0;
  for (int i = 1; i < n; ++i) {
    const double flux_r = conductance[i] * (u[i + 1] - u[i]);
    const double flux_l = conductance[i - 1] * (u[i] - u[i - 1]);
    out[i] = (flux_r - flux_l) / dual[i];
  }
}

std::vector<double> DegenerateOperator::apply(std::span<const double> u) const {
  std::vector<double> out(u.size());
  apply(u, out);
  return out;
}

DegenerateOperator assemble_degenerate_operator(const DegeneracyCoefficient& a,
                                                const SpaceTimeGrid& grid) {
  DegenerateOperator op;
  op.conductance.resize(grid.nx);
  for (int i = 0; i < grid.nx; ++i) {
    op.conductance[i] = a(grid.midpoint(i)) / grid.spacing(i);
  }
  op.dual = grid.node_weight;
  return op;
}

double l2_norm(std::span<const double> u, const SpaceTimeGrid& grid) {
  double sum = 0.0;
  for (int i = 0; i <= grid.nx; ++i) sum += grid.node_weight[i] * u[i] * u[i];
  return std::sqrt(sum);
}

double h1a_norm_sq(std::span<const double> u, const DegenerateOperator& op,
                   const SpaceTimeGrid& grid) {
  double sum = 0.0;
  for (int i = 0; i <= grid.nx; ++i) sum += grid.node_weight[i] * u[i] * u[i];
  for (int i = 0; i < grid.nx; ++i) {
    const double du = u[i + 1] - u[i];
    sum += op.conductance[i] * du * du;
  }
  return sum;
}

double theta_of(TimeScheme scheme) {
  return scheme == TimeScheme::crank_nicolson ? 0.5 : 1.0;
}

namespace {

// Solves the symmetric tridiagonal system with diagonal `diag` and
// off-diagonal `off` (off[i] couples i and i+1) on interior nodes 1..n-1,
// overwriting b. Returns false on a nonpositive or non-finite pivot.
bool solve_tridiagonal(std::span<const double> diag, std::span<const double> off,
                       std::span<double> b, int n) {
  std::vector<double> piv(n);
  for (int i = 1; i < n; ++i) {
    piv[i] = diag[i];
    if (i > 1) {
      const double l = off[i - 1] / piv[i - 1];
      piv[i] -= l * off[i - 1];
      b[i] -= l * b[i - 1];
    }
    if (!(piv[i] > 0.0) || !std::isfinite(piv[i])) return false;
  }
  b[n - 1] /= piv[n - 1];
  for (int i = n - 2; i >= 1; --i) b[i] = (b[i] - off[i] * b[i + 1]) / piv[i];
  b[0] = 0.0;
  b[n] = 0.0;
  return true;
}

void check_field(const Field2D& f, const SpaceTimeGrid& grid, const char* what) {
  if (f.rows() != grid.times() || f.cols() != grid.nodes()) {
    throw InvalidArgument(std::string(what) + ": field shape does not match the grid");
  }
}

void check_nodal(std::span<const double> v, const SpaceTimeGrid& grid, const char* what) {
  if (v.size() != static_cast<std::size_t>(grid.nodes())) {
    throw InvalidArgument(std::string(what) + ": expected nx+1 nodal values");
  }
}

}  // namespace

LinearParabolic::LinearParabolic(const DegeneracyCoefficient& a, Field2D c,
                                 const SpaceTimeGrid& grid, TimeScheme scheme)
    : grid_(grid),
      op_(assemble_degenerate_operator(a, grid)),
      c_(std::move(c)),
      theta_(theta_of(scheme)) {
  check_field(c_, grid_, "LinearParabolic");
  const int n = grid_.nx;
  const double dt = grid_.dt;
  offdiag_.assign(n, 0.0);
  for (int i = 1; i < n - 1; ++i) offdiag_[i] = -theta_ * op_.conductance[i];

  inv_pivot_ = grid_.make_field();
  for (int j = 0; j < grid_.times(); ++j) {
    double prev = 0.0;
    for (int i = 1; i < n; ++i) {
      const double d = op_.dual[i];
      double piv = d / dt + theta_ * d * c_(j, i) +
                   theta_ * (op_.conductance[i - 1] + op_.conductance[i]);
      if (i > 1) piv -= offdiag_[i - 1] * offdiag_[i - 1] / prev;
      if (!(piv > 0.0) || !std::isfinite(piv)) {
        throw SolverError("implicit step matrix is not positive definite at time row " +
                          std::to_string(j) + "; reduce dt or the negative part of c");
      }
      inv_pivot_(j, i) = 1.0 / piv;
      prev = piv;
    }
  }
}

void LinearParabolic::solve_step(int j, std::span<double> rhs) const {
  const int n = grid_.nx;
  const auto ip = inv_pivot_.row(j);
  for (int i = 1; i < n; ++i) rhs[i] *= op_.dual[i];
  for (int i = 2; i < n; ++i) rhs[i] -= offdiag_[i - 1] * ip[i - 1] * rhs[i - 1];
  rhs[n - 1] *= ip[n - 1];
  for (int i = n - 2; i >= 1; --i) rhs[i] = (rhs[i] - offdiag_[i] * rhs[i + 1]) * ip[i];
  rhs[0] = 0.0;
  rhs[n] = 0.0;
}

void LinearParabolic::apply_explicit(int j, std::span<const double> x,
                                     std::span<double> y) const {
  const int n = grid_.nx;
  const double inv_dt = 1.0 / grid_.dt;
  if (theta_ == 1.0) {
    for (int i = 1; i < n; ++i) y[i] = x[i] * inv_dt;
  } else {
    op_.apply(x, y);
    const auto c = c_.row(j - 1);
    const double w = 1.0 - theta_;
    for (int i = 1; i < n; ++i) y[i] = x[i] * inv_dt + w * (y[i] - c[i] * x[i]);
  }
  y[0] = 0.0;
  y[n] = 0.0;
}

Field2D LinearParabolic::forward(const Field2D& source, std::span<const double> u0) const {
  check_field(source, grid_, "forward");
  check_nodal(u0, grid_, "forward");
  const int n = grid_.nx;
  Field2D u = grid_.make_field();
  std::copy(u0.begin(), u0.end(), u.row(0).begin());
  u(0, 0) = 0.0;
  u(0, n) = 0.0;
  for (int j = 1; j <= grid_.nt; ++j) {
    auto cur = u.row(j);
    apply_explicit(j, u.row(j - 1), cur);
    const auto sj = source.row(j);
    const auto sp = source.row(j - 1);
    for (int i = 1; i < n; ++i) cur[i] += theta_ * sj[i] + (1.0 - theta_) * sp[i];
    solve_step(j, cur);
  }
  return u;
}

Field2D LinearParabolic::adjoint(const Field2D& q) const {
  check_field(q, grid_, "adjoint");
  const int n = grid_.nx;
  const int nt = grid_.nt;
  Field2D p = grid_.make_field();
  for (int j = nt; j >= 1; --j) {
    auto cur = p.row(j);
    if (j < nt) {
      apply_explicit(j + 1, p.row(j + 1), cur);
    }
    const auto qj = q.row(j);
    for (int i = 1; i < n; ++i) cur[i] += qj[i];
    solve_step(j, cur);
  }
  auto head = p.row(0);
  apply_explicit(1, p.row(1), head);
  for (double& v : head) v *= grid_.dt;
  return p;
}

Field2D LinearParabolic::source_sensitivity(const Field2D& p) const {
  check_field(p, grid_, "source_sensitivity");
  const int nt = grid_.nt;
  Field2D g = grid_.make_field();
  for (int j = 1; j <= nt; ++j) {
    auto gj = g.row(j);
    const auto pj = p.row(j);
    for (int i = 0; i <= grid_.nx; ++i) gj[i] = theta_ * pj[i];
    if (theta_ != 1.0 && j < nt) {
      const auto pn = p.row(j + 1);
      for (int i = 0; i <= grid_.nx; ++i) gj[i] += (1.0 - theta_) * pn[i];
    }
  }
  return g;
}

Field2D LinearParabolic::backward(const Field2D& F, std::span<const double> vT) const {
  check_field(F, grid_, "backward");
  check_nodal(vT, grid_, "backward");
  const int n = grid_.nx;
  const int nt = grid_.nt;
  Field2D v = grid_.make_field();
  std::copy(vT.begin(), vT.end(), v.row(nt).begin());
  v(nt, 0) = 0.0;
  v(nt, n) = 0.0;
  for (int j = nt - 1; j >= 0; --j) {
    auto cur = v.row(j);
    apply_explicit(j + 2, v.row(j + 1), cur);
    const auto fj = F.row(j);
    const auto fn = F.row(j + 1);
    for (int i = 1; i < n; ++i) cur[i] -= theta_ * fj[i] + (1.0 - theta_) * fn[i];
    solve_step(j, cur);
  }
  return v;
}

Field2D forward_solve_linear(const DegeneracyCoefficient& a, const Field2D& c, const Field2D& g,
                             const Field2D& h, std::span<const double> u0,
                             const SpaceTimeGrid& grid, TimeScheme scheme) {
  check_field(g, grid, "forward_solve_linear");
  check_field(h, grid, "forward_solve_linear");
  Field2D source = g;
  source += h;
  return LinearParabolic(a, c, grid, scheme).forward(source, u0);
}

Field2D adjoint_solve(const DegeneracyCoefficient& a, const Field2D& source, const Field2D& c,
                      const SpaceTimeGrid& grid, TimeScheme scheme) {
  return LinearParabolic(a, c, grid, scheme).adjoint(source);
}

Field2D forward_solve_nonlinear(const ProblemData& pd, const Field2D& h,
                                const SpaceTimeGrid& grid, const NonlinearOptions& opts) {
  check_field(h, grid, "forward_solve_nonlinear");
  check_nodal(pd.u0, grid, "forward_solve_nonlinear");
  const DegenerateOperator op = assemble_degenerate_operator(pd.a, grid);
  const double theta = theta_of(opts.scheme);
  const int n = grid.nx;
  const double dt = grid.dt;

  Field2D u = grid.make_field();
  std::copy(pd.u0.begin(), pd.u0.end(), u.row(0).begin());
  u(0, 0) = 0.0;
  u(0, n) = 0.0;

  std::vector<double> explicit_part(n + 1), w(n + 1), next(n + 1), Lw(n + 1);
  std::vector<double> diag(n + 1), off(n, 0.0), fu(n + 1);

  for (int j = 1; j <= grid.nt; ++j) {
    const auto prev = u.row(j - 1);
    const double tj = grid.t[j];
    const double tp = grid.t[j - 1];

    for (int i = 1; i < n; ++i) explicit_part[i] = prev[i] / dt + theta * h(j, i);
    if (theta != 1.0) {
      const double ell_prev = pd.ell(integrate_space(prev, grid));
      op.apply(prev, Lw);
      for (int i = 1; i < n; ++i) {
        explicit_part[i] += (1.0 - theta) * (ell_prev * Lw[i] -
                                             pd.f.value(tp, grid.x[i], prev[i]) + h(j - 1, i));
      }
    }

    std::copy(prev.begin(), prev.end(), w.begin());
    bool converged = false;
    for (int k = 0; k < opts.picard_maxit; ++k) {
      const double ell = pd.ell(integrate_space(w, grid));
      if (!(ell > 0.0) || !std::isfinite(ell)) {
        throw PicardDivergence("nonlocal factor l(int u) = " + std::to_string(ell) +
                               " is not positive at step " + std::to_string(j));
      }
      for (int i = 1; i < n; ++i) {
        const double d = op.dual[i];
        fu[i] = pd.f.du(tj, grid.x[i], w[i]);
        diag[i] = d / dt + theta * d * fu[i] +
                  theta * ell * (op.conductance[i - 1] + op.conductance[i]);
        if (i < n - 1) off[i] = -theta * ell * op.conductance[i];
        const double fw = pd.f.value(tj, grid.x[i], w[i]);
        next[i] = d * (explicit_part[i] + theta * (fu[i] * w[i] - fw));
      }
      if (!solve_tridiagonal(diag, off, next, n)) {
        throw PicardDivergence("Picard step matrix lost definiteness at step " +
                               std::to_string(j));
      }
      double inc = 0.0, size = 0.0;
      for (int i = 1; i < n; ++i) {
        if (!std::isfinite(next[i])) {
          throw PicardDivergence("non-finite state at step " + std::to_string(j));
        }
        inc = std::max(inc, std::abs(next[i] - w[i]));
        size = std::max(size, std::abs(next[i]));
      }
      std::swap(w, next);
      if (inc <= opts.picard_tol * size) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw PicardDivergence("Picard loop did not converge in " +
                             std::to_string(opts.picard_maxit) + " iterations at step " +
                             std::to_string(j));
    }
    std::copy(w.begin(), w.end(), u.row(j).begin());
  }
  return u;
}

std::vector<int> window_nodes(const ControlWindow& omega, const SpaceTimeGrid& grid) {
  std::vector<int> nodes;
  for (int i = 1; i < grid.nx; ++i) {
    if (omega.contains(grid.x[i])) nodes.push_back(i);
  }
  return nodes;
}

Field2D restrict_to_window(const Field2D& field, const ControlWindow& omega,
                           const SpaceTimeGrid& grid) {
  check_field(field, grid, "restrict_to_window");
  Field2D out = grid.make_field();
  const auto nodes = window_nodes(omega, grid);
  for (int j = 1; j <= grid.nt; ++j) {
    for (int i : nodes) out(j, i) = field(j, i);
  }
  return out;
}

void write_trajectory_csv(std::ostream& os, const Field2D& u, const SpaceTimeGrid& grid) {
  CsvWriter csv(os, {"t", "x", "u"});
  for (int j = 0; j < grid.times(); ++j) {
    for (int i = 0; i < grid.nodes(); ++i) {
      csv.field(grid.t[j]).field(grid.x[i]).field(u(j, i));
      csv.end_row();
    }
  }
}

}  // namespace dnc
