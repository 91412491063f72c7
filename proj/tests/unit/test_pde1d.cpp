#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "dnc/errors.hpp"
#include "dnc/pde1d.hpp"
#include "dnc/random_fields.hpp"

namespace {

using dnc::DegeneracyCoefficient;
using dnc::Field2D;
using dnc::TimeScheme;

double pairing(const Field2D& q, const Field2D& u, const dnc::SpaceTimeGrid& g) {
  double sum = 0.0;
  for (int j = 1; j <= g.nt; ++j) {
    for (int i = 0; i <= g.nx; ++i) sum += g.dt * g.node_weight[i] * q(j, i) * u(j, i);
  }
  return sum;
}

double l2_rate(double coarse, double fine) { return std::log2(coarse / fine); }

TEST(DegenerateOperator, LaplacianStencil) {
  const auto g = dnc::build_grid(8, 2, 1.0, 1.0);
  const auto op = dnc::assemble_degenerate_operator(DegeneracyCoefficient::constant(1.0), g);
  std::vector<double> e(9, 0.0);
  e[4] = 1.0;
  const auto col = op.apply(e);
  const double h2 = 1.0 / 64.0;
  EXPECT_NEAR(col[3], 1.0 / h2, 1e-10);
  EXPECT_NEAR(col[4], -2.0 / h2, 1e-10);
  EXPECT_NEAR(col[5], 1.0 / h2, 1e-10);
  EXPECT_EQ(col[2], 0.0);
}

TEST(DegenerateOperator, AnnihilatesLinear) {
  const auto g = dnc::build_grid(16, 2, 1.0, 2.0);
  const auto op = dnc::assemble_degenerate_operator(DegeneracyCoefficient::constant(1.0), g);
  std::vector<double> u(g.nodes());
  for (int i = 0; i < g.nodes(); ++i) u[i] = 2.0 - 3.0 * g.x[i];
  for (double v : op.apply(u)) EXPECT_NEAR(v, 0.0, 1e-9);
}

TEST(DegenerateOperator, ConvergesAwayFromOrigin) {
  // Target ((x^{1/2})(1-2x))' blows up like x^{-1/2} at the origin, so the
  // max norm is taken over [0.1, 1].
  const auto a = DegeneracyCoefficient::power(0.5);
  double prev = 0.0;
  for (int nx : {32, 64, 128, 256}) {
    const auto g = dnc::build_grid(nx, 2, 1.0, 2.0);
    std::vector<double> u(g.nodes());
    for (int i = 0; i < g.nodes(); ++i) u[i] = g.x[i] * (1.0 - g.x[i]);
    const auto Lu = dnc::assemble_degenerate_operator(a, g).apply(u);
    double err = 0.0;
    for (int i = 1; i < nx; ++i) {
      const double x = g.x[i];
      if (x < 0.1) continue;
      const double exact = 0.5 / std::sqrt(x) * (1 - 2 * x) - 2 * std::sqrt(x);
      err = std::max(err, std::abs(Lu[i] - exact));
    }
    if (prev > 0.0) {
      EXPECT_GE(l2_rate(prev, err), 1.8) << "nx = " << nx;
    }
    prev = err;
  }
}

TEST(DegenerateOperator, SymmetricNegativeSemidefinite) {
  const auto g = dnc::build_grid(40, 2, 1.0, 2.0);
  const auto op = dnc::assemble_degenerate_operator(DegeneracyCoefficient::power_cosine(0.6), g);
  for (std::uint64_t k = 0; k < 10; ++k) {
    auto u = dnc::random_sine_profile(g, dnc::member_seed(5, k));
    auto v = dnc::random_sine_profile(g, dnc::member_seed(6, k));
    const auto Lu = op.apply(u);
    const auto Lv = op.apply(v);
    double uLv = 0, vLu = 0, uLu = 0;
    for (int i = 0; i < g.nodes(); ++i) {
      uLv += op.dual[i] * u[i] * Lv[i];
      vLu += op.dual[i] * v[i] * Lu[i];
      uLu += op.dual[i] * u[i] * Lu[i];
    }
    EXPECT_NEAR(uLv, vLu, 1e-10 * std::abs(uLv) + 1e-14);
    EXPECT_LE(uLu, 0.0);
  }
}

TEST(ForwardLinear, ZeroDataGivesZero) {
  const auto g = dnc::build_grid(16, 8, 1.0);
  const auto a = DegeneracyCoefficient::power(0.5);
  const auto u = dnc::forward_solve_linear(a, g.make_field(1.0), g.make_field(), g.make_field(),
                                           std::vector<double>(g.nodes(), 0.0), g);
  for (double v : u.data()) EXPECT_EQ(v, 0.0);
}

double mms_error(int nx, int nt, TimeScheme scheme) {
  // u* = e^{-t} x(1-x), a = x^{1/2}, c = 1: u*_t + u* cancel, leaving
  // g = -e^{-t} ((x^{1/2})(1-2x))'.
  const auto a = DegeneracyCoefficient::power(0.5);
  const auto g = dnc::build_grid(nx, nt, 1.0, 2.0);
  Field2D src = g.make_field();
  std::vector<double> u0(g.nodes());
  for (int i = 0; i <= nx; ++i) u0[i] = g.x[i] * (1 - g.x[i]);
  for (int j = 0; j <= nt; ++j) {
    for (int i = 1; i < nx; ++i) {
      const double x = g.x[i];
      src(j, i) = -std::exp(-g.t[j]) * (0.5 / std::sqrt(x) * (1 - 2 * x) - 2 * std::sqrt(x));
    }
  }
  const auto u = dnc::forward_solve_linear(a, g.make_field(1.0), src, g.make_field(), u0, g, scheme);
  std::vector<double> e(g.nodes());
  for (int i = 0; i <= nx; ++i) e[i] = u(nt, i) - std::exp(-1.0) * u0[i];
  return dnc::l2_norm(e, g);
}

TEST(ForwardLinear, ManufacturedSpatialOrder) {
  const double e32 = mms_error(32, 32 * 32, TimeScheme::implicit_euler);
  const double e64 = mms_error(64, 64 * 64, TimeScheme::implicit_euler);
  EXPECT_GE(l2_rate(e32, e64), 1.8);
}

TEST(ForwardLinear, ManufacturedTemporalOrder) {
  const double e1 = mms_error(512, 16, TimeScheme::implicit_euler);
  const double e2 = mms_error(512, 32, TimeScheme::implicit_euler);
  EXPECT_GE(l2_rate(e1, e2), 0.9);
  // Spatial error floors out quickly for CN, so it needs a finer mesh.
  const double c1 = mms_error(2048, 8, TimeScheme::crank_nicolson);
  const double c2 = mms_error(2048, 16, TimeScheme::crank_nicolson);
  EXPECT_LT(c2, e2);
  EXPECT_GE(l2_rate(c1, c2), 1.8);
}

class AdjointIdentity : public ::testing::TestWithParam<TimeScheme> {};

TEST_P(AdjointIdentity, PairingIsExact) {
  const auto g = dnc::build_grid(16, 16, 1.0);
  const dnc::ControlWindow omega{0.3, 0.8};
  const auto a = DegeneracyCoefficient::power(0.5);
  Field2D c = dnc::random_sine_field(g, 99);
  const dnc::LinearParabolic sys(a, c, g, GetParam());
  const std::vector<double> zero(g.nodes(), 0.0);
  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto h = dnc::restrict_to_window(dnc::random_sine_field(g, dnc::member_seed(1, k)), omega, g);
    const auto q = dnc::random_sine_field(g, dnc::member_seed(2, k));
    const auto u = sys.forward(h, zero);
    const auto p = sys.adjoint(q);
    const auto grad = dnc::restrict_to_window(sys.source_sensitivity(p), omega, g);
    const double lhs = pairing(q, u, g);
    const double rhs = pairing(grad, h, g);
    EXPECT_NEAR(lhs, rhs, 1e-10 * std::abs(lhs)) << "member " << k;
  }
}

TEST_P(AdjointIdentity, InitialDatumSensitivity) {
  const auto g = dnc::build_grid(16, 16, 1.0);
  const dnc::LinearParabolic sys(DegeneracyCoefficient::power(0.5), g.make_field(1.0), g,
                                 GetParam());
  const auto u0 = dnc::random_sine_profile(g, 4);
  const auto q = dnc::random_sine_field(g, 8);
  const auto u = sys.forward(g.make_field(), u0);
  const auto p = sys.adjoint(q);
  double rhs = 0.0;
  for (int i = 0; i <= g.nx; ++i) rhs += g.node_weight[i] * p(0, i) * u0[i];
  const double lhs = pairing(q, u, g);
  EXPECT_NEAR(lhs, rhs, 1e-10 * std::abs(lhs));
}

INSTANTIATE_TEST_SUITE_P(Schemes, AdjointIdentity,
                         ::testing::Values(TimeScheme::implicit_euler, TimeScheme::crank_nicolson));

TEST(Adjoint, ZeroSourceGivesZero) {
  const auto g = dnc::build_grid(12, 6, 1.0);
  const auto p = dnc::adjoint_solve(DegeneracyCoefficient::power(0.5), g.make_field(),
                                    g.make_field(1.0), g);
  for (double v : p.data()) EXPECT_EQ(v, 0.0);
}

TEST(Backward, SatisfiesDiscreteEquation) {
  for (auto scheme : {TimeScheme::implicit_euler, TimeScheme::crank_nicolson}) {
    const auto g = dnc::build_grid(24, 12, 1.0);
    const auto c = dnc::random_sine_field(g, 3);
    const dnc::LinearParabolic sys(DegeneracyCoefficient::power(0.5), c, g, scheme);
    const auto F = dnc::random_sine_field(g, 17);
    const auto vT = dnc::random_sine_profile(g, 19);
    const auto v = sys.backward(F, vT);
    const double th = sys.theta();
    for (int j = 0; j < g.nt; ++j) {
      const auto L0 = sys.op().apply(v.row(j));
      const auto L1 = sys.op().apply(v.row(j + 1));
      for (int i = 1; i < g.nx; ++i) {
        const double lhs = (v(j + 1, i) - v(j, i)) / g.dt + th * (L0[i] - c(j, i) * v(j, i)) +
                           (1 - th) * (L1[i] - c(j + 1, i) * v(j + 1, i));
        const double rhs = th * F(j, i) + (1 - th) * F(j + 1, i);
        EXPECT_NEAR(lhs, rhs, 1e-8 * (1 + std::abs(L0[i]) + std::abs(v(j, i)) / g.dt));
      }
    }
  }
}

TEST(ForwardLinear, L2NormNonincreasing) {
  for (auto scheme : {TimeScheme::implicit_euler, TimeScheme::crank_nicolson}) {
    const auto g = dnc::build_grid(48, 40, 1.0);
    Field2D c = g.make_field();
    for (int j = 0; j <= g.nt; ++j)
      for (int i = 0; i <= g.nx; ++i) c(j, i) = 1.0 + std::sin(3 * g.x[i] + g.t[j]);
    const auto u = dnc::forward_solve_linear(DegeneracyCoefficient::power(0.5), c, g.make_field(),
                                             g.make_field(), dnc::random_sine_profile(g, 12), g,
                                             scheme);
    double prev = dnc::l2_norm(u.row(0), g);
    for (int j = 1; j <= g.nt; ++j) {
      const double cur = dnc::l2_norm(u.row(j), g);
      EXPECT_LE(cur, prev * (1 + 1e-13));
      prev = cur;
    }
  }
}

TEST(ForwardLinear, StrongDegeneracyStaysFinite) {
  const auto g = dnc::build_grid(64, 32, 1.0);
  const auto a = DegeneracyCoefficient::power(0.9);
  const auto u = dnc::forward_solve_linear(a, g.make_field(), dnc::random_sine_field(g, 2),
                                           g.make_field(), dnc::random_sine_profile(g, 3), g);
  for (int j = 0; j <= g.nt; ++j) {
    EXPECT_EQ(u(j, 0), 0.0);
    EXPECT_EQ(u(j, g.nx), 0.0);
    for (double v : u.row(j)) EXPECT_TRUE(std::isfinite(v));
  }
}

TEST(ForwardLinear, ShapeMismatch) {
  const auto g = dnc::build_grid(8, 4, 1.0);
  const auto a = DegeneracyCoefficient::power(0.5);
  EXPECT_THROW(dnc::forward_solve_linear(a, g.make_field(), Field2D(2, 2), g.make_field(),
                                         std::vector<double>(g.nodes()), g),
               dnc::InvalidArgument);
}

dnc::ProblemData nonlinear_problem(const dnc::SpaceTimeGrid& g) {
  dnc::ProblemData pd;
  pd.ell = dnc::NonlocalFactor::affine(0.5);
  pd.f = dnc::SemilinearTerm::polynomial({0.0, 0.0, 1.0});
  pd.u0.assign(g.nodes(), 0.0);
  return pd;
}

TEST(ForwardNonlinear, ZeroDataGivesZero) {
  const auto g = dnc::build_grid(16, 8, 1.0);
  const auto u = dnc::forward_solve_nonlinear(nonlinear_problem(g), g.make_field(), g);
  for (double v : u.data()) EXPECT_EQ(v, 0.0);
}

TEST(ForwardNonlinear, MatchesLinearSolver) {
  for (auto scheme : {TimeScheme::implicit_euler, TimeScheme::crank_nicolson}) {
    const auto g = dnc::build_grid(32, 16, 1.0);
    dnc::ProblemData pd;
    pd.f = dnc::SemilinearTerm::linear(1.5);
    pd.u0 = dnc::random_sine_profile(g, 21);
    const auto h = dnc::random_sine_field(g, 22);
    const auto un = dnc::forward_solve_nonlinear(pd, h, g, {scheme});
    const auto ul = dnc::forward_solve_linear(pd.a, g.make_field(1.5), g.make_field(), h, pd.u0,
                                              g, scheme);
    for (std::size_t k = 0; k < un.data().size(); ++k) {
      EXPECT_NEAR(un.data()[k], ul.data()[k], 1e-12);
    }
  }
}

double nonlinear_mms_error(int nx, int nt) {
  // u* = e^{-t} x(1-x), l(r) = 1 + r/2, f = u^3, int u* = e^{-t}/6.
  const auto g = dnc::build_grid(nx, nt, 1.0, 2.0);
  auto pd = nonlinear_problem(g);
  for (int i = 0; i <= nx; ++i) pd.u0[i] = g.x[i] * (1 - g.x[i]);
  Field2D src = g.make_field();
  for (int j = 0; j <= nt; ++j) {
    const double e = std::exp(-g.t[j]);
    const double ell = 1.0 + e / 12.0;
    for (int i = 1; i < nx; ++i) {
      const double x = g.x[i];
      const double u = e * x * (1 - x);
      const double div = e * (0.5 / std::sqrt(x) * (1 - 2 * x) - 2 * std::sqrt(x));
      src(j, i) = -u - ell * div + u * u * u;
    }
  }
  const auto u = dnc::forward_solve_nonlinear(pd, src, g);
  std::vector<double> err(g.nodes());
  for (int i = 0; i <= nx; ++i) err[i] = u(nt, i) - std::exp(-1.0) * pd.u0[i];
  return dnc::l2_norm(err, g);
}

TEST(ForwardNonlinear, ManufacturedOrders) {
  EXPECT_GE(l2_rate(nonlinear_mms_error(32, 32 * 32), nonlinear_mms_error(64, 64 * 64)), 1.8);
  EXPECT_GE(l2_rate(nonlinear_mms_error(512, 16), nonlinear_mms_error(512, 32)), 0.9);
}

TEST(ForwardNonlinear, NonpositiveNonlocalFactorDiverges) {
  const auto g = dnc::build_grid(16, 8, 1.0);
  auto pd = nonlinear_problem(g);
  pd.ell = dnc::NonlocalFactor::affine(-20.0);
  for (int i = 0; i <= g.nx; ++i) pd.u0[i] = std::sin(M_PI * g.x[i]);
  EXPECT_THROW(dnc::forward_solve_nonlinear(pd, g.make_field(), g), dnc::PicardDivergence);
}

TEST(ForwardNonlinear, IterationCapDiverges) {
  const auto g = dnc::build_grid(16, 8, 1.0);
  auto pd = nonlinear_problem(g);
  for (int i = 0; i <= g.nx; ++i) pd.u0[i] = std::sin(M_PI * g.x[i]);
  dnc::NonlinearOptions opts;
  opts.picard_maxit = 1;
  EXPECT_THROW(dnc::forward_solve_nonlinear(pd, g.make_field(), g, opts), dnc::PicardDivergence);
}

TEST(Window, NodesAndRestriction) {
  const auto g = dnc::build_grid(10, 4, 1.0, 1.0);
  const dnc::ControlWindow omega{0.3, 0.8};
  const std::vector<int> expected{4, 5, 6, 7};
  EXPECT_EQ(dnc::window_nodes(omega, g), expected);
  const auto r = dnc::restrict_to_window(g.make_field(1.0), omega, g);
  for (int j = 0; j <= g.nt; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      const bool inside = j > 0 && i >= 4 && i <= 7;
      EXPECT_EQ(r(j, i), inside ? 1.0 : 0.0);
    }
  }
}

TEST(TrajectoryCsv, Header) {
  const auto g = dnc::build_grid(2, 2, 1.0, 1.0);
  std::ostringstream os;
  dnc::write_trajectory_csv(os, g.make_field(), g);
  EXPECT_EQ(os.str().substr(0, 6), "t,x,u\n");
}

}  // namespace
