#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "dnc/errors.hpp"
#include "dnc/hum.hpp"
#include "dnc/random_fields.hpp"
#include "dnc/verify.hpp"

namespace {

using dnc::CarlemanKind;
using dnc::DegeneracyCoefficient;
using dnc::Field2D;

std::vector<double> bubble(const dnc::SpaceTimeGrid& g) {
  std::vector<double> w(g.nodes());
  for (int i = 0; i < g.nodes(); ++i) w[i] = g.x[i] * (1 - g.x[i]);
  return w;
}

TEST(MakeReport, ZeroCases) {
  const auto zero = dnc::make_report("z", {}, {}, 1.0);
  EXPECT_EQ(zero.ratio, 0.0);
  EXPECT_TRUE(zero.pass);
  EXPECT_THROW(dnc::make_report("z", {1.0, 0.0}, {}), dnc::ZeroDenominator);
  const auto r = dnc::make_report("r", {3.0, 500.0}, {1.0, 500.0}, 2.0);
  EXPECT_NEAR(r.ratio, 3.0, 1e-14);
  EXPECT_FALSE(r.pass);
}

TEST(Hardy, LinearCoefficientOnBubble) {
  // int x(1-x)^2 = 1/12 and int x(1-2x)^2 = 1/6.
  const auto a = DegeneracyCoefficient::power(1.0);
  const auto uniform = dnc::build_grid(64, 2, 1.0, 1.0);
  EXPECT_NEAR(dnc::hardy_poincare_ratio(a, bubble(uniform), uniform).ratio, 0.5, 1e-12);
  for (int nx : {64, 128}) {
    const auto g = dnc::build_grid(nx, 2, 1.0, 2.0);
    EXPECT_NEAR(dnc::hardy_poincare_ratio(a, bubble(g), g).ratio, 0.5, 0.01);
  }
}

TEST(Hardy, RejectsDegenerateInputs) {
  const auto g = dnc::build_grid(32, 2, 1.0);
  const auto a = DegeneracyCoefficient::power(0.5);
  EXPECT_THROW(dnc::hardy_poincare_ratio(a, std::vector<double>(g.nodes(), 0.0), g),
               dnc::ZeroDenominator);
  auto w = bubble(g);
  w[0] = 0.1;
  EXPECT_THROW(dnc::hardy_poincare_ratio(a, w, g), dnc::InvalidArgument);
}

TEST(Hardy, AdmissibleTheta) {
  EXPECT_NEAR(dnc::hardy_admissible_theta(DegeneracyCoefficient::power(0.5)), 0.5, 1e-12);
  EXPECT_NEAR(dnc::hardy_admissible_theta(DegeneracyCoefficient::power(1.0)), 1.0, 1e-12);
  // a = x^{1/2} e^x: a/x^theta increases near x = 1 for every theta <= 1.
  std::vector<double> x, v;
  for (int k = 0; k <= 64; ++k) {
    x.push_back(k / 64.0);
    v.push_back(std::sqrt(x.back()) * std::exp(x.back()));
  }
  EXPECT_THROW(dnc::hardy_admissible_theta(DegeneracyCoefficient::tabulated(x, v)),
               dnc::AdmissibilityFail);
}

TEST(Hardy, EnsembleStableUnderRefinement) {
  const auto a = DegeneracyCoefficient::power(0.5);
  const double coarse = dnc::hardy_ensemble_max(a, dnc::build_grid(64, 2, 1.0), 100, 7);
  const double fine = dnc::hardy_ensemble_max(a, dnc::build_grid(128, 2, 1.0), 100, 7);
  EXPECT_TRUE(std::isfinite(coarse));
  EXPECT_NEAR(fine, coarse, 0.1 * coarse);
}

TEST(Hardy, AmplitudeInvariant) {
  const auto g = dnc::build_grid(48, 2, 1.0);
  const auto a = DegeneracyCoefficient::power_cosine(0.3);
  auto w = dnc::random_sine_profile(g, 13);
  const double r1 = dnc::hardy_poincare_ratio(a, w, g).ratio;
  for (double& v : w) v *= -37.5;
  EXPECT_NEAR(dnc::hardy_poincare_ratio(a, w, g).ratio, r1, 1e-13 * r1);
}

class CarlemanFixture : public ::testing::Test {
 protected:
  CarlemanFixture()
      : grid(dnc::build_grid(32, 32, 1.0)),
        sys(a, grid.make_field(1.0), grid),
        fields(dnc::build_weight_fields(dnc::CarlemanParams{}, a, grid)) {}

  DegeneracyCoefficient a = DegeneracyCoefficient::power(0.5);
  dnc::ControlWindow omega{0.3, 0.8};
  dnc::SpaceTimeGrid grid;
  dnc::LinearParabolic sys;
  dnc::WeightFields fields;
};

TEST_F(CarlemanFixture, ZeroSolutionHasZeroRatio) {
  for (auto kind : {CarlemanKind::phi_weights, CarlemanKind::A_weights}) {
    const auto r = dnc::carleman_check(kind, grid.make_field(),
                                       std::vector<double>(grid.nodes(), 0.0), sys, fields, omega);
    EXPECT_TRUE(r.lhs.is_zero());
    EXPECT_EQ(r.ratio, 0.0);
    EXPECT_TRUE(r.pass);
  }
}

TEST_F(CarlemanFixture, FiniteAndAmplitudeInvariant) {
  for (auto kind : {CarlemanKind::phi_weights, CarlemanKind::A_weights}) {
    Field2D F = dnc::random_sine_field(grid, 4);
    auto vT = dnc::random_sine_profile(grid, 5);
    const auto r = dnc::carleman_check(kind, F, vT, sys, fields, omega);
    EXPECT_TRUE(std::isfinite(r.ratio));
    EXPECT_GT(r.ratio, 0.0);
    EXPECT_EQ(r.name, dnc::to_string(kind));
    F *= 1e3;
    for (double& v : vT) v *= 1e3;
    EXPECT_NEAR(dnc::carleman_check(kind, F, vT, sys, fields, omega).ratio, r.ratio,
                1e-10 * r.ratio);
  }
}

TEST_F(CarlemanFixture, EnsembleIsSeeded) {
  const auto a1 = dnc::carleman_ensemble(CarlemanKind::A_weights, sys, fields, omega, 4, 3);
  const auto a2 = dnc::carleman_ensemble(CarlemanKind::A_weights, sys, fields, omega, 4, 3);
  ASSERT_EQ(a1.size(), 4u);
  for (std::size_t k = 0; k < a1.size(); ++k) {
    EXPECT_EQ(a1[k].ratio, a2[k].ratio);
    EXPECT_EQ(a1[k].seed, dnc::member_seed(3, 2 * k));
  }
  EXPECT_NE(a1[0].ratio, a1[1].ratio);
}

TEST_F(CarlemanFixture, SweepReportsRatios) {
  const auto sw = dnc::carleman_s_sweep(CarlemanKind::phi_weights, dnc::CarlemanParams{}, a, sys,
                                        omega, {1.0, 2.0, 4.0}, 3, 3);
  ASSERT_EQ(sw.max_ratio.size(), 3u);
  for (double r : sw.max_ratio) EXPECT_TRUE(std::isfinite(r));
  EXPECT_NEAR(sw.final_over_penultimate, sw.max_ratio[2] / sw.max_ratio[1], 1e-15);
  EXPECT_THROW(dnc::carleman_s_sweep(CarlemanKind::phi_weights, dnc::CarlemanParams{}, a, sys,
                                     omega, {1.0}, 3, 3),
               dnc::InvalidArgument);
}

class ControlledPair : public ::testing::Test {
 protected:
  ControlledPair()
      : grid(dnc::build_grid(32, 32, 1.0)),
        sys(a, grid.make_field(1.0), grid),
        op(dnc::assemble_degenerate_operator(a, grid)) {
    dnc::CarlemanParams p;
    p.s = 0.01;
    p.omega_prime = dnc::default_omega_prime(omega);
    fields = dnc::build_weight_fields(p, a, grid);
    std::vector<double> u0(grid.nodes(), 0.0);
    for (int i = 1; i < grid.nx; ++i) u0[i] = std::sin(std::numbers::pi * grid.x[i]);
    const dnc::ControlProblem problem(sys, omega, grid.make_field(), u0);
    const auto r = dnc::solve_null_control(problem, fields, omega, dnc::PenaltySchedule::decades(2), {});
    u = r.u;
    h = r.h;
  }

  DegeneracyCoefficient a = DegeneracyCoefficient::power(0.5);
  dnc::ControlWindow omega{0.3, 0.8};
  dnc::SpaceTimeGrid grid;
  dnc::LinearParabolic sys;
  dnc::DegenerateOperator op;
  dnc::WeightFields fields;
  Field2D u, h;
};

TEST_F(ControlledPair, ENormZeroAndHomogeneous) {
  EXPECT_TRUE(
      dnc::e_norm(grid.make_field(), grid.make_field(), fields, op, omega, grid).is_zero());
  const auto base = dnc::e_norm(u, h, fields, op, omega, grid);
  EXPECT_TRUE(base.is_finite());
  EXPECT_FALSE(base.is_zero());
  const double kappa = 3.5;
  Field2D ku = u, kh = h;
  ku *= kappa;
  kh *= kappa;
  const auto scaled = dnc::e_norm(ku, kh, fields, op, omega, grid);
  EXPECT_NEAR(scaled.log_value() - base.log_value(), 2 * std::log(kappa),
              1e-14 * (std::abs(base.log_value()) + 1));
}

TEST_F(ControlledPair, NonlocalSupBound) {
  const auto zero = dnc::nonlocal_sup_bound(grid.make_field(), h, fields, op, omega, grid);
  EXPECT_TRUE(zero.lhs.is_zero());
  EXPECT_TRUE(zero.pass);
  const auto r = dnc::nonlocal_sup_bound(u, h, fields, op, omega, grid);
  EXPECT_FALSE(r.lhs.is_zero());
  EXPECT_TRUE(std::isfinite(r.ratio));
  EXPECT_TRUE(r.pass);
}

TEST_F(ControlledPair, Claim1WitnessFinite) {
  EXPECT_TRUE(std::isfinite(dnc::claim1_witness(fields, grid)));
  const auto g = dnc::build_grid(64, 64, 1.0);
  const auto f1 = dnc::build_weight_fields(dnc::CarlemanParams{}, a, g);
  EXPECT_TRUE(std::isfinite(dnc::claim1_witness(f1, g)));
}

TEST_F(ControlledPair, BilinearBound) {
  const auto zero =
      dnc::bilinear_bound_check(u, h, grid.make_field(), grid.make_field(), fields, op, omega, grid);
  EXPECT_TRUE(zero.lhs.is_zero());
  EXPECT_EQ(zero.ratio, 0.0);

  // Weighted quantities span tens of thousands of e-folds here, so compare logs.
  const auto same = dnc::bilinear_bound_check(u, h, u, h, fields, op, omega, grid);
  EXPECT_FALSE(same.lhs.is_zero());
  EXPECT_TRUE(same.lhs.is_finite());
  EXPECT_TRUE(same.pass);

  const double kappa = 7.0;
  Field2D ku = u, kh = h;
  ku *= kappa;
  kh *= kappa;
  const auto left = dnc::bilinear_bound_check(ku, kh, u, h, fields, op, omega, grid);
  const auto right = dnc::bilinear_bound_check(u, h, ku, kh, fields, op, omega, grid);
  const double tol = 1e-14 * std::abs(same.rhs.log_value());
  const double shift = 2 * std::log(kappa);
  EXPECT_NEAR(left.lhs.log_value() - same.lhs.log_value(), shift, tol);
  EXPECT_NEAR(right.lhs.log_value() - same.lhs.log_value(), shift, tol);
  EXPECT_NEAR(left.rhs.log_value() - same.rhs.log_value(), shift, tol);
  EXPECT_NEAR(right.rhs.log_value() - same.rhs.log_value(), shift, tol);
}

TEST(Energy, RatioFiniteAndHomogeneous) {
  const auto g = dnc::build_grid(32, 32, 1.0);
  const dnc::LinearParabolic sys(DegeneracyCoefficient::power(0.5), g.make_field(1.0), g);
  auto u0 = dnc::random_sine_profile(g, 2);
  Field2D F = dnc::random_sine_field(g, 3);
  const auto r = dnc::energy_estimate_ratio(sys, u0, F);
  EXPECT_TRUE(std::isfinite(r.ratio));
  EXPECT_GT(r.ratio, 0.0);
  for (double& v : u0) v *= 0.01;
  F *= 0.01;
  EXPECT_NEAR(dnc::energy_estimate_ratio(sys, u0, F).ratio, r.ratio, 1e-12 * r.ratio);
  EXPECT_GE(dnc::energy_ensemble_max(sys, 5, 11), 0.0);
}

TEST(VerifyCsv, Format) {
  auto r = dnc::make_report("hardy", {1.0, 0.0}, {2.0, 0.0}, 1.0);
  r.s = 1;
  r.lambda = 2;
  r.seed = 18446744073709551615ull;
  std::ostringstream os;
  dnc::write_verify_csv(os, {r});
  EXPECT_EQ(os.str(),
            "check_name,s,lambda,n,seed,lhs_log,rhs_log,ratio,pass\n"
            "hardy,1,2,0,18446744073709551615,0,0.6931471805599453,0.5,true\n");
}

}  // namespace
