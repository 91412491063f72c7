#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "dnc/errors.hpp"
#include "dnc/mesh.hpp"
#include "dnc/random_fields.hpp"

namespace {

using dnc::build_grid;
using dnc::Field2D;
using dnc::LogScaled;
using dnc::TimeRule;

TEST(BuildGrid, UniformMap) {
  const auto g = build_grid(4, 2, 1.0, 1.0);
  const std::vector<double> x{0, 0.25, 0.5, 0.75, 1};
  const std::vector<double> t{0, 0.5, 1};
  EXPECT_EQ(g.x, x);
  EXPECT_EQ(g.t, t);
  EXPECT_DOUBLE_EQ(g.dt, 0.5);
}

TEST(BuildGrid, GradedMap) {
  const auto g = build_grid(2, 2, 1.0, 2.0);
  const std::vector<double> x{0, 0.25, 1};
  EXPECT_EQ(g.x, x);
}

TEST(BuildGrid, RejectsBadInputs) {
  EXPECT_THROW(build_grid(3, 1, 1.0, 1.0), dnc::InvalidArgument);
  EXPECT_THROW(build_grid(1, 4, 1.0, 1.0), dnc::InvalidArgument);
  EXPECT_THROW(build_grid(8, 4, 1.0, 0.5), dnc::InvalidArgument);
  EXPECT_THROW(build_grid(8, 4, 0.0, 1.0), dnc::InvalidArgument);
}

TEST(BuildGrid, Invariants) {
  for (double gamma : {1.0, 1.5, 2.0, 3.0}) {
    const auto g = build_grid(37, 11, 2.5, gamma);
    EXPECT_EQ(g.x.front(), 0.0);
    EXPECT_EQ(g.x.back(), 1.0);
    EXPECT_EQ(g.t.front(), 0.0);
    EXPECT_EQ(g.t.back(), 2.5);
    for (int i = 0; i < g.nx; ++i) EXPECT_LT(g.x[i], g.x[i + 1]);
    for (int j = 0; j < g.nt; ++j) EXPECT_NEAR(g.t[j + 1] - g.t[j], g.dt, 1e-14);
  }
}

TEST(IntegrateSpace, Examples) {
  const auto g = build_grid(17, 2, 1.0, 2.0);
  std::vector<double> one(g.nodes(), 1.0);
  EXPECT_NEAR(dnc::integrate_space(one, g), 1.0, 1e-14);

  const auto u = build_grid(10, 2, 1.0, 1.0);
  EXPECT_NEAR(dnc::integrate_space(u.x, u), 0.5, 1e-15);

  const auto fine = build_grid(1000, 2, 1.0, 1.0);
  std::vector<double> sq(fine.nodes());
  for (int i = 0; i < fine.nodes(); ++i) sq[i] = fine.x[i] * fine.x[i];
  EXPECT_NEAR(dnc::integrate_space(sq, fine), 1.0 / 3.0, 1e-5);
}

TEST(IntegrateSpace, LengthMismatch) {
  const auto g = build_grid(8, 2, 1.0, 1.0);
  std::vector<double> v(5, 1.0);
  EXPECT_THROW(dnc::integrate_space(v, g), dnc::InvalidArgument);
}

TEST(IntegrateSpace, AffineExactOnAnyGrid) {
  for (double gamma : {1.0, 1.7, 2.0, 4.0}) {
    for (int nx : {2, 5, 33}) {
      const auto g = build_grid(nx, 2, 1.0, gamma);
      std::vector<double> v(g.nodes());
      for (int i = 0; i < g.nodes(); ++i) v[i] = 3.0 - 7.0 * g.x[i];
      EXPECT_NEAR(dnc::integrate_space(v, g), 3.0 - 3.5, 1e-13);
    }
  }
}

TEST(IntegrateSpace, SecondOrderUnderRefinement) {
  auto error = [](int nx) {
    const auto g = build_grid(nx, 2, 1.0, 2.0);
    std::vector<double> v(g.nodes());
    for (int i = 0; i < g.nodes(); ++i) v[i] = std::exp(g.x[i]) * std::cos(3 * g.x[i]);
    // int_0^1 e^x cos 3x dx = [e^x (cos 3x + 3 sin 3x)] / 10
    const double exact = (std::exp(1.0) * (std::cos(3.0) + 3 * std::sin(3.0)) - 1.0) / 10.0;
    return std::abs(dnc::integrate_space(v, g) - exact);
  };
  double prev = error(16);
  for (int nx : {32, 64, 128}) {
    const double e = error(nx);
    EXPECT_GE(prev / e, 3.5) << "nx = " << nx;
    prev = e;
  }
}

TEST(TimeWeights, SumToHorizon) {
  for (int nt : {2, 3, 10}) {
    const auto g = build_grid(4, nt, 2.0, 1.0);
    for (auto rule : {TimeRule::interior_one_sided, TimeRule::implicit_euler}) {
      const auto w = dnc::time_weights(g, rule);
      double sum = 0.0;
      for (double v : w) sum += v;
      EXPECT_NEAR(sum, 2.0, 1e-14);
      if (rule == TimeRule::interior_one_sided) {
        EXPECT_EQ(w.front(), 0.0);
        EXPECT_EQ(w.back(), 0.0);
      }
    }
  }
}

TEST(LogWeightIntegral, ZeroWeightGivesHorizon) {
  const auto g = build_grid(8, 6, 2.0, 2.0);
  const auto r = dnc::integrate_spacetime_logweight(g.make_field(0.0), g.make_field(1.0), g);
  EXPECT_NEAR(r.value(), 2.0, 1e-13);
}

TEST(LogWeightIntegral, LargeExponentDoesNotOverflow) {
  const auto g = build_grid(8, 6, 1.0, 2.0);
  const auto r = dnc::integrate_spacetime_logweight(g.make_field(1000.0), g.make_field(1.0), g);
  EXPECT_NEAR(r.mantissa, 1.0, 1e-13);
  EXPECT_EQ(r.log_scale, 1000.0);
  EXPECT_TRUE(r.is_finite());

  const auto huge = dnc::integrate_spacetime_logweight(g.make_field(1e6), g.make_field(1.0), g);
  EXPECT_TRUE(huge.is_finite());
  EXPECT_NEAR(huge.log_value(), 1e6, 1e-9);
}

TEST(LogWeightIntegral, MatchesExtendedPrecisionSum) {
  const auto g = build_grid(32, 32, 1.0, 2.0);
  std::mt19937_64 gen(2024);
  Field2D logw = g.make_field();
  Field2D vals = g.make_field();
  for (int j = 0; j <= g.nt; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      logw(j, i) = 40.0 * std::sin(3.0 * g.t[j] + 2.0 * g.x[i]) + 5.0 * dnc::uniform01(gen);
      vals(j, i) = 1.0 + std::cos(g.x[i] * g.t[j]) + dnc::uniform01(gen);
    }
  }
  // Oracle: direct long double sum with the interior one-sided time rule
  // written out by hand (Delta t on rows 1..nt-1, plus Delta t / 2 on rows
  // 1 and nt-1).
  long double direct = 0.0L;
  for (int j = 1; j < g.nt; ++j) {
    long double tw = g.dt;
    if (j == 1 || j == g.nt - 1) tw += 0.5L * g.dt;
    for (int i = 0; i <= g.nx; ++i) {
      direct += tw * static_cast<long double>(g.node_weight[i]) *
                std::exp(static_cast<long double>(logw(j, i))) * vals(j, i);
    }
  }
  const auto r = dnc::integrate_spacetime_logweight(logw, vals, g);
  const long double got = static_cast<long double>(r.mantissa) * std::exp(static_cast<long double>(r.log_scale));
  EXPECT_LE(std::abs(got - direct) / direct, 1e-10L);
}

TEST(LogWeightIntegral, ShiftInvariance) {
  const auto g = build_grid(12, 9, 1.0, 2.0);
  Field2D logw = g.make_field();
  Field2D vals = g.make_field();
  for (int j = 0; j <= g.nt; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      logw(j, i) = 10.0 * g.x[i] - 3.0 * g.t[j];
      vals(j, i) = g.x[i] * (1.0 - g.x[i]);
    }
  }
  const auto base = dnc::integrate_spacetime_logweight(logw, vals, g);
  for (double kappa : {-700.0, 0.5, 1e4}) {
    Field2D shifted = logw;
    for (double& v : shifted.data()) v += kappa;
    const auto r = dnc::integrate_spacetime_logweight(shifted, vals, g);
    // Adding kappa to logw already rounds at the ulp of |kappa|.
    EXPECT_NEAR(r.log_value() - base.log_value(), kappa, 1e-14 * (std::abs(kappa) + 20.0));
  }
}

TEST(LogWeightIntegral, RejectsNaNAndNegative) {
  const auto g = build_grid(4, 4, 1.0, 1.0);
  Field2D vals = g.make_field(1.0);
  Field2D logw = g.make_field();
  logw(2, 2) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(dnc::integrate_spacetime_logweight(logw, vals, g), dnc::InvalidArgument);
  vals(2, 2) = -1.0;
  EXPECT_THROW(dnc::integrate_spacetime_logweight(g.make_field(), vals, g), dnc::InvalidArgument);
}

TEST(LogWeightIntegral, InfiniteWeightOnZeroValuesIsSkipped) {
  const auto g = build_grid(4, 4, 1.0, 1.0);
  Field2D logw = g.make_field();
  Field2D vals = g.make_field(1.0);
  logw(2, 0) = std::numeric_limits<double>::infinity();
  vals(2, 0) = 0.0;
  EXPECT_TRUE(dnc::integrate_spacetime_logweight(logw, vals, g).is_finite());
}

TEST(LogScaled, Arithmetic) {
  const LogScaled a{2.0, 700.0};
  const LogScaled b{3.0, 700.0};
  EXPECT_NEAR((a + b).log_value(), std::log(5.0) + 700.0, 1e-12);
  EXPECT_NEAR((a * b).log_value(), std::log(6.0) + 1400.0, 1e-12);
  EXPECT_NEAR(dnc::ratio(a, b), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(dnc::ratio(LogScaled{}, b), 0.0);
  EXPECT_TRUE((LogScaled{} + LogScaled{}).is_zero());
  EXPECT_EQ(LogScaled::from_log(-std::numeric_limits<double>::infinity()).mantissa, 0.0);
}

}  // namespace
