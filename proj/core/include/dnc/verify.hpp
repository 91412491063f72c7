#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dnc/coeffs.hpp"
#include "dnc/mesh.hpp"
#include "dnc/pde1d.hpp"
#include "dnc/weights.hpp"

namespace dnc {

struct InequalityReport {
  std::string name;
  LogScaled lhs;
  LogScaled rhs;
  double ratio = 0.0;
  double s = 0.0;
  double lambda = 0.0;
  double n = 0.0;
  std::uint64_t seed = 0;
  double cap = std::numeric_limits<double>::infinity();
  bool pass = true;
};

/// Builds a report: ratio 0 when lhs vanishes, ZeroDenominator when only
/// rhs vanishes, pass iff ratio <= cap.
InequalityReport make_report(std::string name, LogScaled lhs, LogScaled rhs,
                             double cap = std::numeric_limits<double>::infinity());

/// Smallest theta on the scan grid {0.05, 0.10, ..., 1} for which a(x)/x^theta
/// is nonincreasing on sampled points of (0,1]; AdmissibilityFail if none.
double hardy_admissible_theta(const DegeneracyCoefficient& a);

/// LHS = int (a/x^2) w^2 (trapezoid, value 0 at x = 0), RHS = int a |w'|^2
/// (midpoint a on each cell, exact for piecewise-linear w).
InequalityReport hardy_poincare_ratio(const DegeneracyCoefficient& a, std::span<const double> w,
                                      const SpaceTimeGrid& grid,
                                      double cap = std::numeric_limits<double>::infinity());

/// Max Hardy ratio over `members` seeded random sine profiles.
double hardy_ensemble_max(const DegeneracyCoefficient& a, const SpaceTimeGrid& grid, int members,
                          std::uint64_t seed);

enum class CarlemanKind { phi_weights, A_weights };
std::string to_string(CarlemanKind kind);

/// Solves v_t + L v - c v = F, v(T) = vT backward and compares
///   LHS = int W (s lambda w1 a v_x^2 + (s lambda)^2 w2 v^2)
///   RHS = int W F^2 + (s lambda)^3 int_omega W w3 v^2
/// with (W, w_k) = (e^{2 s phi}, sigma^k) or (e^{2 s A}, varsigma^k), both
/// over the interior rows.
InequalityReport carleman_check(CarlemanKind kind, const Field2D& F, std::span<const double> vT,
                                const LinearParabolic& sys, const WeightFields& fields,
                                const ControlWindow& omega,
                                double cap = std::numeric_limits<double>::infinity());

/// carleman_check over `members` seeded random (F, vT).
std::vector<InequalityReport> carleman_ensemble(CarlemanKind kind, const LinearParabolic& sys,
                                                const WeightFields& fields,
                                                const ControlWindow& omega, int members,
                                                std::uint64_t seed,
                                                double cap = std::numeric_limits<double>::infinity());

struct SweepReport {
  std::vector<double> s;
  std::vector<double> max_ratio;
  /// max_ratio.back() / max_ratio[size - 2]
  double final_over_penultimate = 0.0;
  /// True unless the max ratio grows at every step of the sweep.
  bool plateau = true;
};

/// Rebuilds the weights for every s (other parameters fixed) and records
/// the ensemble maximum of carleman_check.
SweepReport carleman_s_sweep(CarlemanKind kind, const CarlemanParams& base,
                             const DegeneracyCoefficient& a, const LinearParabolic& sys,
                             const ControlWindow& omega, const std::vector<double>& s_values,
                             int members, std::uint64_t seed);

/// ||(u,h)||_E^2 = int rho_0^2 u^2 + int rho_*^2 h^2
///               + int rho_0^2 |u_t - (a u_x)_x - h chi_omega|^2 + ||u(0)||_{H^1_a}^2
/// with the untruncated weights on the interior rows; u_t is the backward
/// difference of the implicit step.
LogScaled e_norm(const Field2D& u, const Field2D& h, const WeightFields& fields,
                 const DegenerateOperator& op, const ControlWindow& omega,
                 const SpaceTimeGrid& grid);

/// LHS = max over rows 0..nt-1 of e^{-2M/m(t)} (int u)^2, RHS = e_norm(u, h).
InequalityReport nonlocal_sup_bound(const Field2D& u, const Field2D& h, const WeightFields& fields,
                                    const DegenerateOperator& op, const ControlWindow& omega,
                                    const SpaceTimeGrid& grid,
                                    double cap = std::numeric_limits<double>::infinity());

/// max over interior rows of -2M/m(t) - 2 min_x log rho_*(t, x). Finite
/// exactly when e^{-2M/m} <= C rho_*^2 holds uniformly in t.
double claim1_witness(const WeightFields& fields, const SpaceTimeGrid& grid);

/// LHS = int rho_0^2 (int ub)^2 |(a u_x)_x|^2, RHS = E(u,h) E(ub,hb).
InequalityReport bilinear_bound_check(const Field2D& u, const Field2D& h, const Field2D& ub,
                                      const Field2D& hb, const WeightFields& fields,
                                      const DegenerateOperator& op, const ControlWindow& omega,
                                      const SpaceTimeGrid& grid,
                                      double cap = std::numeric_limits<double>::infinity());

/// Ratio of sup_t ||u||_{H^1_a}^2 + int u_t^2 + int |(a u_x)_x|^2 to
/// ||u0||_{H^1_a}^2 + int F^2 for u = forward(F, u0).
InequalityReport energy_estimate_ratio(const LinearParabolic& sys, std::span<const double> u0,
                                       const Field2D& F,
                                       double cap = std::numeric_limits<double>::infinity());

/// Max energy ratio over `members` seeded random (u0, F).
double energy_ensemble_max(const LinearParabolic& sys, int members, std::uint64_t seed);

/// Verification CSV: check_name, s, lambda, n, seed, lhs_log, rhs_log, ratio, pass.
void write_verify_csv(std::ostream& os, const std::vector<InequalityReport>& reports);

}  // namespace dnc
