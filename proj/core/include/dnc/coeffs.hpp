#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dnc/mesh.hpp"

namespace dnc {

enum class DegeneracyKind { power, power_cosine, tabulated, constant };

std::string to_string(DegeneracyKind kind);

/// The degenerate diffusion coefficient a(x) on [0,1].
///
/// Analytic kinds:
///   power         a(x) = x^alpha
///   power_cosine  a(x) = x^alpha cos(arctan(alpha) x)
/// `tabulated` interpolates user samples with a cubic Hermite spline whose
/// slopes come from second-order differences (one-sided at the ends).
/// `constant` is a nondegenerate test mode and never validates.
class DegeneracyCoefficient {
 public:
  static DegeneracyCoefficient power(double alpha);
  static DegeneracyCoefficient power_cosine(double alpha);
  static DegeneracyCoefficient tabulated(std::vector<double> x, std::vector<double> a);
  static DegeneracyCoefficient constant(double value);

  double operator()(double x) const;
  double derivative(double x) const;

  DegeneracyKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  /// K known in closed form (power kind only): x a'/a = alpha identically.
  std::optional<double> exact_K() const;

 private:
  DegeneracyKind kind_ = DegeneracyKind::power;
  double alpha_ = 0.5;
  double cosine_rate_ = 0.0;
  std::vector<double> xs_;
  std::vector<double> as_;
  std::vector<double> slopes_;
};

/// Estimated degeneracy constant K = max x a'(x)/a(x) over 'samples'
/// log-spaced points of (1e-12, 1]; throws unless a is weakly degenerate.
///
/// Throws NotVanishing if a(0) != 0, NonMonotone if a' < 0 or a <= 0 is
/// sampled, WeakDegeneracyViolated if the estimate is >= 1. The power kind
/// reports its exact K without sampling.
double validate_degeneracy(const DegeneracyCoefficient& a, int samples = 10000);

/// Samples x -> x^r / a(x) on (1e-12, 1] and returns true when it is
/// nondecreasing up to relative round-off.
bool power_ratio_nondecreasing(const DegeneracyCoefficient& a, double r, int samples = 2000);

enum class NonlocalKind { constant, affine, tanh };

/// l(r) with l(0) = 1: constant (l = 1), affine (1 + slope r),
/// tanh (1 + slope tanh r).
class NonlocalFactor {
 public:
  static NonlocalFactor constant();
  static NonlocalFactor affine(double slope);
  static NonlocalFactor tanh(double slope);

  double operator()(double r) const;
  double derivative(double r) const;
  /// sup |l'| sampled on [-range, range].
  double lipschitz_bound(double range = 10.0) const;
  NonlocalKind kind() const { return kind_; }
  double slope() const { return slope_; }
  bool is_trivial() const { return kind_ == NonlocalKind::constant || slope_ == 0.0; }

 private:
  NonlocalKind kind_ = NonlocalKind::constant;
  double slope_ = 0.0;
};

/// f(t, x, u) together with its u-derivative.
class SemilinearTerm {
 public:
  using Fn = std::function<double(double t, double x, double u)>;

  SemilinearTerm(Fn value, Fn du, std::string name = "custom");

  /// f = c u
  static SemilinearTerm linear(double c);
  /// f = k sin(u)
  static SemilinearTerm sine(double k);
  /// f = r u (1 - u)
  static SemilinearTerm logistic(double r);
  /// f = sum_k coeffs[k] u^(k+1)
  static SemilinearTerm polynomial(std::vector<double> coeffs);

  double value(double t, double x, double u) const { return value_(t, x, u); }
  double du(double t, double x, double u) const { return du_(t, x, u); }
  const std::string& name() const { return name_; }
  /// True when f is exactly c(t,x) u (no nonlinear part).
  bool is_linear() const { return linear_; }

 private:
  Fn value_;
  Fn du_;
  std::string name_;
  bool linear_ = false;
};

/// Checks f(t,x,0) = 0 and that df/du stays finite and below `bound` on a
/// sample grid of [0,T] x [0,1] x [-u_range, u_range].
void validate_semilinear(const SemilinearTerm& f, double T, double u_range = 10.0,
                         double bound = 1e12);

struct ControlWindow {
  double left = 0.3;
  double right = 0.8;
  bool contains(double x) const { return x > left && x < right; }
};

struct ProblemData {
  DegeneracyCoefficient a = DegeneracyCoefficient::power(0.5);
  NonlocalFactor ell = NonlocalFactor::constant();
  SemilinearTerm f = SemilinearTerm::linear(1.0);
  ControlWindow omega;
  double T = 1.0;
  /// Initial datum on the grid nodes.
  std::vector<double> u0;
};

/// Validates every structural assumption on the data and returns the
/// estimated degeneracy constant.
double validate_problem(const ProblemData& pd, const SpaceTimeGrid& grid);

/// b(x, r) = l(r) a(x).
double eval_b(const DegeneracyCoefficient& a, const NonlocalFactor& ell, double x, double r);

/// c(t_j, x_i) = df/du(t_j, x_i, 0).
Field2D linearized_potential(const SemilinearTerm& f, const SpaceTimeGrid& grid);

}  // namespace dnc
