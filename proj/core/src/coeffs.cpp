#include "dnc/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "dnc/errors.hpp"

namespace dnc {

std::string to_string(DegeneracyKind kind) {
  switch (kind) {
    case DegeneracyKind::power: return "power";
    case DegeneracyKind::power_cosine: return "power_cosine";
    case DegeneracyKind::tabulated: return "tabulated";
    case DegeneracyKind::constant: return "constant";
  }
  return "unknown";
}

DegeneracyCoefficient DegeneracyCoefficient::power(double alpha) {
  DegeneracyCoefficient a;
  a.kind_ = DegeneracyKind::power;
  a.alpha_ = alpha;
  return a;
}

DegeneracyCoefficient DegeneracyCoefficient::power_cosine(double alpha) {
  DegeneracyCoefficient a;
  a.kind_ = DegeneracyKind::power_cosine;
  a.alpha_ = alpha;
  a.cosine_rate_ = std::atan(alpha);
  return a;
}

DegeneracyCoefficient DegeneracyCoefficient::constant(double value) {
  DegeneracyCoefficient a;
  a.kind_ = DegeneracyKind::constant;
  a.alpha_ = 0.0;
  a.as_ = {value};
  return a;
}

DegeneracyCoefficient DegeneracyCoefficient::tabulated(std::vector<double> x, std::vector<double> v) {
  if (x.size() != v.size() || x.size() < 3) {
    throw InvalidArgument("tabulated coefficient needs >= 3 matching (x, a) samples");
  }
  for (std::size_t k = 1; k < x.size(); ++k) {
    if (!(x[k] > x[k - 1])) throw InvalidArgument("tabulated coefficient: x must increase");
  }
  if (x.front() != 0.0 || x.back() != 1.0) {
    throw InvalidArgument("tabulated coefficient must cover [0,1] exactly");
  }
  DegeneracyCoefficient a;
  a.kind_ = DegeneracyKind::tabulated;
  const std::size_t n = x.size();
  a.slopes_.resize(n);
  // Second-order three-point differences; one-sided at both ends.
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t k0 = 0;
    if (k == 0) {
      k0 = 0;
    } else if (k == n - 1) {
      k0 = n - 3;
    } else {
      k0 = k - 1;
    }
    const double x0 = x[k0], x1 = x[k0 + 1], x2 = x[k0 + 2];
    const double y0 = v[k0], y1 = v[k0 + 1], y2 = v[k0 + 2];
    const double s = x[k];
    // Derivative of the Lagrange interpolant through three points.
    a.slopes_[k] = y0 * ((s - x1) + (s - x2)) / ((x0 - x1) * (x0 - x2)) +
                   y1 * ((s - x0) + (s - x2)) / ((x1 - x0) * (x1 - x2)) +
                   y2 * ((s - x0) + (s - x1)) / ((x2 - x0) * (x2 - x1));
  }
  a.xs_ = std::move(x);
  a.as_ = std::move(v);
  return a;
}

namespace {

struct HermiteSpan {
  double h, s, y0, y1, m0, m1;
};

HermiteSpan locate(const std::vector<double>& xs, const std::vector<double>& ys,
                   const std::vector<double>& ms, double x) {
  const double xc = std::clamp(x, xs.front(), xs.back());
  auto it = std::upper_bound(xs.begin(), xs.end(), xc);
  std::size_t k = static_cast<std::size_t>(std::distance(xs.begin(), it));
  k = std::clamp<std::size_t>(k, 1, xs.size() - 1) - 1;
  const double h = xs[k + 1] - xs[k];
  return {h, (xc - xs[k]) / h, ys[k], ys[k + 1], ms[k], ms[k + 1]};
}

}  // namespace

double DegeneracyCoefficient::operator()(double x) const {
  switch (kind_) {
    case DegeneracyKind::power:
      return std::pow(x, alpha_);
    case DegeneracyKind::power_cosine:
      return std::pow(x, alpha_) * std::cos(cosine_rate_ * x);
    case DegeneracyKind::constant:
      return as_.front();
    case DegeneracyKind::tabulated: {
      const auto p = locate(xs_, as_, slopes_, x);
      const double s = p.s, s2 = s * s, s3 = s2 * s;
      return (2 * s3 - 3 * s2 + 1) * p.y0 + (s3 - 2 * s2 + s) * p.h * p.m0 +
             (-2 * s3 + 3 * s2) * p.y1 + (s3 - s2) * p.h * p.m1;
    }
  }
  return 0.0;
}

double DegeneracyCoefficient::derivative(double x) const {
  switch (kind_) {
    case DegeneracyKind::power:
      return alpha_ * std::pow(x, alpha_ - 1.0);
    case DegeneracyKind::power_cosine:
      return alpha_ * std::pow(x, alpha_ - 1.0) * std::cos(cosine_rate_ * x) -
             cosine_rate_ * std::pow(x, alpha_) * std::sin(cosine_rate_ * x);
    case DegeneracyKind::constant:
      return 0.0;
    case DegeneracyKind::tabulated: {
      const auto p = locate(xs_, as_, slopes_, x);
      const double s = p.s, s2 = s * s;
      return ((6 * s2 - 6 * s) * p.y0 + (3 * s2 - 4 * s + 1) * p.h * p.m0 +
              (-6 * s2 + 6 * s) * p.y1 + (3 * s2 - 2 * s) * p.h * p.m1) /
             p.h;
    }
  }
  return 0.0;
}

std::optional<double> DegeneracyCoefficient::exact_K() const {
  if (kind_ == DegeneracyKind::power) return alpha_;
  return std::nullopt;
}

namespace {

std::vector<double> log_spaced_samples(int samples) {
  std::vector<double> xs(samples);
  for (int k = 0; k < samples; ++k) {
    xs[k] = std::pow(10.0, -12.0 + 12.0 * k / (samples - 1));
  }
  xs.back() = 1.0;
  return xs;
}

}  // namespace

double validate_degeneracy(const DegeneracyCoefficient& a, int samples) {
  if (samples < 100) throw InvalidArgument("validate_degeneracy: need at least 100 samples");

  const double a0 = a(0.0);
  if (!(std::abs(a0) <= 1e-14)) {
    throw NotVanishing("degeneracy coefficient must vanish at x = 0, got a(0) = " +
                       std::to_string(a0));
  }

  if (auto k = a.exact_K()) {
    if (*k >= 1.0) throw WeakDegeneracyViolated(*k);
    if (*k < 0.0) throw NonMonotone("power coefficient with negative exponent");
    return *k;
  }

  double k_hat = 0.0;
  for (double x : log_spaced_samples(samples)) {
    const double ax = a(x);
    const double dax = a.derivative(x);
    if (!(ax > 0.0)) {
      throw NonMonotone("degeneracy coefficient must be positive on (0,1], a(" +
                        std::to_string(x) + ") = " + std::to_string(ax));
    }
    if (dax < -1e-12 * std::max(1.0, std::abs(ax) / x)) {
      throw NonMonotone("a' < 0 detected at x = " + std::to_string(x));
    }
    k_hat = std::max(k_hat, x * dax / ax);
  }
  if (k_hat >= 1.0) throw WeakDegeneracyViolated(k_hat);
  return k_hat;
}

bool power_ratio_nondecreasing(const DegeneracyCoefficient& a, double r, int samples) {
  double prev = -std::numeric_limits<double>::infinity();
  for (double x : log_spaced_samples(samples)) {
    // Compare in log form; x^r / a(x) spans many decades.
    const double v = r * std::log(x) - std::log(a(x));
    if (v < prev - 1e-10 * std::max(1.0, std::abs(prev))) return false;
    prev = v;
  }
  return true;
}

NonlocalFactor NonlocalFactor::constant() { return {}; }

NonlocalFactor NonlocalFactor::affine(double slope) {
  NonlocalFactor ell;
  ell.kind_ = NonlocalKind::affine;
  ell.slope_ = slope;
  return ell;
}

NonlocalFactor NonlocalFactor::tanh(double slope) {
  NonlocalFactor ell;
  ell.kind_ = NonlocalKind::tanh;
  ell.slope_ = slope;
  return ell;
}

double NonlocalFactor::operator()(double r) const {
  switch (kind_) {
    case NonlocalKind::constant: return 1.0;
    case NonlocalKind::affine: return 1.0 + slope_ * r;
    case NonlocalKind::tanh: return 1.0 + slope_ * std::tanh(r);
  }
  return 1.0;
}

double NonlocalFactor::derivative(double r) const {
  switch (kind_) {
    case NonlocalKind::constant: return 0.0;
    case NonlocalKind::affine: return slope_;
    case NonlocalKind::tanh: {
      const double c = std::cosh(r);
      return slope_ / (c * c);
    }
  }
  return 0.0;
}

double NonlocalFactor::lipschitz_bound(double range) const {
  double bound = 0.0;
  constexpr int kSamples = 2001;
  for (int k = 0; k < kSamples; ++k) {
    const double r = -range + 2.0 * range * k / (kSamples - 1);
    bound = std::max(bound, std::abs(derivative(r)));
  }
  return bound;
}

SemilinearTerm::SemilinearTerm(Fn value, Fn du, std::string name)
    : value_(std::move(value)), du_(std::move(du)), name_(std::move(name)) {}

SemilinearTerm SemilinearTerm::linear(double c) {
  SemilinearTerm f([c](double, double, double u) { return c * u; },
                   [c](double, double, double) { return c; }, "linear");
  f.linear_ = true;
  return f;
}

SemilinearTerm SemilinearTerm::sine(double k) {
  return {[k](double, double, double u) { return k * std::sin(u); },
          [k](double, double, double u) { return k * std::cos(u); }, "sine"};
}

SemilinearTerm SemilinearTerm::logistic(double r) {
  return {[r](double, double, double u) { return r * u * (1.0 - u); },
          [r](double, double, double u) { return r * (1.0 - 2.0 * u); }, "logistic"};
}

SemilinearTerm SemilinearTerm::polynomial(std::vector<double> coeffs) {
  const bool linear =
      std::all_of(coeffs.begin() + std::min<std::size_t>(1, coeffs.size()), coeffs.end(),
                  [](double c) { return c == 0.0; });
  auto value = [coeffs](double, double, double u) {
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * u + coeffs[k];
    return acc * u;
  };
  auto du = [coeffs](double, double, double u) {
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * u + static_cast<double>(k + 1) * coeffs[k];
    return acc;
  };
  SemilinearTerm f(value, du, "polynomial");
  f.linear_ = linear;
  return f;
}

void validate_semilinear(const SemilinearTerm& f, double T, double u_range, double bound) {
  constexpr int kT = 11, kX = 11, kU = 41;
  for (int jt = 0; jt < kT; ++jt) {
    const double t = T * jt / (kT - 1);
    for (int ix = 0; ix < kX; ++ix) {
      const double x = static_cast<double>(ix) / (kX - 1);
      const double f0 = f.value(t, x, 0.0);
      if (std::abs(f0) > 1e-14) {
        throw CoefficientError("semilinear term must satisfy f(t,x,0) = 0; f(" +
                               std::to_string(t) + "," + std::to_string(x) +
                               ",0) = " + std::to_string(f0));
      }
      for (int iu = 0; iu < kU; ++iu) {
        const double u = -u_range + 2.0 * u_range * iu / (kU - 1);
        const double d = f.du(t, x, u);
        if (!std::isfinite(d) || std::abs(d) > bound) {
          throw UnboundedDerivative("df/du unbounded near (t,x,u) = (" + std::to_string(t) +
                                    "," + std::to_string(x) + "," + std::to_string(u) + ")");
        }
      }
    }
  }
}

double validate_problem(const ProblemData& pd, const SpaceTimeGrid& grid) {
  const double k_hat = validate_degeneracy(pd.a);

  if (std::abs(pd.ell(0.0) - 1.0) > 1e-14) {
    throw CoefficientError("nonlocal factor must satisfy l(0) = 1");
  }
  if (!std::isfinite(pd.ell.lipschitz_bound())) {
    throw UnboundedDerivative("nonlocal factor has unbounded derivative");
  }
  validate_semilinear(pd.f, pd.T);

  if (!(pd.omega.left > 0.0 && pd.omega.left < pd.omega.right && pd.omega.right < 1.0)) {
    throw InvalidArgument("control window must satisfy 0 < left < right < 1");
  }
  if (!(pd.T > 0.0) || std::abs(pd.T - grid.T) > 1e-14 * pd.T) {
    throw InvalidArgument("problem horizon T must be positive and match the grid");
  }
  if (pd.u0.size() != static_cast<std::size_t>(grid.nodes())) {
    throw InvalidArgument("initial datum must have nx+1 nodal values");
  }
  if (pd.u0.front() != 0.0 || pd.u0.back() != 0.0) {
    throw InvalidArgument("initial datum must vanish at x = 0 and x = 1");
  }
  for (double v : pd.u0) {
    if (!std::isfinite(v)) throw InvalidArgument("initial datum contains non-finite values");
  }
  return k_hat;
}

double eval_b(const DegeneracyCoefficient& a, const NonlocalFactor& ell, double x, double r) {
  return ell(r) * a(x);
}

Field2D linearized_potential(const SemilinearTerm& f, const SpaceTimeGrid& grid) {
  Field2D c = grid.make_field();
  for (int j = 0; j <= grid.nt; ++j) {
    for (int i = 0; i <= grid.nx; ++i) {
      const double v = f.du(grid.t[j], grid.x[i], 0.0);
      if (!std::isfinite(v)) throw UnboundedDerivative("df/du(t,x,0) is not finite");
      c(j, i) = v;
    }
  }
  return c;
}

}  // namespace dnc
