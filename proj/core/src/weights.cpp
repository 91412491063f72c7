#include "dnc/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "dnc/csv.hpp"
#include "dnc/errors.hpp"

namespace dnc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double integrate_from_zero(const DegeneracyCoefficient& a, double x) {
  if (x <= 0.0) return 0.0;
  auto integrand = [&a](double y) { return y / a(y); };
  boost::math::quadrature::tanh_sinh<double> rule;
  const double v = rule.integrate(integrand, 0.0, x, 1e-14);
  if (!std::isfinite(v)) throw CoefficientError("y/a(y) is not integrable near x = 0");
  return v;
}

double integrate_between(const DegeneracyCoefficient& a, double lo, double hi) {
  auto integrand = [&a](double y) { return y / a(y); };
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, lo, hi, 15, 1e-14);
  if (!std::isfinite(v)) throw CoefficientError("quadrature of y/a(y) failed");
  return v;
}

// (y/a)' = 1/a - y a'/a^2
double side_curvature(const DegeneracyCoefficient& a, double y) {
  const double ay = a(y);
  return (1.0 - y * a.derivative(y) / ay) / ay;
}

struct QuinticBlend {
  double x0, h;
  double y0, d0, dd0, y1, d1, dd1;

  // Value, first and second derivative at x.
  void eval(double x, double& v, double& dv, double& ddv) const {
    const double s = (x - x0) / h;
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const double H0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    const double H1 = s - 6 * s3 + 8 * s4 - 3 * s5;
    const double H2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
    const double H3 = 10 * s3 - 15 * s4 + 6 * s5;
    const double H4 = -4 * s3 + 7 * s4 - 3 * s5;
    const double H5 = 0.5 * s3 - s4 + 0.5 * s5;

    const double dH0 = -30 * s2 + 60 * s3 - 30 * s4;
    const double dH1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
    const double dH2 = s - 4.5 * s2 + 6 * s3 - 2.5 * s4;
    const double dH3 = 30 * s2 - 60 * s3 + 30 * s4;
    const double dH4 = -12 * s2 + 28 * s3 - 15 * s4;
    const double dH5 = 1.5 * s2 - 4 * s3 + 2.5 * s4;

    const double ddH0 = -60 * s + 180 * s2 - 120 * s3;
    const double ddH1 = -36 * s + 96 * s2 - 60 * s3;
    const double ddH2 = 1 - 9 * s + 18 * s2 - 10 * s3;
    const double ddH3 = 60 * s - 180 * s2 + 120 * s3;
    const double ddH4 = -24 * s + 84 * s2 - 60 * s3;
    const double ddH5 = 3 * s - 12 * s2 + 10 * s3;

    const double a0 = y0, a1 = h * d0, a2 = h * h * dd0;
    const double b0 = y1, b1 = h * d1, b2 = h * h * dd1;
    v = a0 * H0 + a1 * H1 + a2 * H2 + b0 * H3 + b1 * H4 + b2 * H5;
    dv = (a0 * dH0 + a1 * dH1 + a2 * dH2 + b0 * dH3 + b1 * dH4 + b2 * dH5) / h;
    ddv = (a0 * ddH0 + a1 * ddH1 + a2 * ddH2 + b0 * ddH3 + b1 * ddH4 + b2 * ddH5) / (h * h);
  }
};

// Rounds b and l onto a common binary grid fine enough to be harmless but
// coarse enough that b - k l (k = 1, 2, 3) is computed without rounding.
void snap_pair(double& b, double& l) {
  const double top = 8.0 * std::max(std::abs(b), std::abs(l));
  if (top == 0.0) return;
  const double q = std::nextafter(top, kInf) - top;
  b = std::nearbyint(b / q) * q;
  l = std::nearbyint(l / q) * q;
}

}  // namespace

ControlWindow default_omega_prime(const ControlWindow& omega, double margin) {
  if (!(margin > 0.0 && margin < 0.5)) {
    throw InvalidArgument("omega' margin must lie in (0, 0.5)");
  }
  const double w = omega.right - omega.left;
  return {omega.left + margin * w, omega.right - margin * w};
}

void CarlemanParams::validate(const ControlWindow& omega) const {
  if (!(s > 0.0)) throw InvalidArgument("Carleman parameter s must be positive");
  if (!(lambda > 0.0)) throw InvalidArgument("Carleman parameter lambda must be positive");
  if (!(omega.left < omega_prime.left && omega_prime.left < omega_prime.right &&
        omega_prime.right < omega.right)) {
    throw InvalidArgument("omega' must be compactly contained in omega");
  }
  if (!M && !(M_fraction > 0.0 && M_fraction < 1.0)) {
    throw InvalidArgument("M_fraction must lie in (0, 1)");
  }
}

PsiTable build_psi(const DegeneracyCoefficient& a, const ControlWindow& omega_prime,
                   const SpaceTimeGrid& grid) {
  const double ap = omega_prime.left;
  const double bp = omega_prime.right;
  if (!(0.0 < ap && ap < bp && bp < 1.0)) {
    throw InvalidArgument("build_psi: need 0 < alpha' < beta' < 1");
  }

  PsiTable out;
  out.alpha_prime = ap;
  out.beta_prime = bp;
  const int n = grid.nodes();
  out.psi.resize(n);
  out.dpsi.resize(n);
  out.d2psi.resize(n);

  const QuinticBlend blend{ap,
                           bp - ap,
                           integrate_from_zero(a, ap),
                           ap / a(ap),
                           side_curvature(a, ap),
                           0.0,
                           -bp / a(bp),
                           -side_curvature(a, bp)};

  for (int i = 0; i < n; ++i) {
    const double x = grid.x[i];
    if (x < ap) {
      out.psi[i] = integrate_from_zero(a, x);
      if (x == 0.0) {
        out.dpsi[i] = 0.0;
        out.d2psi[i] = a(0.0) == 0.0 ? kInf : 1.0 / a(0.0);
      } else {
        out.dpsi[i] = x / a(x);
        out.d2psi[i] = side_curvature(a, x);
      }
    } else if (x > bp) {
      out.psi[i] = -integrate_between(a, bp, x);
      out.dpsi[i] = -x / a(x);
      out.d2psi[i] = -side_curvature(a, x);
    } else {
      blend.eval(x, out.psi[i], out.dpsi[i], out.d2psi[i]);
    }
  }

  double sup = std::max(std::abs(blend.y0), integrate_between(a, bp, 1.0));
  for (double v : out.psi) sup = std::max(sup, std::abs(v));
  constexpr int kScan = 2001;
  for (int k = 0; k < kScan; ++k) {
    double v = 0.0, dv = 0.0, ddv = 0.0;
    blend.eval(ap + (bp - ap) * k / (kScan - 1), v, dv, ddv);
    sup = std::max(sup, std::abs(v));
  }
  out.sup_norm = sup;
  return out;
}

double eval_m(double t, double T) {
  const double head = std::max(0.5 * T - t, 0.0);
  const double tail = T - t;
  return (std::pow(t, 4) + std::pow(head, 4)) * std::pow(tail, 4);
}

WeightFields build_weight_fields(const CarlemanParams& params, const DegeneracyCoefficient& a,
                                 const SpaceTimeGrid& grid) {
  if (!(params.s > 0.0) || !(params.lambda > 0.0)) {
    throw InvalidArgument("build_weight_fields: s and lambda must be positive");
  }
  WeightFields w;
  w.s = params.s;
  w.lambda = params.lambda;
  w.T = grid.T;
  w.omega_prime = params.omega_prime;
  w.psi = build_psi(a, params.omega_prime, grid);

  const int nx = grid.nodes();
  const int nt = grid.times();
  const double lam = params.lambda;
  const double top = std::exp(3.0 * lam * w.psi.sup_norm);

  w.eta.resize(nx);
  w.beta.resize(nx);
  std::vector<double> log_eta(nx);
  for (int i = 0; i < nx; ++i) {
    log_eta[i] = lam * (w.psi.sup_norm + w.psi.psi[i]);
    w.eta[i] = std::exp(log_eta[i]);
    w.beta[i] = w.eta[i] - top;
  }
  w.beta_bar = *std::max_element(w.beta.begin(), w.beta.end());
  w.M = params.M.value_or(params.M_fraction * params.s * w.beta_bar);
  if (!(params.s * w.beta_bar < w.M && w.M < 0.0)) {
    throw InvalidArgument("M must satisfy s * beta_bar < M < 0");
  }

  const double T = grid.T;
  w.theta.resize(nt);
  w.m.resize(nt);
  w.tau.resize(nt);
  for (int j = 0; j < nt; ++j) {
    const double t = grid.t[j];
    const double base = t * (T - t);
    w.theta[j] = base > 0.0 ? 1.0 / std::pow(base, 4) : kInf;
    w.m[j] = eval_m(t, T);
    w.tau[j] = w.m[j] > 0.0 ? 1.0 / w.m[j] : kInf;
  }

  w.log_sigma = grid.make_field();
  w.phi = grid.make_field();
  w.log_vs = grid.make_field();
  w.A = grid.make_field();
  w.log_rho = grid.make_field();
  w.log_rho0 = grid.make_field();
  w.log_rhohat = grid.make_field();
  w.log_rhostar = grid.make_field();

  for (int j = 0; j < nt; ++j) {
    const bool theta_finite = std::isfinite(w.theta[j]);
    const bool tau_finite = std::isfinite(w.tau[j]);
    const double log_theta = theta_finite ? std::log(w.theta[j]) : kInf;
    const double log_tau = tau_finite ? -std::log(w.m[j]) : kInf;
    for (int i = 0; i < nx; ++i) {
      w.log_sigma(j, i) = log_theta + log_eta[i];
      w.phi(j, i) = theta_finite ? w.theta[j] * w.beta[i] : -kInf;
      w.log_vs(j, i) = log_tau + log_eta[i];
      if (!tau_finite) {
        w.A(j, i) = -kInf;
        w.log_rho(j, i) = kInf;
        w.log_rho0(j, i) = kInf;
        w.log_rhohat(j, i) = kInf;
        w.log_rhostar(j, i) = kInf;
        continue;
      }
      w.A(j, i) = w.tau[j] * w.beta[i];
      double b = -params.s * w.A(j, i);
      double l = w.log_vs(j, i);
      snap_pair(b, l);
      w.log_rho(j, i) = b;
      w.log_rho0(j, i) = b - l;
      w.log_rhohat(j, i) = b - 2.0 * l;
      w.log_rhostar(j, i) = b - 3.0 * l;
    }
  }
  return w;
}

void build_truncated_fields(WeightFields& fields, double n, const ControlWindow& omega,
                            const SpaceTimeGrid& grid) {
  if (!(n >= 1.0)) throw InvalidArgument("build_truncated_fields: n must be >= 1");
  const int nx = grid.nodes();
  const int nt = grid.times();
  const double T = grid.T;
  const double log_n = std::log(n);

  fields.n = n;
  fields.A_n = grid.make_field();
  fields.log_vs_n = grid.make_field();
  fields.log_rho_n = grid.make_field();
  fields.log_rho0_n = grid.make_field();
  fields.log_rhostar_n = grid.make_field();

  for (int j = 0; j < nt; ++j) {
    const double t = grid.t[j];
    const double head = std::max(0.5 * T - t, 0.0);
    const double mt = std::pow(t, 4) + std::pow(head, 4);
    const double d = std::pow(T - t, 4) + 1.0 / n;
    const double log_md = std::log(mt) + std::log(d);
    for (int i = 0; i < nx; ++i) {
      const double An = fields.beta[i] / (mt * d);
      const double lvs = std::log(fields.eta[i]) - log_md;
      fields.A_n(j, i) = An;
      fields.log_vs_n(j, i) = lvs;
      fields.log_rho_n(j, i) = -fields.s * An;
      fields.log_rho0_n(j, i) = -fields.s * An - lvs;
      fields.log_rhostar_n(j, i) =
          fields.log_rhostar(j, i) + (omega.contains(grid.x[i]) ? 0.0 : log_n);
    }
  }
}

void write_weights_csv(std::ostream& os, const WeightFields& fields, const SpaceTimeGrid& grid) {
  CsvWriter csv(os, {"t", "x", "psi", "theta", "m", "A", "log_rho", "log_rho0", "log_rhohat",
                     "log_rhostar"});
  for (int j = 0; j < grid.times(); ++j) {
    for (int i = 0; i < grid.nodes(); ++i) {
      csv.field(grid.t[j])
          .field(grid.x[i])
          .field(fields.psi.psi[i])
          .field(fields.theta[j])
          .field(fields.m[j])
          .field(fields.A(j, i))
          .field(fields.log_rho(j, i))
          .field(fields.log_rho0(j, i))
          .field(fields.log_rhohat(j, i))
          .field(fields.log_rhostar(j, i));
      csv.end_row();
    }
  }
}

}  // namespace dnc
