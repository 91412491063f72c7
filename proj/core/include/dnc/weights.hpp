#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "dnc/coeffs.hpp"
#include "dnc/mesh.hpp"

namespace dnc {

/// Interior window (alpha', beta') of omega with equal margins of
/// `margin` times the width of omega on both sides.
ControlWindow default_omega_prime(const ControlWindow& omega, double margin = 0.25);

struct CarlemanParams {
  double s = 1.0;
  double lambda = 2.0;
  ControlWindow omega_prime{0.425, 0.675};
  /// M = M_fraction * s * beta_bar unless set explicitly.
  double M_fraction = 0.5;
  std::optional<double> M;

  void validate(const ControlWindow& omega) const;
};

/// The spatial profile psi with its first two derivatives on the nodes.
struct PsiTable {
  double alpha_prime = 0.0;
  double beta_prime = 0.0;
  std::vector<double> psi;
  std::vector<double> dpsi;
  std::vector<double> d2psi;
  /// sup |psi| over [0,1]: nodes, junctions and a dense scan of the blend.
  double sup_norm = 0.0;
};

/// psi(x) = int_0^x y/a(y) dy left of alpha', -int_{beta'}^x y/a(y) dy right
/// of beta', and the quintic Hermite blend matching value, slope and
/// curvature at both junctions in between.
PsiTable build_psi(const DegeneracyCoefficient& a, const ControlWindow& omega_prime,
                   const SpaceTimeGrid& grid);

/// m(t) = [t^4 + max(T/2 - t, 0)^4] (T - t)^4.
double eval_m(double t, double T);

/// Tabulated weights. Rows follow the grid's time rows; wherever a weight
/// is unbounded (t = 0 for theta, t = T for theta and tau) the log-values
/// hold +-infinity and the corresponding phi/A hold -infinity.
struct WeightFields {
  double s = 0.0;
  double lambda = 0.0;
  double T = 0.0;
  ControlWindow omega_prime;
  PsiTable psi;
  std::vector<double> eta;   ///< e^{lambda(|psi| + psi)} per node
  std::vector<double> beta;  ///< eta - e^{3 lambda |psi|} per node, negative
  double beta_bar = 0.0;     ///< max beta
  double M = 0.0;

  std::vector<double> theta;  ///< 1/[t(T-t)]^4 per row
  std::vector<double> m;      ///< m(t) per row
  std::vector<double> tau;    ///< 1/m per row

  Field2D log_sigma;  ///< log(theta eta)
  Field2D phi;        ///< theta beta
  Field2D log_vs;     ///< log(tau eta)
  Field2D A;          ///< tau beta
  Field2D log_rho;
  Field2D log_rho0;
  Field2D log_rhohat;
  Field2D log_rhostar;

  /// Truncated layer for penalty index `n` (empty until filled).
  double n = 0.0;
  Field2D A_n;
  Field2D log_vs_n;
  Field2D log_rho_n;
  Field2D log_rho0_n;
  Field2D log_rhostar_n;

  bool has_truncation() const { return n >= 1.0; }
};

WeightFields build_weight_fields(const CarlemanParams& params, const DegeneracyCoefficient& a,
                                 const SpaceTimeGrid& grid);

/// Fills the n-truncated layer. The truncation is finite on every row:
/// A_n = beta / ([t^4 + (T/2-t)_+^4] ((T-t)^4 + 1/n)), which equals
/// n beta / T^4 at t = T.
void build_truncated_fields(WeightFields& fields, double n, const ControlWindow& omega,
                            const SpaceTimeGrid& grid);

/// CSV dump: t, x, psi, theta, m, A, log_rho, log_rho0, log_rhohat, log_rhostar.
void write_weights_csv(std::ostream& os, const WeightFields& fields, const SpaceTimeGrid& grid);

}  // namespace dnc
