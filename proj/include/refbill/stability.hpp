#pragma once

#include "refbill/model.hpp"
#include "refbill/types.hpp"

namespace refbill {

// Canonical decomposition of the second derivatives of the outer and inner
// generating functions at a homothetic point: diagonal entries E0 + eps_E and
// I0 + eps_I, cross entries -E0 and -I0. The eps terms vanish on the circle.
struct DerivQuadruple {
  double E0 = 0.0;
  double eps_E = 0.0;
  double I0 = 0.0;
  double eps_I = 0.0;
};

// Arc-length-normalized quadruple at a homothetic frame:
//   E0 = E/(2 rho sqrt(V_E)),     eps_E = (rho k - 1) sqrt(V_E)/rho,
//   I0 = -mu/(4 rho^2 sqrt(V_I)), eps_I = -(k - 1/rho) sqrt(V_I).
// Throws NotHomothetic unless gamma(xi) is orthogonal to the tangent.
DerivQuadruple quadruple_general(const PhysParams& p,
                                 const BoundaryFrame& frame);

enum class Axis { axis0, axis1 };  // major-axis vertex (1,0) / minor (0,b)

// The elliptic quadruples in the (cos xi, b sin xi) parametrization.
DerivQuadruple quadruple_elliptic(const PhysParams& p, double e, Axis which);

// DF at the homothetic fixed point from a quadruple, entries in the
// parametrization the quadruple belongs to (arc length for
// quadruple_general). det = 1 identically.
Mat2 jacobian_DF(const DerivQuadruple& q, double VE_at_point);

// DF in the curve's own parameter coordinates, ready for comparison with
// finite differences of the simulated map: the arc-length DF conjugated by
// diag(|gamma'(xi)|, 1).
Mat2 jacobian_at(const PhysParams& p, const BoundaryCurve& curve, double xi);

// Stability discriminant Delta = A*B*C*D at a homothetic frame. Equals
// trace(DF)^2 - 4. Delta > 0: saddle, Delta < 0: center.
double discriminant_general(const PhysParams& p, const BoundaryFrame& frame);

// The elliptic factorizations Delta^(0) / Delta^(1) at the two axis vertices.
double discriminant_elliptic(const PhysParams& p, double e, Axis which);

// Leading small-eccentricity coefficient: Delta^(0) = f2 e^2 + O(e^4) and
// Delta^(1) = -f2 e^2 + O(e^4).
double small_e_coefficient(const PhysParams& p);

enum class Classification { center, saddle, degenerate };

struct StabilityReport {
  DerivQuadruple quadruple;
  Mat2 DF = Mat2::Identity();
  double trace = 2.0;
  double det = 1.0;
  double Delta = 0.0;
  Classification classification = Classification::degenerate;
};

StabilityReport stability_report(const PhysParams& p, const BoundaryCurve& curve,
                                 double xi);
StabilityReport stability_report_elliptic(const PhysParams& p, double e,
                                          Axis which);

// Asymptotic thresholds of the elliptic stability analysis.
double parabola_p(double E, double omega, double mu);     // h = p(mu) regime split
double limit_l0(double b, double h, double mu, double omega);  // lim_{E->inf} Delta^(0)
double limit_l1(double b, double h, double mu, double omega);  // lim_{E->inf} Delta^(1)
double mu_doublebar(double b, double h, double omega);    // l1 > 0 iff mu below it
double mu_bar_brake(double E, double omega, double e);
double h_bar_brake(double E, double omega, double mu, double e);

struct RegimeThresholds {
  double parabola_at_mu = 0.0;
  double ell0 = 0.0;
  double ell1 = 0.0;
  double mu_bar_brake = 0.0;
  double h_bar_brake = 0.0;
  double mu_doublebar = 0.0;
};

RegimeThresholds regime_thresholds(const PhysParams& p, double e);

// Determinant of the shooting matrix behind the brake-orbit existence
// argument, mu sqrt(E - omega^2 b^2 / 2) / (4 b^3 sqrt(E + h + mu/b)); positive
// throughout the admissible range.
double brake_shooting_det(const PhysParams& p, double e);

// Derivatives of the free-fall map at the axis directions, in closed form
// (first-order chain through the exact ellipse geometry, the refraction law
// and the inner generating-function quadruple).
struct BrakeDerivatives {
  double delta_prime_0 = 0.0;
  double delta_prime_half_pi = 0.0;
};

BrakeDerivatives brake_derivatives(const PhysParams& p, double e);

// Convexity for hyperbolae: certified for e < 1/sqrt(2); otherwise the
// sufficient curvature bound 2 b^2 ((E+h) b / mu + 1) > 1 is checked.
enum class ConvexityStatus { certified_true, condition_true, unknown };

ConvexityStatus convexity_for_hyperbolae(const PhysParams& p, double e);

}  // namespace refbill
