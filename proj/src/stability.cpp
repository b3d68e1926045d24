#include "refbill/stability.hpp"

#include <cmath>

namespace refbill {

namespace {

struct PointData {
  double rho, k, sE, sI, vE;
};

PointData point_data(const PhysParams& p, const BoundaryFrame& f) {
  const double vE = outer_potential(p, f.position);
  if (vE <= 0.0) throw OutsideHill("homothetic point outside the Hill region");
  const double vI = inner_potential(p, f.position);
  return {f.radius, f.curvature, std::sqrt(vE), std::sqrt(vI), vE};
}

void require_homothetic(const BoundaryFrame& f) {
  const double c = std::abs(f.position.dot(f.tangent_unit)) / f.radius;
  if (c > 1e-9)
    throw NotHomothetic("frame is not orthogonal to the radial direction");
}

Vec2 axis_point(double e, Axis which) {
  return which == Axis::axis0 ? Vec2(1.0, 0.0)
                              : Vec2(0.0, std::sqrt(1.0 - e * e));
}

}  // namespace

DerivQuadruple quadruple_general(const PhysParams& p,
                                 const BoundaryFrame& frame) {
  require_homothetic(frame);
  const PointData d = point_data(p, frame);
  DerivQuadruple q;
  q.E0 = p.energy / (2.0 * d.rho * d.sE);
  q.eps_E = (d.rho * d.k - 1.0) * d.sE / d.rho;
  q.I0 = -p.mu / (4.0 * d.rho * d.rho * d.sI);
  q.eps_I = -(d.k - 1.0 / d.rho) * d.sI;
  return q;
}

DerivQuadruple quadruple_elliptic(const PhysParams& p, double e, Axis which) {
  const double b2 = 1.0 - e * e;
  const Vec2 z = axis_point(e, which);
  const double sE = std::sqrt(outer_potential(p, z));
  const double sI = std::sqrt(inner_potential(p, z));
  DerivQuadruple q;
  if (which == Axis::axis0) {
    q.E0 = b2 * p.energy / (2.0 * sE);
    q.eps_E = e * e * sE;
    q.I0 = -b2 * p.mu / (4.0 * sI);
    q.eps_I = -e * e * sI;
  } else {
    const double sb = std::sqrt(b2);
    q.E0 = p.energy / (2.0 * sb * sE);
    q.eps_E = -(e * e / sb) * sE;
    q.I0 = -p.mu / (4.0 * b2 * sI);
    q.eps_I = (e * e / sb) * sI;
  }
  return q;
}

Mat2 jacobian_DF(const DerivQuadruple& q, double VE_at_point) {
  if (q.E0 * q.I0 == 0.0)
    throw DegenerateQuadruple("jacobian_DF: E0*I0 must be nonzero");
  const double sV = std::sqrt(VE_at_point);
  const double E0 = q.E0, eE = q.eps_E, I0 = q.I0, eI = q.eps_I;
  Mat2 A;
  A(0, 0) = 1.0 + (2.0 * eE + eI) / I0 + eE * (eE + eI + I0) / (E0 * I0);
  A(0, 1) = sV * (1.0 / I0 + 1.0 / E0) + sV * (eE + eI) / (E0 * I0);
  A(1, 0) = (2.0 * eE * (eI + I0) + eI * (eI + 2.0 * I0)) / (I0 * sV) +
            eE * (eE * (eI + I0) + eI * (eI + 2.0 * I0)) / (E0 * I0 * sV);
  A(1, 1) = 1.0 + eE / E0 + eI * (2.0 * I0 + eI + E0 + eE) / (E0 * I0);
  return A;
}

Mat2 jacobian_at(const PhysParams& p, const BoundaryCurve& curve, double xi) {
  const BoundaryFrame f = boundary_frame(curve, xi);
  const DerivQuadruple q = quadruple_general(p, f);
  Mat2 A = jacobian_DF(q, outer_potential(p, f.position));
  // arc-length DF conjugated into the curve's own parameter coordinates
  A(0, 1) /= f.speed;
  A(1, 0) *= f.speed;
  return A;
}

double discriminant_general(const PhysParams& p, const BoundaryFrame& frame) {
  require_homothetic(frame);
  const PointData d = point_data(p, frame);
  const double rk1 = d.rho * d.k - 1.0;
  const double A = 16.0 / (p.energy * p.energy * p.mu * p.mu) *
                   (d.sI - d.sE) * rk1;
  const double B = p.energy - rk1 * (d.sI - d.sE) * d.sE;
  const double C = -p.mu * d.sE + 2.0 * d.rho * B * d.sI;
  const double D = p.mu + 2.0 * d.rho * rk1 * d.sI * (d.sI - d.sE);
  return A * B * C * D;
}

double discriminant_elliptic(const PhysParams& p, double e, Axis which) {
  const double b2 = 1.0 - e * e;
  const Vec2 z = axis_point(e, which);
  const double sE = std::sqrt(outer_potential(p, z));
  const double sI = std::sqrt(inner_potential(p, z));
  const double E = p.energy, mu = p.mu, e2 = e * e;
  if (which == Axis::axis0) {
    const double A = -16.0 / (E * E * mu * mu) * (e2 / b2) * (sE - sI);
    const double B = mu + 2.0 * (e2 / b2) * sI * (sI - sE);
    const double C = E + (e2 / b2) * sE * (sE - sI);
    const double D = -mu * sE + 2.0 * sI * C;
    return A * B * C * D;
  }
  const double sb = std::sqrt(b2);
  const double A = 16.0 * e2 / (E * E * mu * mu) * (sE - sI);
  const double B = mu - 2.0 * e2 * sb * sI * (sI - sE);
  const double C = E - e2 * sE * (sE - sI);
  const double D = -mu * sE + 2.0 * sb * sI * C;
  return A * B * C * D;
}

double small_e_coefficient(const PhysParams& p) {
  const double sE = std::sqrt(p.energy - 0.5 * p.omega * p.omega);
  const double sI = std::sqrt(p.energy + p.h + p.mu);
  return -16.0 * (sE - sI) * (2.0 * p.energy * sI - p.mu * sE) /
         (p.mu * p.energy);
}

namespace {

Classification classify(const PhysParams& p, const BoundaryFrame& f,
                        double Delta) {
  // degeneracy band scaled by the absolute factor product
  const PointData d = point_data(p, f);
  const double rk1 = std::abs(d.rho * d.k - 1.0);
  const double A =
      16.0 / (p.energy * p.energy * p.mu * p.mu) * (d.sI + d.sE) * rk1;
  const double B = p.energy + rk1 * (d.sI + d.sE) * d.sE;
  const double C = p.mu * d.sE + 2.0 * d.rho * B * d.sI;
  const double D = p.mu + 2.0 * d.rho * rk1 * d.sI * (d.sI + d.sE);
  const double scale = std::max(1.0, A * B * C * D);
  if (std::abs(Delta) < 1e-10 * scale) return Classification::degenerate;
  return Delta > 0.0 ? Classification::saddle : Classification::center;
}

}  // namespace

StabilityReport stability_report(const PhysParams& p,
                                 const BoundaryCurve& curve, double xi) {
  const BoundaryFrame f = boundary_frame(curve, xi);
  StabilityReport r;
  r.quadruple = quadruple_general(p, f);
  r.DF = jacobian_DF(r.quadruple, outer_potential(p, f.position));
  r.trace = r.DF.trace();
  r.det = r.DF.determinant();
  r.Delta = discriminant_general(p, f);
  r.classification = classify(p, f, r.Delta);
  return r;
}

StabilityReport stability_report_elliptic(const PhysParams& p, double e,
                                          Axis which) {
  const EllipseBoundary ell(e);
  const double xi = which == Axis::axis0 ? 0.0 : half_pi;
  const BoundaryFrame f = boundary_frame(ell, xi);
  StabilityReport r;
  r.quadruple = quadruple_elliptic(p, e, which);
  r.DF = jacobian_DF(r.quadruple, outer_potential(p, f.position));
  r.trace = r.DF.trace();
  r.det = r.DF.determinant();
  r.Delta = discriminant_elliptic(p, e, which);
  r.classification = classify(p, f, r.Delta);
  return r;
}

double parabola_p(double E, double omega, double mu) {
  return (2.0 * E - omega * omega) / (8.0 * E * E) * mu * mu - mu - E;
}

double limit_l0(double b, double h, double mu, double omega) {
  const double b2 = b * b, om2 = omega * omega;
  return (b2 - 1.0) * (2.0 * h + 2.0 * mu + om2) *
         (2.0 * (b2 - 1.0) * h - 2.0 * mu + (b2 - 1.0) * om2) /
         (b2 * b2 * mu * mu);
}

double limit_l1(double b, double h, double mu, double omega) {
  const double b2 = b * b, om2 = omega * omega;
  return b * (b2 - 1.0) * (2.0 * b * h + 2.0 * mu + b2 * b * om2) *
         (2.0 * (b2 - 1.0) * h + b * (2.0 * mu + b * (b2 - 1.0) * om2)) /
         (mu * mu);
}

double mu_doublebar(double b, double h, double omega) {
  // positivity threshold of l1 from its factorization: the last factor
  // vanishes at mu = (1 - b^2)(2h + b^2 omega^2)/(2b)
  return (1.0 - b * b) * (2.0 * h + b * b * omega * omega) / (2.0 * b);
}

double mu_bar_brake(double E, double omega, double e) {
  const double e2 = e * e;
  const double om2 = omega * omega;
  return e2 * std::pow(1.0 - e2, 1.5) * (2.0 * E - e2 * om2) /
         ((2.0 * e2 - 1.0) * (2.0 * e2 - 1.0));
}

double h_bar_brake(double E, double omega, double mu, double e) {
  const double e2 = e * e;
  const double sb = std::sqrt(1.0 - e2);
  const double om2 = omega * omega;
  const double lin =
      -2.0 * E - (4.0 * e2 - 2.0) * mu / (e2 * sb) - (1.0 - e2) * om2;
  const double rad = std::sqrt((2.0 * E - (1.0 - e2) * om2) *
                               (4.0 * mu - e2 * sb * ((1.0 - e2) * om2 - 2.0 * E)) /
                               (e2 * sb));
  return 0.25 * (lin + rad);
}

RegimeThresholds regime_thresholds(const PhysParams& p, double e) {
  const double b = std::sqrt(1.0 - e * e);
  RegimeThresholds t;
  t.parabola_at_mu = parabola_p(p.energy, p.omega, p.mu);
  t.ell0 = limit_l0(b, p.h, p.mu, p.omega);
  t.ell1 = limit_l1(b, p.h, p.mu, p.omega);
  t.mu_bar_brake = mu_bar_brake(p.energy, p.omega, e);
  t.h_bar_brake = h_bar_brake(p.energy, p.omega, p.mu, e);
  t.mu_doublebar = mu_doublebar(b, p.h, p.omega);
  return t;
}

double brake_shooting_det(const PhysParams& p, double e) {
  const double b = std::sqrt(1.0 - e * e);
  return p.mu * std::sqrt(p.energy - 0.5 * p.omega * p.omega * b * b) /
         (4.0 * b * b * b * std::sqrt(p.energy + p.h + p.mu / b));
}

BrakeDerivatives brake_derivatives(const PhysParams& p, double e) {
  if (!(e > 0.0) || !(e < 1.0))
    throw ConfigError("brake_derivatives: eccentricity must lie in (0,1)");
  const double b = std::sqrt(1.0 - e * e);

  // First-order chain through the exact axis geometry: theta -> xi0 -> entry
  // angle -> refraction -> inner generating-function leg -> refraction ->
  // deflection from the radial direction.
  auto chain = [&](Axis ax) {
    const DerivQuadruple q = quadruple_elliptic(p, e, ax);
    const Vec2 z = axis_point(e, ax);
    const double sVI = std::sqrt(inner_potential(p, z));
    const double sVE = std::sqrt(outer_potential(p, z));
    const double r = sVE / sVI;
    const double L = ax == Axis::axis0 ? b : 1.0;  // |gamma'| at the vertex
    double dxi0, nu_p, th_p, daE;
    if (ax == Axis::axis0) {
      dxi0 = 1.0 / b;
      nu_p = 1.0 / b;  // normal-direction angle rate
      th_p = b;        // polar-angle rate
      daE = (1.0 - b * b) / (b * b);
    } else {
      dxi0 = b;
      nu_p = b;
      th_p = 1.0 / b;
      daE = b * b - 1.0;
    }
    const double daI = r * daE;
    const double Iq = q.I0, eIq = q.eps_I;
    const double dxi1 = ((Iq + eIq) * dxi0 + sVI * L * daI) / Iq;
    const double dbeta = (-Iq * dxi0 + (Iq + eIq) * dxi1) / (sVI * L);
    return (nu_p - th_p) * dxi1 + dbeta / r;
  };

  return {chain(Axis::axis0), chain(Axis::axis1)};
}

ConvexityStatus convexity_for_hyperbolae(const PhysParams& p, double e) {
  if (e < 1.0 / std::sqrt(2.0)) return ConvexityStatus::certified_true;
  const double b = std::sqrt(1.0 - e * e);
  const double b2 = b * b;
  if (2.0 * b2 * ((p.energy + p.h) * b / p.mu + 1.0) > 1.0)
    return ConvexityStatus::condition_true;
  return ConvexityStatus::unknown;
}

}  // namespace refbill
