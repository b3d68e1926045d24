#include "refbill/outer_flow.hpp"

#include <cmath>

#include "refbill/rootfind.hpp"

namespace refbill {

Vec2 OuterArc::position(double s) const {
  return y0 * std::cos(omega * s) + (v0 / omega) * std::sin(omega * s);
}

Vec2 OuterArc::velocity(double s) const {
  return -y0 * omega * std::sin(omega * s) + v0 * std::cos(omega * s);
}

OuterArc outer_arc(const PhysParams& p, const BoundaryCurve& curve, double xi0,
                   IncidenceAngle alpha0) {
  if (std::abs(std::abs(alpha0.value) - half_pi) < 1e-9)
    throw TangentialLaunch("outer_arc: launch tangent to the boundary");

  const BoundaryFrame f0 = boundary_frame(curve, xi0);
  const double vE = outer_potential(p, f0.position);
  if (vE <= 0.0) throw OutsideHill("outer_arc: launch point outside the Hill region");

  OuterArc arc;
  arc.start_xi = wrap_angle(xi0);
  arc.start_angle = alpha0;
  arc.omega = p.omega;
  arc.y0 = f0.position;
  arc.v0 = std::sqrt(2.0 * vE) * unit_velocity(alpha0, f0, /*leaving=*/true);

  const double period = two_pi / p.omega;
  auto G = [&](double s) { return curve.implicit(arc.position(s)); };

  CrossingScan scan;
  scan.n_grid = 2048;
  scan.from_positive = true;
  auto root = first_crossing(G, period, scan);
  if (!root) {
    // full-period grazing return to the launch point
    if (std::abs(G(period)) < 1e-9) {
      arc.flight_time = period;
      arc.end_xi = arc.start_xi;
      arc.end_angle = alpha0;  // velocity repeats; not an entering state
      return arc;
    }
    throw CrossingNotBracketed("outer_arc: no boundary crossing within one period");
  }

  arc.flight_time = *root;
  const Vec2 z1 = arc.position(arc.flight_time);
  arc.end_xi = curve.invert_point(z1);
  const BoundaryFrame f1 = boundary_frame(curve, arc.end_xi);
  arc.end_angle = incidence_angle(arc.velocity(arc.flight_time), f1);
  return arc;
}

OuterHomothetic outer_homothetic(const PhysParams& p, double rho) {
  const double v2 = 2.0 * p.energy - p.omega * p.omega * rho * rho;
  if (!(rho > 0.0) || !(v2 > 0.0))
    throw OutsideHill("outer_homothetic: rho outside (0, sqrt(2E)/omega)");
  OuterHomothetic h;
  h.half_time = std::acos(p.omega * rho / std::sqrt(2.0 * p.energy)) / p.omega;
  h.launch_speed = std::sqrt(v2);
  return h;
}

}  // namespace refbill
