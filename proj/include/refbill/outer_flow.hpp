#pragma once

#include "refbill/model.hpp"
#include "refbill/refraction.hpp"
#include "refbill/types.hpp"

namespace refbill {

// One zero-energy harmonic arc outside D, from boundary to boundary.
// y(s) = y0 cos(omega s) + (v0/omega) sin(omega s), so the arc is closed form
// and the energy identity |y'|^2/2 + (omega^2/2)|y|^2 = E is exact.
struct OuterArc {
  double start_xi = 0.0;
  IncidenceAngle start_angle;  // from outward normal, leaving
  double end_xi = 0.0;
  IncidenceAngle end_angle;    // incoming side (from inward normal)
  double flight_time = 0.0;
  Vec2 y0 = Vec2::Zero();
  Vec2 v0 = Vec2::Zero();
  double omega = 0.0;

  Vec2 position(double s) const;
  Vec2 velocity(double s) const;
};

// Launch outward from gamma(xi0) at angle alpha0 with speed sqrt(2 V_E) and
// propagate to the first boundary crossing from outside. The full harmonic
// period 2*pi/omega bounds the flight time; an arc returning only at exactly
// that time (grazing the launch point) is accepted as a valid return.
OuterArc outer_arc(const PhysParams& p, const BoundaryCurve& curve, double xi0,
                   IncidenceAngle alpha0);

// Radial brake arc launched outward at radius rho: half flight time
// arccos(omega rho / sqrt(2E)) / omega and launch speed sqrt(2E - omega^2 rho^2).
struct OuterHomothetic {
  double half_time = 0.0;
  double launch_speed = 0.0;
};

OuterHomothetic outer_homothetic(const PhysParams& p, double rho);

}  // namespace refbill
