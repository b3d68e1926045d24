#pragma once

#include <variant>

#include "refbill/model.hpp"
#include "refbill/types.hpp"

namespace refbill {

// Signed angle between a velocity and the normal at a boundary point, in
// [-pi/2, pi/2]. Velocities leaving D are measured from the outward normal,
// velocities entering D from the inward normal; in both cases the sign is the
// sign of the tangential component, so sin(angle) = v_hat . tangent_unit.
struct IncidenceAngle {
  double value = 0.0;
};

// Angle of a (not necessarily unit) velocity in the frame's convention.
IncidenceAngle incidence_angle(const Vec2& v, const BoundaryFrame& frame);

// Unit velocity for an angle, on the leaving (outward) or entering side.
Vec2 unit_velocity(IncidenceAngle a, const BoundaryFrame& frame, bool leaving);

// arcsin(sqrt(V_E/V_I)) at the frame position; total internal reflection
// occurs for inner angles beyond it.
double critical_angle(const PhysParams& p, const BoundaryFrame& frame);

// Inward refraction sqrt(V_I) sin a_I = sqrt(V_E) sin a_E. Always solvable
// since V_E < V_I everywhere.
IncidenceAngle refract_inward(const PhysParams& p, const BoundaryFrame& frame,
                              IncidenceAngle alpha_E);

// Outward refraction; fails with TotalReflection beyond the critical angle.
// This is a legitimate dynamical outcome (the free-fall map clamps on it),
// not an error.
struct TotalReflection {
  double sin_ratio = 0.0;  // sqrt(V_I/V_E) sin(alpha_I), |.| > 1
  Vec2 point = Vec2::Zero();
  double xi = 0.0;
};

using RefractionResult = std::variant<IncidenceAngle, TotalReflection>;

RefractionResult refract_outward(const PhysParams& p,
                                 const BoundaryFrame& frame,
                                 IncidenceAngle alpha_I);

}  // namespace refbill
