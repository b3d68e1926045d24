#include "refbill/refraction.hpp"

#include <algorithm>
#include <cmath>

namespace refbill {

IncidenceAngle incidence_angle(const Vec2& v, const BoundaryFrame& frame) {
  const double s = std::clamp(v.dot(frame.tangent_unit) / v.norm(), -1.0, 1.0);
  return IncidenceAngle{std::asin(s)};
}

Vec2 unit_velocity(IncidenceAngle a, const BoundaryFrame& frame, bool leaving) {
  const double c = std::cos(a.value);
  const double s = std::sin(a.value);
  const Vec2 n = leaving ? frame.outward_normal_unit
                         : Vec2(-frame.outward_normal_unit);
  return c * n + s * frame.tangent_unit;
}

double critical_angle(const PhysParams& p, const BoundaryFrame& frame) {
  const double vE = outer_potential(p, frame.position);
  if (vE <= 0.0) throw OutsideHill("critical_angle: frame outside the Hill region");
  const double vI = inner_potential(p, frame.position);
  return std::asin(std::sqrt(vE / vI));
}

IncidenceAngle refract_inward(const PhysParams& p, const BoundaryFrame& frame,
                              IncidenceAngle alpha_E) {
  const double vE = outer_potential(p, frame.position);
  const double vI = inner_potential(p, frame.position);
  const double s = std::sqrt(vE / vI) * std::sin(alpha_E.value);
  return IncidenceAngle{std::asin(std::clamp(s, -1.0, 1.0))};
}

RefractionResult refract_outward(const PhysParams& p,
                                 const BoundaryFrame& frame,
                                 IncidenceAngle alpha_I) {
  const double vE = outer_potential(p, frame.position);
  const double vI = inner_potential(p, frame.position);
  const double s = std::sqrt(vI / vE) * std::sin(alpha_I.value);
  // roundoff guard: exactly-critical incidence refracts tangentially
  if (std::abs(s) > 1.0 + 64.0 * std::numeric_limits<double>::epsilon())
    return TotalReflection{s, frame.position, frame.xi};
  return IncidenceAngle{std::asin(std::clamp(s, -1.0, 1.0))};
}

}  // namespace refbill
