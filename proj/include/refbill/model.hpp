#pragma once

#include <memory>
#include <vector>

#include "refbill/types.hpp"

namespace refbill {

// Throws NonPositiveParameter / HillViolation when the parameter set is not
// admissible. 2*E > omega^2 keeps the unit circle inside the Hill region.
void validate_params(const PhysParams& p);

// Radius of the Hill region, sqrt(2E)/omega.
double hill_radius(const PhysParams& p);

// V_I(z) = E + h + mu/|z| inside, V_E(z) = E - (omega^2/2)|z|^2 outside.
double potential_at(const PhysParams& p, const Vec2& z, Region region);

inline double outer_potential(const PhysParams& p, const Vec2& z) {
  return p.energy - 0.5 * p.omega * p.omega * z.squaredNorm();
}
inline double inner_potential(const PhysParams& p, const Vec2& z) {
  return p.energy + p.h + p.mu / z.norm();
}

// A closed C^2 boundary curve with the origin strictly inside, parametrised
// over [0, 2*pi). Implementations must be regular (velocity never zero).
class BoundaryCurve {
 public:
  virtual ~BoundaryCurve() = default;

  virtual Vec2 point(double xi) const = 0;
  virtual Vec2 velocity(double xi) const = 0;
  virtual Vec2 acceleration(double xi) const = 0;

  // Implicit boundary function: negative inside the enclosed region, positive
  // outside, zero on the curve. The default assumes a star-shaped curve and
  // compares |z| with the boundary radius along the polar angle of z.
  virtual double implicit(const Vec2& z) const;

  // Curve parameter of a point on (or near) the trace.
  virtual double invert_point(const Vec2& z) const;

  // Curve parameter whose point has the given polar angle.
  virtual double xi_at_polar_angle(double theta) const;
};

// gamma(xi) = (cos xi, b sin xi) with a = 1 and b = sqrt(1 - e^2).
class EllipseBoundary final : public BoundaryCurve {
 public:
  explicit EllipseBoundary(double eccentricity);

  double eccentricity() const { return e_; }
  double semiminor() const { return b_; }

  Vec2 point(double xi) const override;
  Vec2 velocity(double xi) const override;
  Vec2 acceleration(double xi) const override;
  double implicit(const Vec2& z) const override;
  double invert_point(const Vec2& z) const override;
  double xi_at_polar_angle(double theta) const override;

 private:
  double e_;
  double b_;
};

// Local differential data of the curve at one parameter value.
struct BoundaryFrame {
  double xi = 0.0;
  Vec2 position = Vec2::Zero();
  Vec2 tangent_unit = Vec2::Zero();
  Vec2 outward_normal_unit = Vec2::Zero();
  double curvature = 0.0;   // positive when bending toward the origin side
  double radius = 0.0;      // |gamma(xi)|
  double polar_angle = 0.0; // arg gamma(xi)
  double speed = 0.0;       // |gamma'(xi)|
};

BoundaryFrame boundary_frame(const BoundaryCurve& curve, double xi);

// sin of the angle between gamma(xi) and gamma'(xi); zero means the radius is
// tangent to the curve and the free-fall construction degenerates there.
double radial_transversality(const BoundaryCurve& curve, double xi);

// Parameters of boundary points supporting a homothetic collision-ejection
// orbit: gamma(xi) orthogonal to the tangent and the open radial ray through
// the point otherwise free of the curve. A curve orthogonal to every radius
// (circle) is reported as a continuum with representative samples.
struct HomotheticDirections {
  bool continuum = false;
  std::vector<double> xis;
};

HomotheticDirections homothetic_directions(const BoundaryCurve& curve,
                                           double tol = 1e-10);

}  // namespace refbill
