#include "refbill/model.hpp"

#include <algorithm>
#include <cmath>

#include "refbill/rootfind.hpp"

namespace refbill {

void validate_params(const PhysParams& p) {
  if (!(p.energy > 0.0) || !(p.omega > 0.0) || !(p.h > 0.0) || !(p.mu > 0.0))
    throw NonPositiveParameter("all of E, omega, h, mu must be > 0");
  if (!(2.0 * p.energy > p.omega * p.omega))
    throw HillViolation("2E <= omega^2: unit circle leaves the Hill region");
}

double hill_radius(const PhysParams& p) {
  return std::sqrt(2.0 * p.energy) / p.omega;
}

double potential_at(const PhysParams& p, const Vec2& z, Region region) {
  if (region == Region::inner) {
    const double r = z.norm();
    if (r == 0.0) throw OriginSingularity("inner potential at the origin");
    return p.energy + p.h + p.mu / r;
  }
  const double v = outer_potential(p, z);
  if (v < 0.0) throw OutsideHill("outer potential negative outside the Hill region");
  return v;
}

double BoundaryCurve::implicit(const Vec2& z) const {
  const double r = z.norm();
  if (r == 0.0) return -1.0;
  const double xi = xi_at_polar_angle(std::atan2(z.y(), z.x()));
  return r - point(xi).norm();
}

double BoundaryCurve::invert_point(const Vec2& z) const {
  double xi = xi_at_polar_angle(std::atan2(z.y(), z.x()));
  // Newton polish on the squared distance, robust for points near the trace.
  for (int i = 0; i < 12; ++i) {
    const Vec2 d = point(xi) - z;
    const Vec2 v = velocity(xi);
    const Vec2 a = acceleration(xi);
    const double g = d.dot(v);
    const double gp = v.squaredNorm() + d.dot(a);
    if (gp == 0.0) break;
    const double step = g / gp;
    xi -= step;
    if (std::abs(step) < 1e-14) break;
  }
  if ((point(xi) - z).norm() > 1e-6)
    throw CurveInversionFailure("invert_point: point too far from the curve");
  return wrap_angle(xi);
}

double BoundaryCurve::xi_at_polar_angle(double theta) const {
  const Vec2 u(std::cos(theta), std::sin(theta));
  // star-shaped assumption: exactly one boundary point on the positive ray
  const int n = 1024;
  auto miss = [&](double xi) {
    const Vec2 g = point(xi);
    return u.x() * g.y() - u.y() * g.x();
  };
  double xi_prev = 0.0, m_prev = miss(0.0);
  for (int i = 1; i <= n; ++i) {
    const double xi = two_pi * i / n;
    const double m = miss(xi);
    if (m_prev == 0.0 && point(xi_prev).dot(u) > 0.0) return wrap_angle(xi_prev);
    if (m_prev * m < 0.0 && point(0.5 * (xi_prev + xi)).dot(u) > 0.0) {
      const double root =
          bisect([&](double x) { return miss(x); }, xi_prev, xi, 1e-14);
      return wrap_angle(root);
    }
    xi_prev = xi;
    m_prev = m;
  }
  throw CurveInversionFailure("xi_at_polar_angle: ray misses the curve");
}

EllipseBoundary::EllipseBoundary(double eccentricity)
    : e_(eccentricity), b_(std::sqrt(1.0 - eccentricity * eccentricity)) {
  if (!(eccentricity >= 0.0) || !(eccentricity < 1.0))
    throw ConfigError("eccentricity must lie in [0, 1)");
}

Vec2 EllipseBoundary::point(double xi) const {
  return {std::cos(xi), b_ * std::sin(xi)};
}

Vec2 EllipseBoundary::velocity(double xi) const {
  return {-std::sin(xi), b_ * std::cos(xi)};
}

Vec2 EllipseBoundary::acceleration(double xi) const {
  return {-std::cos(xi), -b_ * std::sin(xi)};
}

double EllipseBoundary::implicit(const Vec2& z) const {
  return z.x() * z.x() + (z.y() * z.y()) / (b_ * b_) - 1.0;
}

double EllipseBoundary::invert_point(const Vec2& z) const {
  if (z.norm() < 1e-12)
    throw CurveInversionFailure("invert_point: point at the origin");
  const double xi = wrap_angle(std::atan2(z.y() / b_, z.x()));
  if ((point(xi) - z).norm() > 1e-6)
    throw CurveInversionFailure("invert_point: point too far from the curve");
  return xi;
}

double EllipseBoundary::xi_at_polar_angle(double theta) const {
  return wrap_angle(std::atan2(std::sin(theta) / b_, std::cos(theta)));
}

BoundaryFrame boundary_frame(const BoundaryCurve& curve, double xi) {
  BoundaryFrame f;
  f.xi = xi;
  f.position = curve.point(xi);
  const Vec2 v = curve.velocity(xi);
  f.speed = v.norm();
  if (f.speed < 1e-12)
    throw DegenerateVelocity("boundary_frame: |gamma'(xi)| below 1e-12");
  f.tangent_unit = v / f.speed;
  Vec2 n(f.tangent_unit.y(), -f.tangent_unit.x());
  double orientation = 1.0;
  if (n.dot(f.position) < 0.0) {
    n = -n;
    orientation = -1.0;
  }
  f.outward_normal_unit = n;
  const Vec2 a = curve.acceleration(xi);
  const double cross = v.x() * a.y() - v.y() * a.x();
  f.curvature = orientation * cross / (f.speed * f.speed * f.speed);
  f.radius = f.position.norm();
  f.polar_angle = std::atan2(f.position.y(), f.position.x());
  return f;
}

double radial_transversality(const BoundaryCurve& curve, double xi) {
  const Vec2 g = curve.point(xi);
  const Vec2 v = curve.velocity(xi);
  const double cross = g.x() * v.y() - g.y() * v.x();
  return std::abs(cross) / (g.norm() * v.norm());
}

namespace {

// True when the open ray t*gamma(xi_hom), t in (0,1) u (1,inf), misses the
// curve: every other ray-curve intersection must coincide with the point
// itself. 4096-sample bracketing on the signed ray miss, bisection refine.
bool ray_condition(const BoundaryCurve& curve, double xi_hom, double tol) {
  const Vec2 pbar = curve.point(xi_hom);
  const Vec2 u = pbar / pbar.norm();
  auto miss = [&](double xi) {
    const Vec2 g = curve.point(xi);
    return u.x() * g.y() - u.y() * g.x();
  };
  const int n = 4096;
  double xi_prev = xi_hom, m_prev = miss(xi_hom);
  for (int i = 1; i <= n; ++i) {
    const double xi = xi_hom + two_pi * i / n;
    const double m = miss(xi);
    if (m_prev * m < 0.0) {
      const double root = bisect(miss, xi_prev, xi, 1e-12);
      const Vec2 g = curve.point(root);
      const double t = g.dot(u);
      if (t > tol && (g - pbar).norm() > std::sqrt(tol)) return false;
    }
    xi_prev = xi;
    m_prev = m;
  }
  return true;
}

}  // namespace

HomotheticDirections homothetic_directions(const BoundaryCurve& curve,
                                           double tol) {
  auto ortho = [&](double xi) {
    const Vec2 g = curve.point(xi);
    const Vec2 v = curve.velocity(xi);
    return g.dot(v) / (g.norm() * v.norm());
  };

  const int n = 4096;
  double max_abs = 0.0;
  for (int i = 0; i < n; ++i) max_abs = std::max(max_abs, std::abs(ortho(two_pi * i / n)));
  HomotheticDirections out;
  if (max_abs < tol) {
    // circle-like: every direction is orthogonal
    out.continuum = true;
    out.xis = {0.0, half_pi, std::numbers::pi, 1.5 * std::numbers::pi};
    return out;
  }

  double xi_prev = 0.0, o_prev = ortho(0.0);
  for (int i = 1; i <= n; ++i) {
    const double xi = two_pi * i / n;
    const double o = ortho(xi);
    double root = -1.0;
    if (std::abs(o_prev) < tol && o_prev * o >= 0.0) {
      root = xi_prev;  // grazing zero without a sign change
    } else if (o_prev * o < 0.0) {
      root = bisect(ortho, xi_prev, xi, 1e-14);
    }
    if (root >= 0.0 && ray_condition(curve, root, tol)) {
      const double w = wrap_angle(root);
      bool dup = false;
      for (double x : out.xis)
        if (std::abs(angle_diff(x, w)) < 1e-8) dup = true;
      if (!dup) out.xis.push_back(w);
    }
    xi_prev = xi;
    o_prev = o;
  }
  std::sort(out.xis.begin(), out.xis.end());
  return out;
}

}  // namespace refbill
