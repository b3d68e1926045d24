#include <doctest.h>

#include <cmath>
#include <random>

#include "refbill/model.hpp"

using namespace refbill;

namespace {
const PhysParams kP{2.5, std::sqrt(2.0), 0.1, 1.0};

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * std::ldexp(static_cast<double>(rng() >> 11), -53);
}

// Star-shaped test curve with both axis symmetries, orthogonal to the axes.
class FourierStar final : public BoundaryCurve {
 public:
  Vec2 point(double xi) const override {
    const double r = radius(xi);
    return {r * std::cos(xi), r * std::sin(xi)};
  }
  Vec2 velocity(double xi) const override {
    const double r = radius(xi), rp = radius_p(xi);
    return {rp * std::cos(xi) - r * std::sin(xi),
            rp * std::sin(xi) + r * std::cos(xi)};
  }
  Vec2 acceleration(double xi) const override {
    const double r = radius(xi), rp = radius_p(xi), rpp = radius_pp(xi);
    return {(rpp - r) * std::cos(xi) - 2.0 * rp * std::sin(xi),
            (rpp - r) * std::sin(xi) + 2.0 * rp * std::cos(xi)};
  }

 private:
  static double radius(double xi) {
    return 1.0 + 0.08 * std::cos(2.0 * xi) + 0.03 * std::cos(4.0 * xi);
  }
  static double radius_p(double xi) {
    return -0.16 * std::sin(2.0 * xi) - 0.12 * std::sin(4.0 * xi);
  }
  static double radius_pp(double xi) {
    return -0.32 * std::cos(2.0 * xi) - 0.48 * std::cos(4.0 * xi);
  }
};

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(validate_params(kP));
  CHECK_THROWS_AS(validate_params({1.0, 2.0, 1.0, 1.0}), HillViolation);
  CHECK_THROWS_AS(validate_params({2.5, std::sqrt(2.0), 0.0, 1.0}),
                  NonPositiveParameter);
  CHECK_THROWS_AS(validate_params({-2.5, 1.0, 0.1, 1.0}), NonPositiveParameter);
}

TEST_CASE("potentials") {
  CHECK(potential_at(kP, {1.0, 0.0}, Region::inner) ==
        doctest::Approx(3.6).epsilon(1e-14));
  CHECK(potential_at(kP, {1.0, 0.0}, Region::outer) ==
        doctest::Approx(1.5).epsilon(1e-14));
  const double rh = hill_radius(kP);
  CHECK(std::abs(potential_at(kP, {rh, 0.0}, Region::outer)) < 1e-12);
  CHECK_THROWS_AS(potential_at(kP, {0.0, 0.0}, Region::inner),
                  OriginSingularity);
  CHECK_THROWS_AS(potential_at(kP, {2.0 * rh, 0.0}, Region::outer),
                  OutsideHill);

  // V_I > V_E wherever the boundary sits in the Hill interior
  const EllipseBoundary ell(0.6);
  for (int i = 0; i < 100; ++i) {
    const Vec2 z = ell.point(two_pi * i / 100.0);
    CHECK(potential_at(kP, z, Region::inner) >
          potential_at(kP, z, Region::outer));
  }
}

TEST_CASE("ellipse geometry") {
  const EllipseBoundary ell(0.3);
  const double b = ell.semiminor();
  CHECK(b * b + 0.3 * 0.3 == doctest::Approx(1.0).epsilon(1e-15));

  std::mt19937_64 rng(123u);
  for (int i = 0; i < 10000; ++i) {
    const double xi = uniform(rng, 0.0, two_pi);
    const Vec2 z = ell.point(xi);
    CHECK(std::abs(z.x() * z.x() + z.y() * z.y() / (b * b) - 1.0) < 1e-12);
  }
}

TEST_CASE("boundary frame") {
  const EllipseBoundary ell(0.3);
  const double b = ell.semiminor();

  const BoundaryFrame f0 = boundary_frame(ell, 0.0);
  CHECK(f0.position.x() == doctest::Approx(1.0));
  CHECK(std::abs(f0.position.y()) < 1e-15);
  CHECK(f0.curvature == doctest::Approx(1.0 / (b * b)).epsilon(1e-13));

  const BoundaryFrame f1 = boundary_frame(ell, half_pi);
  CHECK(f1.position.y() == doctest::Approx(b));
  CHECK(f1.curvature == doctest::Approx(b).epsilon(1e-13));

  const EllipseBoundary circle(0.0);
  for (double xi : {0.0, 1.0, 2.5, 4.0}) {
    const BoundaryFrame fc = boundary_frame(circle, xi);
    CHECK(fc.curvature == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(fc.radius == doctest::Approx(1.0).epsilon(1e-14));
  }

  std::mt19937_64 rng(9001u);
  for (int i = 0; i < 200; ++i) {
    const double xi = uniform(rng, 0.0, two_pi);
    const BoundaryFrame f = boundary_frame(ell, xi);
    CHECK(std::abs(f.tangent_unit.dot(f.outward_normal_unit)) < 1e-12);
    CHECK(std::abs(f.tangent_unit.norm() - 1.0) < 1e-12);
    CHECK(std::abs(f.outward_normal_unit.norm() - 1.0) < 1e-12);
    CHECK(f.outward_normal_unit.dot(f.position) > 0.0);
    const double s = std::sin(xi), c = std::cos(xi);
    const double k_closed = b / std::pow(s * s + b * b * c * c, 1.5);
    CHECK(std::abs(f.curvature - k_closed) < 1e-10);
  }
}

TEST_CASE("degenerate velocity is rejected") {
  // reparametrised ellipse with a parametric cusp at xi = 0
  class Cusp final : public BoundaryCurve {
   public:
    Vec2 point(double xi) const override { return base_.point(g(xi)); }
    Vec2 velocity(double xi) const override {
      return base_.velocity(g(xi)) * gp(xi);
    }
    Vec2 acceleration(double xi) const override {
      return base_.acceleration(g(xi)) * gp(xi) * gp(xi) +
             base_.velocity(g(xi)) * gpp(xi);
    }

   private:
    static double g(double xi) { return xi - std::sin(xi); }
    static double gp(double xi) { return 1.0 - std::cos(xi); }
    static double gpp(double xi) { return std::sin(xi); }
    EllipseBoundary base_{0.2};
  };
  CHECK_THROWS_AS(boundary_frame(Cusp{}, 0.0), DegenerateVelocity);
}

TEST_CASE("radial transversality") {
  const EllipseBoundary ell(0.3);
  CHECK(radial_transversality(ell, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  const EllipseBoundary circle(0.0);
  CHECK(radial_transversality(circle, 1.234) ==
        doctest::Approx(1.0).epsilon(1e-14));

  const EllipseBoundary thin(0.9);
  const double got = radial_transversality(thin, std::numbers::pi / 4.0);
  const Vec2 g = thin.point(std::numbers::pi / 4.0);
  const Vec2 v = thin.velocity(std::numbers::pi / 4.0);
  const double expect =
      std::abs(g.x() * v.y() - g.y() * v.x()) / (g.norm() * v.norm());
  CHECK(got == doctest::Approx(expect).epsilon(1e-14));
  CHECK(got > 0.0);
  CHECK(got < 1.0);
}

TEST_CASE("homothetic directions") {
  const EllipseBoundary ell(0.3);
  const HomotheticDirections hd = homothetic_directions(ell);
  CHECK_FALSE(hd.continuum);
  REQUIRE(hd.xis.size() == 4);
  CHECK(std::abs(hd.xis[0] - 0.0) < 1e-9);
  CHECK(std::abs(hd.xis[1] - half_pi) < 1e-9);
  CHECK(std::abs(hd.xis[2] - std::numbers::pi) < 1e-9);
  CHECK(std::abs(hd.xis[3] - 1.5 * std::numbers::pi) < 1e-9);
  for (double xi : hd.xis)
    CHECK(std::abs(angle_diff(xi, std::numbers::pi / 4.0)) > 0.1);

  const HomotheticDirections circ = homothetic_directions(EllipseBoundary(0.0));
  CHECK(circ.continuum);
  CHECK(circ.xis.size() >= 4);

  // any doubly-symmetric curve orthogonal to the axes carries the four axes
  const HomotheticDirections star = homothetic_directions(FourierStar{});
  CHECK_FALSE(star.continuum);
  const double targets[] = {0.0, half_pi, std::numbers::pi,
                            1.5 * std::numbers::pi};
  for (double t : targets) {
    bool found = false;
    for (double xi : star.xis)
      if (std::abs(angle_diff(xi, t)) < 1e-8) found = true;
    CHECK(found);
  }
}

TEST_CASE("curve inversion") {
  const EllipseBoundary ell(0.4);
  std::mt19937_64 rng(31337u);
  for (int i = 0; i < 200; ++i) {
    const double xi = uniform(rng, 0.0, two_pi);
    CHECK(std::abs(angle_diff(ell.invert_point(ell.point(xi)), xi)) < 1e-12);
    const double theta = std::atan2(ell.point(xi).y(), ell.point(xi).x());
    CHECK(std::abs(angle_diff(ell.xi_at_polar_angle(theta), xi)) < 1e-12);
  }
  // default (generic-curve) inversion path
  const FourierStar star;
  for (int i = 0; i < 50; ++i) {
    const double xi = uniform(rng, 0.0, two_pi);
    CHECK(std::abs(angle_diff(star.invert_point(star.point(xi)), xi)) < 1e-9);
  }
  CHECK_THROWS_AS(ell.invert_point(Vec2(7.0, 9.0)), CurveInversionFailure);
}
