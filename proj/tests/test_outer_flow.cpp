#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "refbill/outer_flow.hpp"

using namespace refbill;

namespace {
const PhysParams kP{2.5, std::sqrt(2.0), 0.1, 1.0};

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * std::ldexp(static_cast<double>(rng() >> 11), -53);
}
}  // namespace

TEST_CASE("homothetic outer arc returns radially") {
  const EllipseBoundary ell(0.3);
  const OuterArc arc = outer_arc(kP, ell, 0.0, IncidenceAngle{0.0});
  CHECK(std::abs(angle_diff(arc.end_xi, 0.0)) < 1e-11);
  CHECK(std::abs(arc.end_angle.value) < 1e-11);
  // twice the half-arc time of the radial brake arc at rho = 1
  CHECK(arc.flight_time ==
        doctest::Approx(1.2531022857760580).epsilon(1e-12));
}

TEST_CASE("outer homothetic closed form") {
  const OuterHomothetic h = outer_homothetic(kP, 1.0);
  CHECK(h.half_time == doctest::Approx(0.62655114288802899).epsilon(1e-14));
  CHECK(h.launch_speed == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));

  const double rh = hill_radius(kP);
  const OuterHomothetic near_hill = outer_homothetic(kP, rh * (1.0 - 1e-12));
  CHECK(near_hill.half_time < 1e-5);
  CHECK(near_hill.launch_speed < 1e-5);

  const OuterHomothetic near_center = outer_homothetic(kP, 1e-12);
  CHECK(near_center.half_time ==
        doctest::Approx(half_pi / kP.omega).epsilon(1e-10));

  CHECK_THROWS_AS(outer_homothetic(kP, rh * 1.01), OutsideHill);
  CHECK_THROWS_AS(outer_homothetic(kP, -1.0), OutsideHill);
}

TEST_CASE("circle arcs are rotation invariant") {
  const EllipseBoundary circle(0.0);
  const OuterArc a = outer_arc(kP, circle, 0.4, IncidenceAngle{0.3});
  const OuterArc b = outer_arc(kP, circle, 2.9, IncidenceAngle{0.3});
  CHECK(std::abs(angle_diff(a.end_xi, 0.4) - angle_diff(b.end_xi, 2.9)) < 1e-12);
  CHECK(a.end_angle.value == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(b.end_angle.value == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("outer crossing matches the ODE event oracle") {
  const EllipseBoundary ell(0.3);
  const OuterArc arc = outer_arc(kP, ell, 0.2, IncidenceAngle{0.1});

  oracle::State x0{arc.y0.x(), arc.y0.y(), arc.v0.x(), arc.v0.y()};
  const auto hit = oracle::integrate_to_boundary(
      oracle::HarmonicRhs{kP.omega * kP.omega}, x0, ell,
      1.1 * two_pi / kP.omega, -1);
  REQUIRE(hit.has_value());
  CHECK(std::abs(hit->t - arc.flight_time) < 1e-8);
  const double xi_oracle = ell.invert_point(Vec2(hit->state[0], hit->state[1]));
  CHECK(std::abs(angle_diff(xi_oracle, arc.end_xi)) < 1e-8);
}

TEST_CASE("outer arc properties") {
  const EllipseBoundary ell(0.25);
  std::mt19937_64 rng(777u);
  for (int k = 0; k < 30; ++k) {
    const double xi0 = uniform(rng, 0.0, two_pi);
    const double a0 = uniform(rng, -1.1, 1.1);
    OuterArc arc;
    try {
      arc = outer_arc(kP, ell, xi0, IncidenceAngle{a0});
    } catch (const Error&) {
      continue;
    }

    // zero-energy identity at 100 random times
    for (int i = 0; i < 100; ++i) {
      const double s = uniform(rng, 0.0, arc.flight_time);
      const double res = 0.5 * arc.velocity(s).squaredNorm() +
                         0.5 * kP.omega * kP.omega *
                             arc.position(s).squaredNorm() -
                         kP.energy;
      CHECK(std::abs(res) < 1e-10);
    }

    // the open arc stays outside the domain
    for (int i = 1; i < 400; ++i) {
      const double s = arc.flight_time * i / 400.0;
      if (s > arc.flight_time - 1e-9) break;
      CHECK(ell.implicit(arc.position(s)) > -1e-11);
    }

    // retracing: relaunch the reversed entering velocity from the end point
    const OuterArc back =
        outer_arc(kP, ell, arc.end_xi, IncidenceAngle{-arc.end_angle.value});
    CHECK(std::abs(angle_diff(back.end_xi, arc.start_xi)) < 1e-9);
    CHECK(std::abs(back.end_angle.value + a0) < 1e-9);
    CHECK(std::abs(back.flight_time - arc.flight_time) < 1e-9);
  }
}

TEST_CASE("tangential launches are rejected") {
  const EllipseBoundary ell(0.2);
  CHECK_THROWS_AS(outer_arc(kP, ell, 1.0, IncidenceAngle{half_pi}),
                  TangentialLaunch);
  CHECK_THROWS_AS(outer_arc(kP, ell, 1.0, IncidenceAngle{-half_pi + 1e-12}),
                  TangentialLaunch);
}
