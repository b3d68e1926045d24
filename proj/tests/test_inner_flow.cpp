#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracle.hpp"
#include "refbill/inner_flow.hpp"

using namespace refbill;

namespace {
const PhysParams kP{2.5, std::sqrt(2.0), 0.1, 1.0};

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * std::ldexp(static_cast<double>(rng() >> 11), -53);
}

LCState lc_at(const PhysParams& p, const LCState& s0, double tau) {
  const double Om = lc_params(p).Omega;
  LCState s;
  s.w = s0.w * std::cosh(Om * tau) + s0.w_dot / Om * std::sinh(Om * tau);
  s.w_dot = s0.w * Om * std::sinh(Om * tau) + s0.w_dot * std::cosh(Om * tau);
  return s;
}

Vec2 physical_velocity(const LCState& s) {
  const Complex zd = s.w * s.w_dot / std::norm(s.w);
  return {zd.real(), zd.imag()};
}
}  // namespace

TEST_CASE("Levi-Civita constants") {
  const LCParams lc = lc_params(kP);
  CHECK(lc.Omega == doctest::Approx(std::sqrt(5.2)).epsilon(1e-15));
  CHECK(lc.Omega * lc.Omega ==
        doctest::Approx(2.0 * (kP.energy + kP.h)).epsilon(1e-14));
  CHECK(lc.lc_energy == kP.mu);
}

TEST_CASE("forward transform, homothetic entry") {
  const EllipseBoundary circle(0.0);
  const BoundaryFrame f = boundary_frame(circle, 0.0);
  const LCState s = lc_forward(kP, f, IncidenceAngle{0.0});
  CHECK(s.w.real() == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(std::abs(s.w.imag()) < 1e-14);
  CHECK(s.w_dot.real() == doctest::Approx(std::sqrt(7.2)).epsilon(1e-14));
  CHECK(std::abs(s.w_dot.imag()) < 1e-14);
  CHECK(lc_energy_of(kP, s) == doctest::Approx(kP.mu).epsilon(1e-13));
}

TEST_CASE("forward transform preserves the entry angle") {
  const EllipseBoundary circle(0.0);
  const BoundaryFrame f = boundary_frame(circle, 0.0);
  const LCState s = lc_forward(kP, f, IncidenceAngle{0.2});
  CHECK(std::abs(s.w_dot) == doctest::Approx(std::sqrt(7.2)).epsilon(1e-13));
  const Vec2 v = physical_velocity(s);
  CHECK(incidence_angle(v, f).value == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(v.dot(f.outward_normal_unit) < 0.0);  // entering
  CHECK_THROWS_AS(lc_forward(kP, f, IncidenceAngle{half_pi}), TangentialEntry);
}

TEST_CASE("homothetic ejection-collision arc") {
  const EllipseBoundary circle(0.0);
  const BoundaryFrame f = boundary_frame(circle, 0.0);
  const LCState s0 = lc_forward(kP, f, IncidenceAngle{0.0});
  const LCArcResult leg = lc_arc(kP, circle, s0);
  CHECK(leg.tau == doctest::Approx(1.1012026730025564).epsilon(1e-10));
  CHECK(leg.exit.w.real() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(leg.exit.w.imag()) < 1e-10);
  CHECK(lc_energy_of(kP, leg.exit) == doctest::Approx(kP.mu).epsilon(1e-12));

  const LCExit exit = lc_backward(kP, circle, leg.exit);
  CHECK(std::abs(angle_diff(exit.xi1, 0.0)) < 1e-10);
  CHECK(std::abs(exit.beta1.value) < 1e-10);
  CHECK(exit.velocity.norm() ==
        doctest::Approx(std::sqrt(2.0 * (kP.energy + kP.h + kP.mu)))
            .epsilon(1e-13));

  const InnerArc arc = inner_arc(kP, circle, 0.0, IncidenceAngle{0.0});
  CHECK(arc.collision_flag);
  CHECK(std::abs(angle_diff(arc.end_xi, 0.0)) < 1e-10);
  CHECK(std::abs(arc.end_angle.value) < 1e-10);
  CHECK(arc.physical_flight_time ==
        doctest::Approx(0.60849188461431678).epsilon(1e-12));
}

TEST_CASE("generic arc matches the Kepler ODE oracle") {
  const PhysParams p{2.5, std::sqrt(2.0), 0.1, 2.0};
  const EllipseBoundary ell(0.1);
  const double xi0 = 1.2;
  const IncidenceAngle a_in{0.3};
  const InnerArc arc = inner_arc(p, ell, xi0, a_in);
  CHECK_FALSE(arc.collision_flag);

  const BoundaryFrame f0 = boundary_frame(ell, xi0);
  const double speed = std::sqrt(2.0 * inner_potential(p, f0.position));
  const Vec2 v0 = speed * unit_velocity(a_in, f0, false);
  oracle::State x0{f0.position.x(), f0.position.y(), v0.x(), v0.y()};
  const auto hit = oracle::integrate_to_boundary(oracle::KeplerRhs{p.mu}, x0,
                                                 ell, 10.0, +1);
  REQUIRE(hit.has_value());
  const double xi_oracle = ell.invert_point(Vec2(hit->state[0], hit->state[1]));
  CHECK(std::abs(angle_diff(xi_oracle, arc.end_xi)) < 1e-8);
  const BoundaryFrame f1 = boundary_frame(ell, arc.end_xi);
  const double beta_oracle =
      incidence_angle(Vec2(hit->state[2], hit->state[3]), f1).value;
  CHECK(std::abs(beta_oracle - arc.end_angle.value) < 1e-8);
  CHECK(std::abs(hit->t - arc.physical_flight_time) < 1e-7);
}

TEST_CASE("inner arc invariants") {
  const PhysParams p{2.5, std::sqrt(2.0), 0.1, 2.0};
  const EllipseBoundary ell(0.15);
  std::mt19937_64 rng(2024u);
  int checked = 0;
  while (checked < 12) {
    const double xi0 = uniform(rng, 0.0, two_pi);
    const double a_in = uniform(rng, -1.0, 1.0);
    const InnerArc arc = inner_arc(p, ell, xi0, IncidenceAngle{a_in});
    if (lc_min_radius(p, arc.lc_start, arc.lc_flight_time) < 0.5) continue;
    ++checked;

    // endpoints sit on the boundary
    const Complex we = arc.lc_exit.w;
    const Vec2 z1((we * we).real(), (we * we).imag());
    CHECK(std::abs(ell.implicit(z1)) < 1e-10);

    // regularized energy along the arc
    for (int i = 0; i <= 50; ++i) {
      const LCState s = lc_at(p, arc.lc_start, arc.lc_flight_time * i / 50.0);
      CHECK(std::abs(lc_energy_of(p, s) - p.mu) < 1e-10);
    }

    // physical zero-energy relation at exit
    const LCExit exit = lc_backward(p, ell, arc.lc_exit);
    const double e_res = 0.5 * exit.velocity.squaredNorm() -
                         p.mu / exit.position.norm() - (p.energy + p.h);
    CHECK(std::abs(e_res) < 1e-9);

    // sampled diagnostics along the arc
    std::vector<double> taus, ss;
    std::vector<Vec2> zs, zds;
    std::vector<double> args_w, args_z;
    const int n = 60;
    for (int i = 0; i <= n; ++i) {
      const double tau = arc.lc_flight_time * i / n;
      const LCState s = lc_at(p, arc.lc_start, tau);
      const Complex z = s.w * s.w;
      taus.push_back(tau);
      ss.push_back(lc_physical_time(p, arc.lc_start, tau));
      zs.push_back({z.real(), z.imag()});
      zds.push_back(physical_velocity(s));
      args_w.push_back(std::arg(s.w));
      args_z.push_back(std::arg(z));
    }

    // time-map identity dtau/ds = 1/(2|z|), i.e. ds/dtau = 2|w|^2
    for (int i = 1; i < n; ++i) {
      const double ht = 1e-6;
      const double ds_dtau =
          (lc_physical_time(p, arc.lc_start, taus[i] + ht) -
           lc_physical_time(p, arc.lc_start, taus[i] - ht)) /
          (2.0 * ht);
      CHECK(std::abs(1.0 / ds_dtau - 1.0 / (2.0 * zs[i].norm())) < 1e-8);
    }

    // angular momentum of the physical arc is constant
    const double L0 = zs[0].x() * zds[0].y() - zs[0].y() * zds[0].x();
    for (int i = 0; i <= n; ++i) {
      const double L = zs[i].x() * zds[i].y() - zs[i].y() * zds[i].x();
      CHECK(std::abs(L - L0) < 1e-9);
    }

    // double-cover consistency: arg z tracks 2 arg w with no branch jump
    double acc_w = args_w[0], acc_z = args_z[0];
    for (int i = 1; i <= n; ++i) {
      acc_w += angle_diff(args_w[i], args_w[i - 1]);
      acc_z += angle_diff(args_z[i], args_z[i - 1]);
    }
    const double turn_w = acc_w - args_w[0];
    const double turn_z = acc_z - args_z[0];
    CHECK(std::abs(turn_z - 2.0 * turn_w) < 1e-9);

    // physical equation residual from centered second differences in s,
    // sampling z at uniform physical times via inversion of s(tau)
    auto tau_of_s = [&](double s_target) {
      double lo = 0.0, hi = arc.lc_flight_time;
      for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        (lc_physical_time(p, arc.lc_start, mid) < s_target ? lo : hi) = mid;
      }
      double tau = 0.5 * (lo + hi);
      for (int it = 0; it < 4; ++it) {  // polish: ds/dtau = 2|w|^2 exactly
        const LCState s = lc_at(p, arc.lc_start, tau);
        tau -= (lc_physical_time(p, arc.lc_start, tau) - s_target) /
               (2.0 * std::norm(s.w));
      }
      return tau;
    };
    auto z_of_s = [&](double s_target) {
      const LCState s = lc_at(p, arc.lc_start, tau_of_s(s_target));
      const Complex z = s.w * s.w;
      return Vec2(z.real(), z.imag());
    };
    const double T = arc.physical_flight_time;
    const double hs = 5e-4;
    for (int i = 1; i <= 50; ++i) {
      const double s_mid = T * i / 51.0;
      if (s_mid < 3.0 * hs || s_mid > T - 3.0 * hs) continue;
      const Vec2 zm2 = z_of_s(s_mid - 2.0 * hs), zm1 = z_of_s(s_mid - hs),
                 z0 = z_of_s(s_mid), zp1 = z_of_s(s_mid + hs),
                 zp2 = z_of_s(s_mid + 2.0 * hs);
      const Vec2 zpp = (-zm2 + 16.0 * zm1 - 30.0 * z0 + 16.0 * zp1 - zp2) /
                       (12.0 * hs * hs);
      const double r = z0.norm();
      const Vec2 rhs = -p.mu * z0 / (r * r * r);
      CHECK((zpp - rhs).norm() < 1e-7);
    }
  }
}
