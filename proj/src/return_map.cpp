#include "refbill/return_map.hpp"

#include <cmath>

#include "refbill/rootfind.hpp"

namespace refbill {

namespace {

// Entering states must actually point into the domain; a nonnegative normal
// component means the arc grazed the boundary and the cycle cannot continue.
bool enters_domain(const Vec2& v, const BoundaryFrame& f) {
  return v.dot(f.outward_normal_unit) < -1e-12 * v.norm();
}

StepResult inner_leg_and_exit(const PhysParams& p, const BoundaryCurve& curve,
                              double xi_entry, IncidenceAngle alpha_E,
                              double outer_time) {
  StepResult r;
  r.outer_time = outer_time;

  const BoundaryFrame f_entry = boundary_frame(curve, xi_entry);
  const IncidenceAngle alpha_I = refract_inward(p, f_entry, alpha_E);

  InnerArc inner;
  try {
    inner = inner_arc(p, curve, xi_entry, alpha_I);
  } catch (const TangentialEntry&) {
    r.termination = Termination::tangency;
    return r;
  }
  r.inner_time = inner.physical_flight_time;

  const BoundaryFrame f_exit = boundary_frame(curve, inner.end_xi);
  const RefractionResult refr = refract_outward(p, f_exit, inner.end_angle);
  if (std::holds_alternative<TotalReflection>(refr)) {
    r.termination = Termination::total_reflection;
    r.reflection = std::get<TotalReflection>(refr);
    return r;
  }
  r.termination = Termination::completed;
  r.state = {wrap_angle(inner.end_xi), std::get<IncidenceAngle>(refr).value};
  return r;
}

}  // namespace

StepResult first_return(const PhysParams& p, const BoundaryCurve& curve,
                        const BoundaryState& s) {
  StepResult r;
  OuterArc outer;
  try {
    outer = outer_arc(p, curve, s.xi, IncidenceAngle{s.alpha});
  } catch (const TangentialLaunch&) {
    r.termination = Termination::tangency;
    return r;
  }

  const BoundaryFrame f1 = boundary_frame(curve, outer.end_xi);
  const Vec2 v_in = outer.velocity(outer.flight_time);
  if (!enters_domain(v_in, f1)) {
    r.termination = Termination::tangency;  // grazing return, no re-entry
    r.outer_time = outer.flight_time;
    return r;
  }
  return inner_leg_and_exit(p, curve, outer.end_xi, outer.end_angle,
                            outer.flight_time);
}

StepResult first_return_inner_first(const PhysParams& p,
                                    const BoundaryCurve& curve,
                                    const BoundaryState& entering) {
  StepResult inner =
      inner_leg_and_exit(p, curve, entering.xi, IncidenceAngle{entering.alpha}, 0.0);
  if (inner.termination != Termination::completed) return inner;

  StepResult r;
  r.inner_time = inner.inner_time;
  OuterArc outer;
  try {
    outer = outer_arc(p, curve, inner.state.xi, IncidenceAngle{inner.state.alpha});
  } catch (const TangentialLaunch&) {
    r.termination = Termination::tangency;
    return r;
  }
  r.outer_time = outer.flight_time;
  const BoundaryFrame f1 = boundary_frame(curve, outer.end_xi);
  if (!enters_domain(outer.velocity(outer.flight_time), f1)) {
    r.termination = Termination::tangency;
    return r;
  }
  r.termination = Termination::completed;
  r.state = {wrap_angle(outer.end_xi), outer.end_angle.value};
  return r;
}

OrbitRecord iterate_orbit(const PhysParams& p, const BoundaryCurve& curve,
                          const BoundaryState& s0, int n_iters) {
  OrbitRecord rec;
  rec.states.push_back({wrap_angle(s0.xi), s0.alpha});
  for (int i = 0; i < n_iters; ++i) {
    StepResult step;
    try {
      step = first_return(p, curve, rec.states.back());
    } catch (const Error&) {
      rec.termination = Termination::error;
      return rec;
    }
    if (step.termination != Termination::completed) {
      rec.termination = step.termination;
      return rec;
    }
    rec.states.push_back(step.state);
    rec.outer_times.push_back(step.outer_time);
    rec.inner_times.push_back(step.inner_time);
  }
  rec.termination = Termination::completed;
  return rec;
}

BoundaryState radial_state(const BoundaryCurve& curve, double theta) {
  const double xi = curve.xi_at_polar_angle(theta);
  const BoundaryFrame f = boundary_frame(curve, xi);
  const Vec2 radial = f.position / f.radius;
  return {xi, incidence_angle(radial, f).value};
}

FreeFallSample free_fall_delta(const PhysParams& p, const BoundaryCurve& curve,
                               double theta) {
  const double xi0 = curve.xi_at_polar_angle(theta);
  if (radial_transversality(curve, xi0) < 1e-9)
    throw RadialTangency("free_fall_delta: ray tangent to the boundary");

  const BoundaryFrame f0 = boundary_frame(curve, xi0);

  // The radial brake arc leaves and re-enters at the same point with the
  // velocity reversed; only the inner leg needs simulating.
  const Vec2 v_in = -f0.position / f0.radius;
  const IncidenceAngle alpha_E = incidence_angle(v_in, f0);
  const IncidenceAngle alpha_I = refract_inward(p, f0, alpha_E);
  const InnerArc inner = inner_arc(p, curve, xi0, alpha_I);

  const BoundaryFrame f1 = boundary_frame(curve, inner.end_xi);
  const RefractionResult refr = refract_outward(p, f1, inner.end_angle);

  FreeFallSample out;
  out.theta = theta;
  if (std::holds_alternative<TotalReflection>(refr)) {
    out.delta = std::copysign(half_pi, inner.end_angle.value);
    out.clamped = true;
    return out;
  }
  const Vec2 v1 =
      unit_velocity(std::get<IncidenceAngle>(refr), f1, /*leaving=*/true);
  const Vec2 radial = f1.position / f1.radius;
  out.delta = std::atan2(radial.x() * v1.y() - radial.y() * v1.x(),
                         radial.dot(v1));
  return out;
}

std::vector<double> find_brake_orbits(const PhysParams& p,
                                      const BoundaryCurve& curve, int grid_n) {
  std::vector<double> zeros;
  if (grid_n < 2) return zeros;

  auto delta_at = [&](double th) {
    try {
      return free_fall_delta(p, curve, th).delta;
    } catch (const Error&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };

  const double margin = half_pi / (grid_n + 1);
  double th_prev = margin;
  double d_prev = delta_at(th_prev);
  for (int i = 2; i <= grid_n; ++i) {
    const double th = i * margin;
    const double d = delta_at(th);
    if (d_prev * d < 0.0) {
      double lo = th_prev, hi = th;
      for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        (delta_at(mid) * d_prev > 0.0 ? lo : hi) = mid;
      }
      const double th_zero = 0.5 * (lo + hi);
      const FreeFallSample s = free_fall_delta(p, curve, th_zero);
      if (s.clamped || std::abs(s.delta) > 1e-9) { th_prev = th; d_prev = d; continue; }
      // exclude homothetic directions (exit perpendicular to the boundary)
      const double xi_zero = curve.xi_at_polar_angle(th_zero);
      const Vec2 g = curve.point(xi_zero);
      const Vec2 v = curve.velocity(xi_zero);
      if (std::abs(g.dot(v)) / (g.norm() * v.norm()) < 1e-6) { th_prev = th; d_prev = d; continue; }
      // verify the 2-periodic closure under the full map
      const BoundaryState seed = radial_state(curve, th_zero);
      StepResult one = first_return(p, curve, seed);
      bool closes = false;
      if (one.termination == Termination::completed) {
        StepResult two = first_return(p, curve, one.state);
        closes = two.termination == Termination::completed &&
                 std::abs(angle_diff(two.state.xi, seed.xi)) < 1e-6 &&
                 std::abs(two.state.alpha - seed.alpha) < 1e-6;
      }
      if (closes) zeros.push_back(th_zero);
    }
    th_prev = th;
    d_prev = d;
  }
  return zeros;
}

namespace {

// Displacement of F^period; false when the orbit dies before closing.
bool orbit_displacement(const PhysParams& p, const BoundaryCurve& curve,
                        const BoundaryState& x, int period, Vec2& d) {
  BoundaryState s = x;
  for (int i = 0; i < period; ++i) {
    const StepResult r = first_return(p, curve, s);
    if (r.termination != Termination::completed) return false;
    s = r.state;
  }
  d = {angle_diff(s.xi, x.xi), s.alpha - x.alpha};
  return true;
}

// Symmetric orbits through alpha = 0 close iff the alpha component of the
// half-shot vanishes; bracketing it in xi recovers them when Newton stalls.
std::optional<BoundaryState> bisect_on_symmetry_line(
    const PhysParams& p, const BoundaryCurve& curve, double xi_seed,
    int period, double tol) {
  auto alpha_of = [&](double xi) -> std::optional<double> {
    Vec2 d;
    if (!orbit_displacement(p, curve, {xi, 0.0}, period, d))
      return std::nullopt;
    return d.y();
  };
  const double span = 0.2;
  const int n = 64;
  double xi_prev = xi_seed - span;
  auto f_prev = alpha_of(xi_prev);
  for (int i = 1; i <= n; ++i) {
    const double xi = xi_seed - span + 2.0 * span * i / n;
    const auto f = alpha_of(xi);
    if (f_prev && f && *f_prev * *f < 0.0) {
      double lo = xi_prev, hi = xi;
      double flo = *f_prev;
      for (int it = 0; it < 120 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        const auto fm = alpha_of(mid);
        if (!fm) return std::nullopt;
        if (flo * *fm > 0.0) {
          lo = mid;
          flo = *fm;
        } else {
          hi = mid;
        }
      }
      const BoundaryState cand{0.5 * (lo + hi), 0.0};
      Vec2 d;
      if (orbit_displacement(p, curve, cand, period, d) && d.norm() < tol)
        return BoundaryState{wrap_angle(cand.xi), 0.0};
      return std::nullopt;
    }
    xi_prev = xi;
    f_prev = f;
  }
  return std::nullopt;
}

}  // namespace

std::optional<BoundaryState> refine_periodic(const PhysParams& p,
                                             const BoundaryCurve& curve,
                                             const BoundaryState& seed,
                                             int period, double tol,
                                             int max_iter) {
  auto displacement = [&](const BoundaryState& x, Vec2& d) {
    return orbit_displacement(p, curve, x, period, d);
  };

  auto fallback = [&]() -> std::optional<BoundaryState> {
    if (std::abs(seed.alpha) < 1e-3)
      return bisect_on_symmetry_line(p, curve, seed.xi, period, tol);
    return std::nullopt;
  };

  BoundaryState x = seed;
  Vec2 d;
  if (!displacement(x, d)) return fallback();
  for (int it = 0; it < max_iter; ++it) {
    const double res = d.norm();
    if (res < tol) return BoundaryState{wrap_angle(x.xi), x.alpha};

    Mat2 J;
    const double hs = 1e-6;
    for (int j = 0; j < 2; ++j) {
      BoundaryState xp = x, xm = x;
      (j == 0 ? xp.xi : xp.alpha) += hs;
      (j == 0 ? xm.xi : xm.alpha) -= hs;
      Vec2 dp, dm;
      if (!displacement(xp, dp) || !displacement(xm, dm)) return fallback();
      J.col(j) = (dp - dm) / (2.0 * hs);
    }
    const Vec2 step = J.fullPivLu().solve(-d);
    if (!step.allFinite()) return fallback();

    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k < 14; ++k) {
      BoundaryState xn{x.xi + lambda * step.x(), x.alpha + lambda * step.y()};
      Vec2 dn;
      if (std::abs(xn.alpha) < half_pi && displacement(xn, dn) &&
          dn.norm() < res) {
        x = xn;
        d = dn;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) return fallback();
  }
  if (d.norm() < tol) return BoundaryState{wrap_angle(x.xi), x.alpha};
  return fallback();
}

}  // namespace refbill
