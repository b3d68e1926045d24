#include "refbill/inner_flow.hpp"

#include <cmath>

#include "refbill/rootfind.hpp"

namespace refbill {

namespace {

inline Vec2 to_vec(Complex c) { return {c.real(), c.imag()}; }

inline Complex lc_w(const LCState& s0, double Omega, double tau) {
  return s0.w * std::cosh(Omega * tau) + (s0.w_dot / Omega) * std::sinh(Omega * tau);
}

inline Complex lc_w_dot(const LCState& s0, double Omega, double tau) {
  return s0.w * Omega * std::sinh(Omega * tau) + s0.w_dot * std::cosh(Omega * tau);
}

}  // namespace

LCParams lc_params(const PhysParams& p) {
  return {std::sqrt(2.0 * (p.energy + p.h)), p.mu};
}

double lc_energy_of(const PhysParams& p, const LCState& s) {
  const double Omega = lc_params(p).Omega;
  return 0.5 * std::norm(s.w_dot) - 0.5 * Omega * Omega * std::norm(s.w);
}

LCState lc_forward(const PhysParams& p, const BoundaryFrame& frame,
                   IncidenceAngle alpha_in) {
  if (std::abs(std::abs(alpha_in.value) - half_pi) < 1e-9)
    throw TangentialEntry("lc_forward: entry tangent to the boundary");

  const double rho = frame.radius;
  const double theta = frame.polar_angle;
  const double Omega = lc_params(p).Omega;

  // beta: polar offset of the entering physical velocity from the outward
  // radial direction at the entry point (close to pi for entering arcs).
  const Vec2 v = unit_velocity(alpha_in, frame, /*leaving=*/false);
  const double beta = std::atan2(v.y(), v.x()) - theta;

  LCState s;
  s.w = -std::sqrt(rho) * std::polar(1.0, 0.5 * theta);
  s.w_dot = -std::sqrt(2.0 * p.mu + Omega * Omega * rho) *
            std::polar(1.0, 0.5 * theta + beta);
  return s;
}

LCArcResult lc_arc(const PhysParams& p, const BoundaryCurve& curve,
                   const LCState& state0) {
  const double Omega = lc_params(p).Omega;

  auto G = [&](double tau) {
    const Complex w = lc_w(state0, Omega, tau);
    return curve.implicit(to_vec(w * w));
  };

  // exit-time bound from the e^{Omega tau} growth of |w|; sqrt(diam D) < 2
  const double span =
      4.0 * std::asinh(Omega * 2.0 / std::sqrt(2.0 * p.mu)) / Omega;

  CrossingScan scan;
  scan.n_grid = 4096;
  scan.from_positive = false;  // inside -> outside
  auto root = first_crossing(G, span, scan);
  if (!root)
    throw CrossingNotBracketed("lc_arc: no exit crossing within the time bound");

  LCArcResult r;
  r.tau = *root;
  r.exit.w = lc_w(state0, Omega, r.tau);
  r.exit.w_dot = lc_w_dot(state0, Omega, r.tau);
  return r;
}

LCExit lc_backward(const PhysParams& p, const BoundaryCurve& curve,
                   const LCState& exit_state) {
  const Complex z1c = exit_state.w * exit_state.w;
  const Complex zd = exit_state.w * exit_state.w_dot / std::norm(exit_state.w);

  LCExit out;
  out.position = to_vec(z1c);
  out.xi1 = curve.invert_point(out.position);
  const double speed = std::sqrt(2.0 * inner_potential(p, out.position));
  out.velocity = speed * to_vec(zd).normalized();
  const BoundaryFrame f1 = boundary_frame(curve, out.xi1);
  out.beta1 = incidence_angle(out.velocity, f1);
  return out;
}

double lc_physical_time(const PhysParams& p, const LCState& s0, double tau) {
  const double Omega = lc_params(p).Omega;
  const double A = std::norm(s0.w);
  const double B = 2.0 * (s0.w.real() * s0.w_dot.real() +
                          s0.w.imag() * s0.w_dot.imag()) / Omega;
  const double C = std::norm(s0.w_dot) / (Omega * Omega);
  const double s2 = std::sinh(2.0 * Omega * tau);
  const double c2 = std::cosh(2.0 * Omega * tau);
  return A * (tau + s2 / (2.0 * Omega)) + B * (c2 - 1.0) / (2.0 * Omega) +
         C * (s2 / (2.0 * Omega) - tau);
}

double lc_min_radius(const PhysParams& p, const LCState& s0, double tau) {
  const double Omega = lc_params(p).Omega;
  // |w|^2 = |u|^2 e^{2 Om t}/4 + |v|^2 e^{-2 Om t}/4 + Re<u,v>/2,
  // u = w0 + w0'/Om, v = w0 - w0'/Om
  const Complex u = s0.w + s0.w_dot / Omega;
  const Complex v = s0.w - s0.w_dot / Omega;
  const double cu = std::abs(u), cv = std::abs(v);
  const double cross = u.real() * v.real() + u.imag() * v.imag();
  auto r2_at = [&](double t) {
    const double e = std::exp(2.0 * Omega * t);
    return 0.25 * (cu * cu * e + cv * cv / e) + 0.5 * cross;
  };
  double best = std::min(r2_at(0.0), r2_at(tau));
  if (cu > 0.0 && cv > 0.0) {
    const double t_star = std::log(cv / cu) / (2.0 * Omega);
    if (t_star > 0.0 && t_star < tau) best = std::min(best, r2_at(t_star));
  }
  return std::sqrt(std::max(0.0, best));
}

InnerArc inner_arc(const PhysParams& p, const BoundaryCurve& curve, double xi0,
                   IncidenceAngle alpha_in) {
  const BoundaryFrame f0 = boundary_frame(curve, xi0);

  InnerArc arc;
  arc.start_xi = wrap_angle(xi0);
  arc.start_angle = alpha_in;
  arc.lc_start = lc_forward(p, f0, alpha_in);

  const LCArcResult leg = lc_arc(p, curve, arc.lc_start);
  arc.lc_exit = leg.exit;
  arc.lc_flight_time = leg.tau;
  arc.physical_flight_time = lc_physical_time(p, arc.lc_start, leg.tau);
  arc.collision_flag = lc_min_radius(p, arc.lc_start, leg.tau) < 1e-8;

  const LCExit exit = lc_backward(p, curve, leg.exit);
  arc.end_xi = exit.xi1;
  arc.end_angle = exit.beta1;
  return arc;
}

}  // namespace refbill
