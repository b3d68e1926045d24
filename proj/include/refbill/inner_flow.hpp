#pragma once

#include <complex>

#include "refbill/model.hpp"
#include "refbill/refraction.hpp"
#include "refbill/types.hpp"

namespace refbill {

using Complex = std::complex<double>;

// Levi-Civita conjugation constants: z = w^2, dtau/ds = 1/(2|z|) turns the
// inner Kepler problem into an inverted oscillator w'' = Omega^2 w with
// Omega = sqrt(2(E+h)) and regularized energy mu.
struct LCParams {
  double Omega = 0.0;
  double lc_energy = 0.0;
};

LCParams lc_params(const PhysParams& p);

struct LCState {
  Complex w;
  Complex w_dot;
};

// Regularized energy |w'|^2/2 - (Omega^2/2)|w|^2, conserved and equal to mu.
double lc_energy_of(const PhysParams& p, const LCState& s);

// Entry transform: physical boundary data (frame, entering angle) to the
// regularized state on the negative square-root determination,
// w(0) = -sqrt(rho) e^{i theta/2}, |w'(0)| = sqrt(2 mu + Omega^2 rho).
LCState lc_forward(const PhysParams& p, const BoundaryFrame& frame,
                   IncidenceAngle alpha_in);

// Propagate w(tau) = w0 cosh(Omega tau) + (w0'/Omega) sinh(Omega tau) to the
// first tau > 0 at which w(tau)^2 crosses the boundary from inside.
struct LCArcResult {
  LCState exit;
  double tau = 0.0;
};

LCArcResult lc_arc(const PhysParams& p, const BoundaryCurve& curve,
                   const LCState& state0);

// Exit transform back to physical boundary data. The physical velocity is
// w w' / |w|^2, rescaled onto the exact zero-energy speed sqrt(2 V_I).
struct LCExit {
  double xi1 = 0.0;
  IncidenceAngle beta1;  // exit angle fed to refract_outward
  Vec2 position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
};

LCExit lc_backward(const PhysParams& p, const BoundaryCurve& curve,
                   const LCState& exit_state);

// One inner Keplerian arc boundary-to-boundary, via the regularized flow.
struct InnerArc {
  double start_xi = 0.0;
  IncidenceAngle start_angle;  // entering, from inward normal
  double end_xi = 0.0;
  IncidenceAngle end_angle;    // leaving, from outward normal (beta_1)
  double lc_flight_time = 0.0;
  double physical_flight_time = 0.0;
  bool collision_flag = false; // min |w| < 1e-8 along the arc
  LCState lc_start;
  LCState lc_exit;
};

InnerArc inner_arc(const PhysParams& p, const BoundaryCurve& curve, double xi0,
                   IncidenceAngle alpha_in);

// Physical time elapsed after Levi-Civita time tau, s = int_0^tau 2|w|^2,
// in closed form.
double lc_physical_time(const PhysParams& p, const LCState& s0, double tau);

// Minimum of |w| along [0, tau] in closed form (exactly zero on collision arcs).
double lc_min_radius(const PhysParams& p, const LCState& s0, double tau);

}  // namespace refbill
