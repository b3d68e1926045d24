#pragma once

#include <optional>
#include <vector>

#include "refbill/inner_flow.hpp"
#include "refbill/outer_flow.hpp"
#include "refbill/refraction.hpp"
#include "refbill/types.hpp"

namespace refbill {

// A return-map phase point: boundary parameter and outgoing velocity angle
// from the outward normal.
struct BoundaryState {
  double xi = 0.0;
  double alpha = 0.0;
};

enum class Termination { completed, total_reflection, tangency, error };

struct StepResult {
  Termination termination = Termination::completed;
  BoundaryState state;                      // valid when completed
  double outer_time = 0.0;
  double inner_time = 0.0;
  std::optional<TotalReflection> reflection; // set on total_reflection
};

// The first return map F: one outer arc, inward refraction, one inner arc,
// outward refraction. Partial domain: total internal reflection and grazing
// returns terminate the step with a typed cause instead of a state.
StepResult first_return(const PhysParams& p, const BoundaryCurve& curve,
                        const BoundaryState& s);

// The inner-first cycle (inner arc, then outer arc) started from an entering
// state: the state's alpha is the outer-side angle of the velocity entering D
// at xi. Time reversal maps completed F-cycles onto completed cycles of this
// map: if F(xi0, a0) = (xi1, a1) then this map sends (xi1, -a1) to the
// entering state (xi0, -a0).
StepResult first_return_inner_first(const PhysParams& p,
                                    const BoundaryCurve& curve,
                                    const BoundaryState& entering);

struct OrbitRecord {
  std::vector<BoundaryState> states;   // states[0] is the seed
  Termination termination = Termination::completed;
  std::vector<double> outer_times;
  std::vector<double> inner_times;
};

OrbitRecord iterate_orbit(const PhysParams& p, const BoundaryCurve& curve,
                          const BoundaryState& s0, int n_iters);

// Free-fall map: radial outer brake arc at polar angle theta, refraction,
// inner arc; delta is the signed angle from the outward radial direction to
// the exit velocity at the exit point. On total internal reflection delta is
// clamped to +-pi/2 (sign of the inner exit angle) and flagged.
struct FreeFallSample {
  double theta = 0.0;
  double delta = 0.0;
  bool clamped = false;
};

FreeFallSample free_fall_delta(const PhysParams& p, const BoundaryCurve& curve,
                               double theta);

// Zeros of the free-fall map over (0, pi/2), endpoints excluded: candidate
// directions of 2-periodic brake orbits. Each zero is bisected to 1e-10,
// checked against |delta| < 1e-9, filtered of homothetic directions (exit
// perpendicular to the boundary) and verified to close a period-2 orbit of F
// within 1e-6.
std::vector<double> find_brake_orbits(const PhysParams& p,
                                      const BoundaryCurve& curve, int grid_n);

// Damped Newton on the displacement F^n(x) - x with finite-difference
// Jacobian. Returns the refined state when the residual drops below tol.
std::optional<BoundaryState> refine_periodic(const PhysParams& p,
                                             const BoundaryCurve& curve,
                                             const BoundaryState& seed,
                                             int period, double tol = 1e-10,
                                             int max_iter = 60);

// Launch state of the radial (free-fall) direction theta: outgoing radial
// velocity expressed in return-map coordinates.
BoundaryState radial_state(const BoundaryCurve& curve, double theta);

}  // namespace refbill
