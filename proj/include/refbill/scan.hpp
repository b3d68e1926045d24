#pragma once

#include <string>
#include <vector>

#include "refbill/return_map.hpp"
#include "refbill/stability.hpp"
#include "refbill/types.hpp"

namespace refbill {

// Two-parameter sweep of the elliptic discriminants. Axis parameters are
// named from {E, omega, h, mu, e}; the remaining values come from base/ecc.
struct GridSpec {
  std::string x_param = "mu";
  std::string y_param = "h";
  double x_lo = 0.0, x_hi = 1.0;
  int x_n = 2;
  double y_lo = 0.0, y_hi = 1.0;
  int y_n = 2;
  PhysParams base;
  double ecc = 0.0;
};

struct GridCell {
  double x = 0.0, y = 0.0;
  double delta0 = 0.0, delta1 = 0.0;
  int sign0 = 0, sign1 = 0;
  bool admissible = true;
};

std::vector<GridCell> delta_sign_grid(const GridSpec& spec);

// Brent root of Delta^(axis)(scan_param) over [lo, hi]; throws NoSignChange
// when the bracket does not straddle a sign change. scan_param is one of
// {E, omega, h, mu, e}.
double bifurcation_root(const PhysParams& base, double ecc, Axis axis,
                        const std::string& scan_param, double lo, double hi,
                        double rtol = 1e-10);

// Seed grid for phase portraits over [0,2pi) x [alpha_lo, alpha_hi].
struct PortraitSpec {
  PhysParams params;
  double ecc = 0.0;
  int xi_n = 24;
  int alpha_n = 24;
  double alpha_lo = -0.6;
  double alpha_hi = 0.6;
  int iters = 500;
};

std::vector<OrbitRecord> phase_portrait(const PortraitSpec& spec);

// Uniform free-fall profile over [0, pi/2].
std::vector<FreeFallSample> freefall_profile(const PhysParams& p, double ecc,
                                             int n_samples);

}  // namespace refbill
