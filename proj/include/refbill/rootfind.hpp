#pragma once

#include <cmath>
#include <functional>
#include <optional>

#include "refbill/types.hpp"

namespace refbill {

// Bisection on [lo, hi] with f(lo), f(hi) of opposite sign (or zero at an end).
// Refines until the bracket is below xtol, returns the midpoint.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol = 1e-14, int max_iter = 200);

// Brent's method: bracketed root to relative tolerance rtol.
double brent(const std::function<double(double)>& f, double lo, double hi,
             double rtol = 1e-12, int max_iter = 200);

// First sign change of f on a uniform grid over (0, span], starting positive.
// f(0) is on the section itself, so roots below s_min are skipped and the
// initial slope must have the expected sign. Returns the refined root, or
// nullopt when no bracket is found.
struct CrossingScan {
  int n_grid = 2048;
  double s_min = 1e-10;
  bool from_positive = true;   // look for + -> <=0 (outer); false: - -> >=0 (inner)
  double xtol = 1e-13;
  double ftol = 1e-11;
};

std::optional<double> first_crossing(const std::function<double(double)>& f,
                                     double span, const CrossingScan& scan);

}  // namespace refbill
