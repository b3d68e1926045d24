#pragma once

// Test-only reference integrators: adaptive Bulirsch-Stoer propagation of the
// physical-plane equations with dense-output event location on the boundary.
// Independent of the closed-form/Levi-Civita production path it checks.

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <optional>

#include "refbill/model.hpp"
#include "refbill/types.hpp"

namespace refbill::oracle {

using State = std::array<double, 4>;  // x, y, vx, vy

struct KeplerRhs {
  double mu;
  void operator()(const State& s, State& d, double) const {
    const double r2 = s[0] * s[0] + s[1] * s[1];
    const double r3 = r2 * std::sqrt(r2);
    d[0] = s[2];
    d[1] = s[3];
    d[2] = -mu * s[0] / r3;
    d[3] = -mu * s[1] / r3;
  }
};

struct HarmonicRhs {
  double omega2;
  void operator()(const State& s, State& d, double) const {
    d[0] = s[2];
    d[1] = s[3];
    d[2] = -omega2 * s[0];
    d[3] = -omega2 * s[1];
  }
};

struct Crossing {
  double t = 0.0;
  State state{};
};

// First time in (t_min, t_max] at which the implicit boundary value crosses
// zero in the requested direction (+1: from negative to positive).
template <typename Rhs>
std::optional<Crossing> integrate_to_boundary(const Rhs& rhs, State x0,
                                              const BoundaryCurve& curve,
                                              double t_max, int direction,
                                              double t_min = 1e-8) {
  namespace ode = boost::numeric::odeint;
  auto stepper = ode::bulirsch_stoer_dense_out<State>(1e-12, 1e-11);
  const double sgn = static_cast<double>(direction);

  auto value = [&](const State& s) {
    return sgn * curve.implicit(Vec2(s[0], s[1]));
  };

  stepper.initialize(x0, 0.0, std::min(1e-4, t_max));
  const double dt_obs = std::min(1e-3, t_max / 64.0);
  double t_prev = t_min;
  double v_prev = 0.0;
  bool armed = false;
  while (true) {
    const auto interval = stepper.do_step(rhs);
    const double t_lo = interval.first;
    const double t_hi = std::min(interval.second, t_max);
    // observe the dense interpolation on a grid fine enough not to hop over
    // a brief excursion across the section
    const int nsub =
        std::max(1, static_cast<int>(std::ceil((t_hi - t_lo) / dt_obs)));
    for (int k = 1; k <= nsub; ++k) {
      const double t_cur = t_lo + (t_hi - t_lo) * k / nsub;
      if (t_cur <= t_min) continue;
      State s_cur;
      stepper.calc_state(t_cur, s_cur);
      const double v_cur = value(s_cur);
      if (armed && v_prev < 0.0 && v_cur >= 0.0) {
        double lo = t_prev, hi = t_cur;
        for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
          const double mid = 0.5 * (lo + hi);
          State sm;
          stepper.calc_state(mid, sm);
          (value(sm) < 0.0 ? lo : hi) = mid;
        }
        Crossing c;
        c.t = 0.5 * (lo + hi);
        stepper.calc_state(c.t, c.state);
        return c;
      }
      t_prev = t_cur;
      v_prev = v_cur;
      armed = true;
    }
    if (stepper.current_time() >= t_max) break;
  }
  return std::nullopt;
}

}  // namespace refbill::oracle
