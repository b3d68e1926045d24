#include "refbill/rootfind.hpp"

#include <algorithm>
#include <cmath>

namespace refbill {

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol, int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw NoSignChange("bisect: no sign change in bracket");
  for (int i = 0; i < max_iter && hi - lo > xtol; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

double brent(const std::function<double(double)>& f, double lo, double hi,
             double rtol, int max_iter) {
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw NoSignChange("brent: no sign change in bracket");
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int i = 0; i < max_iter; ++i) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol = 2.0 * std::numeric_limits<double>::epsilon() *
                           std::abs(b) + 0.5 * rtol * std::max(1.0, std::abs(b));
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;
    if (std::abs(e) < tol || std::abs(fa) <= std::abs(fb)) {
      d = m; e = m;
    } else {
      double s = fb / fa, p, q;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc, r = fb / fc;
        p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d; d = p / q;
      } else {
        d = m; e = m;
      }
    }
    a = b; fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a; fc = fa;
      d = b - a; e = d;
    }
  }
  return b;
}

std::optional<double> first_crossing(const std::function<double(double)>& f,
                                     double span, const CrossingScan& scan) {
  const double sgn = scan.from_positive ? 1.0 : -1.0;
  const double ds = span / scan.n_grid;

  auto refine = [&](double lo, double hi) {
    for (int it = 0; it < 250; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if (fm == 0.0) return mid;
      if (sgn * fm > 0.0) lo = mid; else hi = mid;
      if (hi - lo <= scan.xtol && std::abs(fm) <= scan.ftol) break;
      if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, std::abs(hi)))
        break;  // slope too steep for ftol; bracket is machine-tight
    }
    return 0.5 * (lo + hi);
  };

  double s_prev = scan.s_min;
  double f_prev = f(s_prev);
  if (sgn * f_prev <= 0.0 && std::abs(f_prev) > 1e-13)
    throw CrossingNotBracketed("first_crossing: section not left at start");
  for (int i = 1; i <= scan.n_grid; ++i) {
    const double s = i * ds;
    if (s <= s_prev) continue;
    const double fs = f(s);
    if (sgn * fs <= 0.0) return refine(s_prev, s);
    s_prev = s;
    f_prev = fs;
  }
  return std::nullopt;
}

}  // namespace refbill
