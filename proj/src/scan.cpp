#include "refbill/scan.hpp"

#include <cmath>

#include "refbill/parallel.hpp"
#include "refbill/rootfind.hpp"

namespace refbill {

namespace {

struct CellParams {
  PhysParams p;
  double ecc;
};

CellParams apply_param(CellParams c, const std::string& name, double value) {
  if (name == "E") c.p.energy = value;
  else if (name == "omega") c.p.omega = value;
  else if (name == "h") c.p.h = value;
  else if (name == "mu") c.p.mu = value;
  else if (name == "e") c.ecc = value;
  else throw ConfigError("unknown scan parameter: " + name);
  return c;
}

bool admissible(const CellParams& c) {
  if (!(c.ecc >= 0.0 && c.ecc < 1.0)) return false;
  try {
    validate_params(c.p);
  } catch (const Error&) {
    return false;
  }
  return true;
}

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

}  // namespace

std::vector<GridCell> delta_sign_grid(const GridSpec& spec) {
  if (spec.x_n < 2 || spec.y_n < 2)
    throw ConfigError("delta_sign_grid: resolutions must be >= 2");

  const std::size_t n = static_cast<std::size_t>(spec.x_n) * spec.y_n;
  std::vector<GridCell> cells(n);
  parallel_for(n, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) % spec.x_n;
    const int j = static_cast<int>(idx) / spec.x_n;
    GridCell& cell = cells[idx];
    cell.x = spec.x_lo + (spec.x_hi - spec.x_lo) * i / (spec.x_n - 1);
    cell.y = spec.y_lo + (spec.y_hi - spec.y_lo) * j / (spec.y_n - 1);
    CellParams c{spec.base, spec.ecc};
    c = apply_param(c, spec.x_param, cell.x);
    c = apply_param(c, spec.y_param, cell.y);
    cell.admissible = admissible(c);
    if (!cell.admissible) return;
    cell.delta0 = discriminant_elliptic(c.p, c.ecc, Axis::axis0);
    cell.delta1 = discriminant_elliptic(c.p, c.ecc, Axis::axis1);
    cell.sign0 = sign_of(cell.delta0);
    cell.sign1 = sign_of(cell.delta1);
  });
  return cells;
}

double bifurcation_root(const PhysParams& base, double ecc, Axis axis,
                        const std::string& scan_param, double lo, double hi,
                        double rtol) {
  auto delta = [&](double v) {
    CellParams c{base, ecc};
    c = apply_param(c, scan_param, v);
    return discriminant_elliptic(c.p, c.ecc, axis);
  };
  return brent(delta, lo, hi, rtol);
}

std::vector<OrbitRecord> phase_portrait(const PortraitSpec& spec) {
  if (!(spec.alpha_lo > -half_pi) || !(spec.alpha_hi < half_pi) ||
      !(spec.alpha_lo <= spec.alpha_hi))
    throw ConfigError("phase_portrait: alpha seeds must lie inside (-pi/2, pi/2)");
  if (spec.xi_n < 1 || spec.alpha_n < 1 || spec.iters < 1)
    throw ConfigError("phase_portrait: seed counts and iterations must be >= 1");
  const EllipseBoundary curve(spec.ecc);
  const std::size_t n = static_cast<std::size_t>(spec.xi_n) * spec.alpha_n;
  std::vector<OrbitRecord> records(n);
  parallel_for(n, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) % spec.xi_n;
    const int j = static_cast<int>(idx) / spec.xi_n;
    const double xi = two_pi * i / spec.xi_n;
    const double alpha =
        spec.alpha_n > 1
            ? spec.alpha_lo +
                  (spec.alpha_hi - spec.alpha_lo) * j / (spec.alpha_n - 1)
            : 0.5 * (spec.alpha_lo + spec.alpha_hi);
    records[idx] = iterate_orbit(spec.params, curve, {xi, alpha}, spec.iters);
  });
  return records;
}

std::vector<FreeFallSample> freefall_profile(const PhysParams& p, double ecc,
                                             int n_samples) {
  if (n_samples < 2) throw ConfigError("freefall_profile: need >= 2 samples");
  const EllipseBoundary curve(ecc);
  std::vector<FreeFallSample> samples(n_samples);
  parallel_for(static_cast<std::size_t>(n_samples), [&](std::size_t i) {
    const double theta = half_pi * i / (n_samples - 1);
    samples[i] = free_fall_delta(p, curve, theta);
  });
  return samples;
}

}  // namespace refbill
