#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "refbill/io.hpp"
#include "refbill/model.hpp"
#include "refbill/return_map.hpp"
#include "refbill/scan.hpp"
#include "refbill/selftest.hpp"
#include "refbill/stability.hpp"

using nlohmann::json;
using namespace refbill;

namespace {

struct CommonOpts {
  double E = 2.5;
  double omega = std::sqrt(2.0);
  double h = 0.1;
  double mu = 1.0;
  double ecc = 0.0;
  std::string boundary_type = "ellipse";
  std::string config_path;
};

// --config JSON supplies defaults; explicitly passed flags win.
void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->set_help_flag("--help", "print help");  // frees -h / --h
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--E", o.E, "reference energy E");
  cmd->add_option("--omega", o.omega, "harmonic frequency omega (not omega^2)");
  cmd->add_option("--h", o.h, "inner energy offset h");
  cmd->add_option("--mu", o.mu, "Keplerian mass parameter mu");
  cmd->add_option("--ecc", o.ecc, "ellipse eccentricity in [0,1)");
}

// config values fill any slot whose flag was not explicitly passed
template <typename T>
void take(const json& blk, CLI::App* cmd, const char* key, const char* flag,
          T& slot) {
  if (blk.contains(key) && cmd->count(flag) == 0) slot = blk[key].get<T>();
}

json load_config(const CommonOpts& o) {
  if (o.config_path.empty()) return json();
  std::ifstream f(o.config_path);
  if (!f) throw ConfigError("cannot read config file: " + o.config_path);
  json cfg;
  try {
    f >> cfg;
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("config parse error: ") + ex.what());
  }
  return cfg;
}

json merge_config(CLI::App* cmd, CommonOpts& o) {
  const json cfg = load_config(o);
  if (cfg.is_null()) return cfg;
  const json& p = cfg.contains("params") ? cfg["params"] : cfg;
  take(p, cmd, "E", "--E", o.E);
  take(p, cmd, "omega", "--omega", o.omega);
  take(p, cmd, "h", "--h", o.h);
  take(p, cmd, "mu", "--mu", o.mu);
  if (cfg.contains("boundary")) {
    const json& b = cfg["boundary"];
    if (b.contains("type")) o.boundary_type = b["type"].get<std::string>();
    take(b, cmd, "eccentricity", "--ecc", o.ecc);
  } else {
    take(cfg, cmd, "ecc", "--ecc", o.ecc);
  }
  return cfg;
}

PhysParams params_of(const CommonOpts& o) {
  PhysParams p{o.E, o.omega, o.h, o.mu};
  validate_params(p);
  if (!(o.ecc >= 0.0 && o.ecc < 1.0))
    throw ConfigError("eccentricity must lie in [0,1)");
  if (o.boundary_type != "ellipse")
    throw ConfigError("unknown boundary type: " + o.boundary_type +
                      " (only \"ellipse\" is built in)");
  return p;
}

json params_json(const PhysParams& p, double ecc) {
  return {{"energy", p.energy},
          {"omega", p.omega},
          {"h", p.h},
          {"mu", p.mu},
          {"eccentricity", ecc}};
}

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::center: return "center";
    case Classification::saddle: return "saddle";
    case Classification::degenerate: return "degenerate";
  }
  return "degenerate";
}

int run_orbit(const CommonOpts& o, double xi, double alpha, int iters,
              const std::string& out) {
  const PhysParams p = params_of(o);
  const EllipseBoundary curve(o.ecc);
  const OrbitRecord rec = iterate_orbit(p, curve, {xi, alpha}, iters);
  write_csv_file(out, kPortraitHeader, portrait_rows({rec}));
  std::cerr << "orbit: " << rec.states.size() << " states, "
            << termination_name(rec.termination) << ", wrote " << out << "\n";
  return 0;
}

int run_portrait(const CommonOpts& o, const PortraitSpec& spec,
                 const std::string& out, const std::string& svg) {
  const auto records = phase_portrait(spec);
  write_csv_file(out, kPortraitHeader, portrait_rows(records));
  if (!svg.empty()) {
    SvgSeries pts;
    for (const auto& rec : records)
      for (const auto& s : rec.states) pts.points.emplace_back(s.xi, s.alpha);
    write_svg_file(svg, {pts}, 0.0, two_pi, -half_pi, half_pi);
  }
  std::cerr << "portrait: " << records.size() << " orbits, wrote " << out
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"refraction billiards: Kepler-in, harmonic-out planar dynamics"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  // orbit
  auto* orbit = app.add_subcommand("orbit", "iterate one orbit to CSV");
  CommonOpts oo;
  double o_xi = 0.0, o_alpha = 0.0;
  int o_iters = 100;
  std::string o_out = "orbit.csv";
  add_common(orbit, oo);
  orbit->add_option("--xi", o_xi, "initial boundary parameter");
  orbit->add_option("--alpha", o_alpha, "initial outgoing angle");
  orbit->add_option("--iters", o_iters, "iterations")->check(CLI::PositiveNumber);
  orbit->add_option("--out", o_out, "output CSV path");

  // portrait
  auto* portrait = app.add_subcommand("portrait", "seed-grid phase portrait");
  CommonOpts po;
  PortraitSpec pspec;
  std::string p_out = "portrait.csv", p_svg;
  add_common(portrait, po);
  portrait->add_option("--xi-seeds", pspec.xi_n, "seeds along xi")
      ->check(CLI::PositiveNumber);
  portrait->add_option("--alpha-seeds", pspec.alpha_n, "seeds along alpha")
      ->check(CLI::PositiveNumber);
  portrait->add_option("--alpha-lo", pspec.alpha_lo, "alpha range low");
  portrait->add_option("--alpha-hi", pspec.alpha_hi, "alpha range high");
  portrait->add_option("--iters", pspec.iters, "iterations per seed")
      ->check(CLI::PositiveNumber);
  portrait->add_option("--out", p_out, "output CSV path");
  portrait->add_option("--svg", p_svg, "optional SVG scatter path");

  // delta-scan
  auto* scan = app.add_subcommand("delta-scan", "discriminant sign grid");
  CommonOpts so;
  GridSpec gspec;
  std::string s_out = "scan.csv";
  add_common(scan, so);
  scan->add_option("--x-param", gspec.x_param, "x parameter (E|omega|h|mu|e)");
  scan->add_option("--y-param", gspec.y_param, "y parameter (E|omega|h|mu|e)");
  scan->add_option("--x-lo", gspec.x_lo)->required();
  scan->add_option("--x-hi", gspec.x_hi)->required();
  scan->add_option("--x-n", gspec.x_n, "x resolution");
  scan->add_option("--y-lo", gspec.y_lo)->required();
  scan->add_option("--y-hi", gspec.y_hi)->required();
  scan->add_option("--y-n", gspec.y_n, "y resolution");
  scan->add_option("--out", s_out, "output CSV path");

  // bifurcate
  auto* bif = app.add_subcommand("bifurcate", "root of Delta along one parameter");
  CommonOpts bo;
  std::string b_param = "h";
  int b_axis = 1;
  double b_lo = 0.0, b_hi = 1.0;
  add_common(bif, bo);
  bif->add_option("--param", b_param, "scan parameter (E|omega|h|mu|e)");
  bif->add_option("--axis", b_axis, "homothetic axis (0|1)")
      ->check(CLI::Range(0, 1));
  bif->add_option("--lo", b_lo)->required();
  bif->add_option("--hi", b_hi)->required();

  // freefall
  auto* ff = app.add_subcommand("freefall", "free-fall map profile to CSV");
  CommonOpts fo;
  int f_samples = 256;
  std::string f_out = "freefall.csv";
  add_common(ff, fo);
  ff->add_option("--theta-samples", f_samples, "number of samples on [0,pi/2]");
  ff->add_option("--out", f_out, "output CSV path");

  // brake
  auto* brake = app.add_subcommand("brake", "free-fall zeros / brake orbits");
  CommonOpts ko;
  int k_grid = 256;
  add_common(brake, ko);
  brake->add_option("--grid", k_grid, "theta samples over (0,pi/2)")
      ->check(CLI::PositiveNumber);

  // stability
  auto* stab = app.add_subcommand("stability", "homothetic stability report");
  CommonOpts to;
  int t_axis = 0;
  add_common(stab, to);
  stab->add_option("--axis", t_axis, "homothetic axis (0|1)")
      ->check(CLI::Range(0, 1));

  // selftest
  auto* self = app.add_subcommand("selftest", "run the anchored verification suite");
  self->set_help_flag("--help", "print help");

  CLI11_PARSE(app, argc, argv);

  try {
    if (orbit->parsed()) {
      const json cfg = merge_config(orbit, oo);
      if (cfg.contains("orbit")) {
        const json& blk = cfg["orbit"];
        take(blk, orbit, "xi", "--xi", o_xi);
        take(blk, orbit, "alpha", "--alpha", o_alpha);
        take(blk, orbit, "iters", "--iters", o_iters);
        take(blk, orbit, "out", "--out", o_out);
      }
      return run_orbit(oo, o_xi, o_alpha, o_iters, o_out);
    }
    if (portrait->parsed()) {
      const json cfg = merge_config(portrait, po);
      if (cfg.contains("portrait")) {
        const json& blk = cfg["portrait"];
        take(blk, portrait, "xi_seeds", "--xi-seeds", pspec.xi_n);
        take(blk, portrait, "alpha_seeds", "--alpha-seeds", pspec.alpha_n);
        take(blk, portrait, "alpha_lo", "--alpha-lo", pspec.alpha_lo);
        take(blk, portrait, "alpha_hi", "--alpha-hi", pspec.alpha_hi);
        take(blk, portrait, "iters", "--iters", pspec.iters);
        take(blk, portrait, "out", "--out", p_out);
        take(blk, portrait, "svg", "--svg", p_svg);
      }
      pspec.params = params_of(po);
      pspec.ecc = po.ecc;
      return run_portrait(po, pspec, p_out, p_svg);
    }
    if (scan->parsed()) {
      const json cfg = merge_config(scan, so);
      if (cfg.contains("scan")) {
        const json& blk = cfg["scan"];
        take(blk, scan, "x_param", "--x-param", gspec.x_param);
        take(blk, scan, "y_param", "--y-param", gspec.y_param);
        take(blk, scan, "x_lo", "--x-lo", gspec.x_lo);
        take(blk, scan, "x_hi", "--x-hi", gspec.x_hi);
        take(blk, scan, "x_n", "--x-n", gspec.x_n);
        take(blk, scan, "y_lo", "--y-lo", gspec.y_lo);
        take(blk, scan, "y_hi", "--y-hi", gspec.y_hi);
        take(blk, scan, "y_n", "--y-n", gspec.y_n);
        take(blk, scan, "out", "--out", s_out);
      }
      gspec.base = params_of(so);
      gspec.ecc = so.ecc;
      write_csv_file(s_out, kScanHeader, scan_rows(delta_sign_grid(gspec)));
      std::cerr << "delta-scan: wrote " << s_out << "\n";
      return 0;
    }
    if (bif->parsed()) {
      const json cfg = merge_config(bif, bo);
      if (cfg.contains("bifurcate")) {
        const json& blk = cfg["bifurcate"];
        take(blk, bif, "param", "--param", b_param);
        take(blk, bif, "axis", "--axis", b_axis);
        take(blk, bif, "lo", "--lo", b_lo);
        take(blk, bif, "hi", "--hi", b_hi);
      }
      const PhysParams p = params_of(bo);
      const double root =
          bifurcation_root(p, bo.ecc, b_axis == 0 ? Axis::axis0 : Axis::axis1,
                           b_param, b_lo, b_hi);
      json out = {{"scan_param", b_param},
                  {"axis", b_axis},
                  {"root", root},
                  {"bracket_lo", b_lo},
                  {"bracket_hi", b_hi},
                  {"params", params_json(p, bo.ecc)}};
      write_json(std::cout, out);
      return 0;
    }
    if (ff->parsed()) {
      const json cfg = merge_config(ff, fo);
      if (cfg.contains("freefall")) {
        const json& blk = cfg["freefall"];
        take(blk, ff, "theta_samples", "--theta-samples", f_samples);
        take(blk, ff, "out", "--out", f_out);
      }
      const PhysParams p = params_of(fo);
      if (f_samples < 2) throw ConfigError("--theta-samples must be >= 2");
      write_csv_file(f_out, kFreefallHeader,
                     freefall_rows(freefall_profile(p, fo.ecc, f_samples)));
      std::cerr << "freefall: wrote " << f_out << "\n";
      return 0;
    }
    if (brake->parsed()) {
      const json cfg = merge_config(brake, ko);
      if (cfg.contains("brake")) take(cfg["brake"], brake, "grid", "--grid", k_grid);
      const PhysParams p = params_of(ko);
      const EllipseBoundary curve(ko.ecc);
      const auto zeros = find_brake_orbits(p, curve, k_grid);
      json jz = json::array();
      for (double th : zeros) jz.push_back(th);
      json out = {{"zeros", jz},
                  {"count", zeros.size()},
                  {"params", params_json(p, ko.ecc)}};
      write_json(std::cout, out);
      return 0;
    }
    if (stab->parsed()) {
      const json cfg = merge_config(stab, to);
      if (cfg.contains("stability"))
        take(cfg["stability"], stab, "axis", "--axis", t_axis);
      const PhysParams p = params_of(to);
      const Axis ax = t_axis == 0 ? Axis::axis0 : Axis::axis1;
      const StabilityReport r = stability_report_elliptic(p, to.ecc, ax);
      json out = {{"axis", t_axis},
                  {"e0", r.quadruple.E0},
                  {"eps_e", r.quadruple.eps_E},
                  {"i0", r.quadruple.I0},
                  {"eps_i", r.quadruple.eps_I},
                  {"df", {r.DF(0, 0), r.DF(0, 1), r.DF(1, 0), r.DF(1, 1)}},
                  {"trace", r.trace},
                  {"det", r.det},
                  {"delta", r.Delta},
                  {"classification", classification_name(r.classification)},
                  {"params", params_json(p, to.ecc)}};
      write_json(std::cout, out);
      return 0;
    }
    if (self->parsed()) {
      return run_selftest(std::cout) == 0 ? 0 : 2;
    }
  } catch (const ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return 1;
  } catch (const NonPositiveParameter& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return 1;
  } catch (const HillViolation& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return 1;
  } catch (const Error& ex) {
    std::cerr << "numerical failure: " << ex.what() << "\n";
    return 2;
  }
  return 1;
}
