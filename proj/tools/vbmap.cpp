// Copyright 2026 The vbmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// vbmap: field-sensitivity maps for a spin-1 defect coupled to nuclear spins.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vbmap/analytic.hpp"
#include "vbmap/error.hpp"
#include "vbmap/io.hpp"
#include "vbmap/response.hpp"
#include "vbmap/spectra.hpp"
#include "vbmap/sweep.hpp"

namespace {

using nlohmann::json;
using namespace vbmap;

constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;

// Flag values; anything left unset falls back to the config file.
struct Overrides {
  std::string config;
  std::string output;
  std::string format;
  std::optional<int> workers;
  std::optional<std::string> grid;
  std::optional<double> b0, b0_min, b0_max, theta_min, theta_max, phi;
  std::optional<int> n, n_theta, n_phi;
  std::vector<std::string> quantities;
  std::optional<std::string> selector;
  std::optional<std::string> reference;
  std::vector<std::string> pairs;
  bool all = false;
  std::optional<double> threshold, fd_step, sigma_b, t2_cap, a_zz;
  std::vector<std::string> shells;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON config, or a dataset written by vbmap");
  cmd->add_option("-o,--output", o.output, "output file (default: stdout)");
  cmd->add_option("--format", o.format, "csv or json (default: from extension or config)")
      ->check(CLI::IsMember({"csv", "json"}));
}

void add_grid(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-j,--workers", o.workers, "worker threads");
  cmd->add_option("--grid", o.grid,
                  "line-parallel, line-transverse, polar-arc, sphere-shell or custom");
  cmd->add_option("--b0", o.b0, "field magnitude for arcs and shells (mT)");
  cmd->add_option("--b0-min", o.b0_min, "line sweep start (mT)");
  cmd->add_option("--b0-max", o.b0_max, "line sweep end (mT)");
  cmd->add_option("-n", o.n, "points on a line or arc");
  cmd->add_option("--n-theta", o.n_theta, "polar samples on a shell");
  cmd->add_option("--n-phi", o.n_phi, "azimuthal samples on a shell");
  cmd->add_option("--theta-min", o.theta_min, "arc start (rad)");
  cmd->add_option("--theta-max", o.theta_max, "arc end (rad)");
  cmd->add_option("--phi", o.phi, "azimuth of lines and arcs (rad)");
}

void add_map(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--quantity", o.quantities,
                  "energies, transitions, gradient, curvature, t2, probability, eminence");
  cmd->add_option("--selector", o.selector, "max-probability, all, explicit or tracked");
  cmd->add_option("--reference", o.reference, "tracked start: min-gradient or max-probability");
  cmd->add_option("--pair", o.pairs, "explicit transition as i:f (repeatable)");
  cmd->add_flag("--all", o.all, "all 0 <-> +/-1 transitions");
  cmd->add_option("--threshold", o.threshold, "probability threshold");
  cmd->add_option("--fd-step", o.fd_step, "finite-difference step (mT)");
  cmd->add_option("--sigma-b", o.sigma_b, "field noise standard deviation (mT)");
  cmd->add_option("--t2-cap", o.t2_cap, "T2 ceiling (us)");
}

void add_analytic(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--a-zz", o.a_zz, "A_zz for the perturbative model (MHz)");
  cmd->add_option("--shell", o.shells, "extra shell as m_I:A_zz (repeatable)");
}

std::pair<std::string, std::string> split_colon(const std::string& s) {
  const auto c = s.find(':');
  if (c == std::string::npos) throw ValidationError("expected a:b, got '" + s + "'");
  return {s.substr(0, c), s.substr(c + 1)};
}

int to_int(const std::string& s) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError("not an integer: '" + s + "'");
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError("not a number: '" + s + "'");
}

bool ends_with(const std::string& s, const std::string& tail) {
  return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

RunConfig resolve(const Overrides& o) {
  RunConfig cfg = o.config.empty() ? default_run_config() : load_run_config(o.config);
  auto& g = cfg.grid;
  if (o.grid) g.kind = parse_grid_kind(*o.grid);
  if (o.b0) g.b0 = *o.b0;
  if (o.b0_min) g.b0_min = *o.b0_min;
  if (o.b0_max) g.b0_max = *o.b0_max;
  if (o.n) g.n = *o.n;
  if (o.n_theta) g.n_theta = *o.n_theta;
  if (o.n_phi) g.n_phi = *o.n_phi;
  if (o.theta_min) g.theta_min = *o.theta_min;
  if (o.theta_max) g.theta_max = *o.theta_max;
  if (o.phi) g.phi = *o.phi;
  if (o.workers) cfg.sweep.workers = *o.workers;

  auto& sel = cfg.sweep.selector;
  if (!o.quantities.empty()) {
    cfg.sweep.quantities.clear();
    for (const auto& q : o.quantities) cfg.sweep.quantities.insert(parse_quantity(q));
  }
  if (o.selector) sel.kind = parse_selector_kind(*o.selector);
  if (o.all) sel.kind = SweepSelector::Kind::all;
  if (!o.pairs.empty()) {
    sel.pairs.clear();
    for (const auto& p : o.pairs) {
      const auto [a, b] = split_colon(p);
      sel.pairs.push_back({to_int(a), to_int(b)});
    }
    if (!o.selector) sel.kind = SweepSelector::Kind::explicit_pairs;
  }
  if (o.reference) {
    if (*o.reference == "min-gradient") sel.reference = SweepSelector::Reference::min_gradient;
    else if (*o.reference == "max-probability")
      sel.reference = SweepSelector::Reference::max_probability;
    else throw ValidationError("unknown reference '" + *o.reference + "'");
  }
  if (o.threshold) sel.threshold = *o.threshold;
  if (o.fd_step) cfg.sweep.response.step = *o.fd_step;
  if (o.sigma_b) cfg.sweep.response.noise.sigma_b = *o.sigma_b;
  if (o.t2_cap) cfg.sweep.response.t2_cap = *o.t2_cap;
  if (o.a_zz) cfg.analytic_a_zz = *o.a_zz;
  if (!o.shells.empty()) {
    cfg.shells.clear();
    for (const auto& s : o.shells) {
      const auto [a, b] = split_colon(s);
      cfg.shells.push_back({to_int(a), to_double(b)});
    }
  }
  if (!o.output.empty()) cfg.output_path = o.output;
  if (!o.format.empty()) cfg.format = o.format == "json" ? OutputFormat::json : OutputFormat::csv;
  else if (ends_with(o.output, ".json")) cfg.format = OutputFormat::json;
  else if (ends_with(o.output, ".csv")) cfg.format = OutputFormat::csv;
  cfg.validate();
  return cfg;
}

// Writes through `fn` to the configured path, or stdout.
template <class Fn>
void emit(const RunConfig& cfg, Fn fn) {
  if (cfg.output_path.empty()) {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + cfg.output_path + "'");
  fn(out);
  if (!out) throw ValidationError("write to '" + cfg.output_path + "' failed");
}

bool has_solver_error(const std::string& flags) {
  return flags.find(flag::kSolverError) != std::string::npos;
}

int cmd_spectrum(const Overrides& o) {
  const RunConfig cfg = resolve(o);
  const HamiltonianModel model(cfg.resolved_system());
  SpectrumDataset ds = sweep_spectrum(model, cfg.grid, cfg.sweep.workers);
  json meta = dataset_metadata(cfg, kSpectrumSchema);
  meta.update(ds.metadata);
  ds.metadata = meta;
  emit(cfg, [&](std::ostream& out) {
    if (cfg.format == OutputFormat::json) write_spectrum_json(ds, out);
    else write_spectrum_csv(ds, out);
  });
  for (const auto& r : ds.rows) {
    if (has_solver_error(r.flags)) {
      std::cerr << "vbmap: eigensolver failed at B0=" << r.b0 << " mT, theta=" << r.theta
                << ", phi=" << r.phi << '\n';
      return kExitNumeric;
    }
  }
  return 0;
}

int cmd_map(const Overrides& o) {
  const RunConfig cfg = resolve(o);
  const HamiltonianModel model(cfg.resolved_system());
  SweepDataset ds = run_sweep(model, cfg.grid, cfg.sweep);
  json meta = dataset_metadata(cfg, kSweepSchema);
  meta.update(ds.metadata);
  ds.metadata = meta;
  emit(cfg, [&](std::ostream& out) {
    if (cfg.format == OutputFormat::json) write_sweep_json(ds, out);
    else write_sweep_csv(ds, out);
  });
  std::size_t failed = 0;
  for (const auto& r : ds.rows) failed += has_solver_error(r.flags);
  if (failed) {
    std::cerr << "vbmap: " << failed << " grid point(s) hit an eigensolver failure\n";
    return kExitNumeric;
  }
  return 0;
}

int cmd_dips(const Overrides& o) {
  const RunConfig cfg = resolve(o);
  const auto sys = cfg.resolved_system();
  const double a_zz = cfg.resolved_a_zz();
  const std::vector<int> mi{-3, -2, -1, 0, 1, 2, 3};
  const auto fields = analytic::dip_fields(a_zz, sys.gamma_e, mi);

  json dips = json::array();
  for (std::size_t k = 0; k < mi.size(); ++k) dips.push_back({{"m_I", mi[k]}, {"B_z_mT", fields[k]}});
  json report{{"A_zz_MHz", a_zz}, {"gamma_e_MHz_per_mT", sys.gamma_e}, {"dips", dips}};
  if (!sys.nuclei.empty()) {
    report["A_eff_MHz"] = analytic::effective_out_of_plane_coupling(sys.nuclei.front().hyperfine);
  }
  std::optional<double> multi;
  if (!cfg.shells.empty()) {
    multi = analytic::multi_shell_dip_field(cfg.shells, sys.gamma_e);
    json shells = json::array();
    for (const auto& s : cfg.shells) shells.push_back({{"m_I", s.mi}, {"A_zz_MHz", s.a_zz}});
    report["multi_shell"] = {{"shells", shells}, {"B_z_mT", *multi}};
  }

  emit(cfg, [&](std::ostream& out) {
    if (cfg.format == OutputFormat::json) {
      out << report.dump(2) << '\n';
      return;
    }
    char buf[64];
    out << "kind,m_I,B_z_mT\n";
    for (std::size_t k = 0; k < mi.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.12g", fields[k]);
      out << "single," << mi[k] << ',' << buf << '\n';
    }
    if (multi) {
      std::snprintf(buf, sizeof buf, "%.12g", *multi);
      out << "multi-shell,," << buf << '\n';
    }
  });
  return 0;
}

// ---- validate ---------------------------------------------------------------

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

json to_json(const Check& c) {
  return {{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"tolerance", c.tolerance},
          {"detail", c.detail}};
}

// Numeric dip: a local minimum of the all-transition lower envelope, below
// gamma_e / 2, within tolerance of the predicted field.
std::vector<Check> check_dips(const RunConfig& cfg, const HamiltonianModel& model) {
  const auto& sys = model.system();
  const std::vector<int> mi{-1, -2};
  const auto predicted = analytic::dip_fields(cfg.resolved_a_zz(), sys.gamma_e, mi);
  std::vector<Check> out;
  for (std::size_t k = 0; k < mi.size(); ++k) {
    const double centre = predicted[k];
    const int n = 41;
    std::vector<double> b(n), g(n);
    parallel_for(static_cast<std::size_t>(n), cfg.sweep.workers, [&](std::size_t j) {
      b[j] = std::max(centre - 0.1 + 0.2 * static_cast<double>(j) / (n - 1), 0.0);
      g[j] = lower_envelope_gradient(model, b[j], cfg.sweep.response);
    });
    Check c;
    c.name = "dip_m_I_" + std::to_string(mi[k]);
    c.tolerance = 0.05;
    c.value = INFINITY;
    double found = NAN;
    for (std::size_t j : local_minima(g, 0.5 * sys.gamma_e)) {
      if (std::abs(b[j] - centre) < std::abs(c.value)) {
        c.value = b[j] - centre;
        found = b[j];
      }
    }
    c.pass = std::abs(c.value) <= c.tolerance;
    std::ostringstream d;
    d << "predicted " << centre << " mT, nearest numeric dip ";
    if (std::isnan(found)) d << "none within 0.1 mT";
    else d << found << " mT";
    c.detail = d.str();
    out.push_back(c);
  }
  return out;
}

// Perturbative energies against the numeric model with the transverse
// hyperfine and quadrupole terms removed, where the closed form is exact.
Check check_energies(const RunConfig& cfg) {
  SpinSystem sys = cfg.resolved_system();
  for (auto& n : sys.nuclei) {
    n.hyperfine = RankTwoTensor::from_components(0.0, 0.0, n.hyperfine.zz());
    n.quadrupole = RankTwoTensor();
  }
  const HamiltonianModel model(sys);
  analytic::PtConfig pt;
  pt.zfs = sys.zfs;
  pt.gamma_e = sys.gamma_e;
  pt.a_zz = cfg.resolved_a_zz();
  Check c;
  c.name = "energy_transverse_free";
  c.tolerance = 2.0;
  for (double bz : {6.0, 10.0, 15.0, 20.0, 25.0}) {
    const auto es = eigensystem(model.at(Eigen::Vector3d(0.0, 0.0, bz)), model.space());
    for (const auto& t : transitions(es, model.space())) {
      if (t.ms_final != -1 || t.mi_initial != t.mi_final || t.probability < 1e-6) continue;
      pt.mi = t.mi_final;
      const double d = std::abs(t.energy - analytic::pt_transition_energy(pt, bz, {0, 0, 0}));
      c.value = std::max(c.value, d);
    }
  }
  c.pass = c.value <= c.tolerance;
  c.detail = "max |f_numeric - f_PT| over B_z in {6,10,15,20,25} mT (MHz)";
  return c;
}

Check check_gradients(const RunConfig& cfg, const HamiltonianModel& model) {
  Check c;
  c.name = "gradient_parallel";
  c.tolerance = 0.01;
  for (double bz : {6.0, 10.0, 15.0, 20.0, 25.0}) {
    const auto res =
        sensitivity(model, Eigen::Vector3d(0.0, 0.0, bz), Selector::all(), cfg.sweep.response);
    const SensitivityResult* best = nullptr;
    for (const auto& r : res) {
      const auto& t = r.transition;
      if (t.ms_final != -1 || t.mi_initial != t.mi_final || t.mixed || r.match_flag) continue;
      if (!best || t.probability > best->transition.probability) best = &r;
    }
    if (!best) {
      c.detail = "no Delta m_I = 0 transition at " + std::to_string(bz) + " mT";
      c.value = INFINITY;
      break;
    }
    analytic::PtConfig pt;
    pt.gamma_e = model.system().gamma_e;
    pt.mi = best->transition.mi_final;
    const double ref = analytic::pt_gradient(pt, bz, {0, 0, 0}).magnitude;
    c.value = std::max(c.value, std::abs(best->grad_mag - ref) / ref);
  }
  c.pass = c.value <= c.tolerance;
  if (c.detail.empty()) c.detail = "max relative deviation of FD grad_mag from gamma_e";
  return c;
}

Check check_algebra(const HamiltonianModel& model) {
  Check c;
  c.name = "hermiticity_trace_count";
  c.tolerance = 1e-8;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bool counts = true;
  for (int k = 0; k < 10; ++k) {
    const double b0 = 30.0 * u(rng);
    const double theta = std::acos(1.0 - 2.0 * u(rng));
    const double phi = 2.0 * std::numbers::pi * u(rng);
    const auto h = model.at(field_vector(b0, theta, phi));
    const double herm = (h - h.adjoint()).cwiseAbs().maxCoeff();
    const auto es = eigensystem(h, model.space());
    const double tr = std::abs(es.energies.sum() - h.trace().real());
    c.value = std::max({c.value, herm, tr});
    counts = counts && transitions(es, model.space()).size() == 1458;
  }
  c.pass = c.value <= c.tolerance && counts;
  c.detail = counts ? "max of |H - H^+| and |sum E - tr H| at 10 random fields"
                    : "transition count differs from 1458";
  return c;
}

int cmd_validate(const Overrides& o) {
  RunConfig cfg = resolve(o);
  const HamiltonianModel model(cfg.resolved_system());
  std::vector<Check> checks = check_dips(cfg, model);
  checks.push_back(check_energies(cfg));
  checks.push_back(check_gradients(cfg, model));
  {
    Check c;
    c.name = "t2_baseline";
    c.tolerance = 0.005;
    const double t2 = estimate_t2(model.system().gamma_e, 0.0, cfg.sweep.response.noise).value;
    const double ref = 1.0 / (model.system().gamma_e * cfg.sweep.response.noise.sigma_b);
    c.value = std::abs(t2 - ref) / ref;
    c.pass = c.value <= c.tolerance;
    c.detail = "T2(f'=gamma_e, f''=0) = " + std::to_string(t2) + " us";
    checks.push_back(c);
  }
  if (model.space().dimension() == 81) checks.push_back(check_algebra(model));

  bool pass = true;
  json list = json::array();
  for (const auto& c : checks) {
    pass = pass && c.pass;
    list.push_back(to_json(c));
  }
  const json report{{"pass", pass}, {"checks", list}};
  emit(cfg, [&](std::ostream& out) { out << report.dump(2) << '\n'; });
  return pass ? 0 : kExitNumeric;
}

int cmd_print_config(const Overrides& o) {
  const RunConfig cfg = resolve(o);
  RunConfig shown = cfg;
  // Expand the default system so every parameter is visible.
  shown.system = cfg.resolved_system();
  std::cout << vbmap::to_json(shown).dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vbmap: field-sensitivity maps for spin-1 defects with nuclear spins"};
  app.set_version_flag("--version", std::string(vbmap::kVersion));
  app.require_subcommand(1);

  Overrides o;
  int (*run)(const Overrides&) = nullptr;

  auto* spectrum = app.add_subcommand("spectrum", "energy levels over a field grid");
  add_common(spectrum, o);
  add_grid(spectrum, o);
  spectrum->callback([&] { run = cmd_spectrum; });

  auto* map = app.add_subcommand("map", "gradient, curvature, T2, P or eminence over a grid");
  add_common(map, o);
  add_grid(map, o);
  add_map(map, o);
  map->callback([&] { run = cmd_map; });

  auto* dips = app.add_subcommand("dips", "predicted low-gradient fields");
  add_common(dips, o);
  add_analytic(dips, o);
  dips->callback([&] { run = cmd_dips; });

  auto* validate = app.add_subcommand("validate", "numeric vs perturbative self-test");
  add_common(validate, o);
  add_analytic(validate, o);
  validate->add_option("-j,--workers", o.workers, "worker threads");
  validate->callback([&] { run = cmd_validate; });

  auto* print = app.add_subcommand("print-config", "print the resolved configuration");
  add_common(print, o);
  add_grid(print, o);
  add_map(print, o);
  add_analytic(print, o);
  print->callback([&] { run = cmd_print_config; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }
  try {
    return run(o);
  } catch (const ValidationError& e) {
    std::cerr << "vbmap: invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericError& e) {
    std::cerr << "vbmap: numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "vbmap: " << e.what() << '\n';
    return kExitNumeric;
  }
}
