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

#include "vbmap/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

#include "vbmap/error.hpp"
#include "vbmap/spectra.hpp"

namespace vbmap {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTrackRefine = 0.9;  // bisect a tracking step below this overlap^2
constexpr int kTrackMaxDepth = 10;

template <class E>
E parse_enum(const std::map<std::string, E>& table, const std::string& s, const char* what) {
  auto it = table.find(s);
  if (it == table.end()) throw ValidationError(std::string("unknown ") + what + " '" + s + "'");
  return it->second;
}

template <class E>
std::string enum_name(const std::map<std::string, E>& table, E v) {
  for (const auto& [k, e] : table)
    if (e == v) return k;
  return "?";
}

const std::map<std::string, GridKind>& grid_names() {
  static const std::map<std::string, GridKind> t{{"line-parallel", GridKind::line_parallel},
                                                 {"line-transverse", GridKind::line_transverse},
                                                 {"polar-arc", GridKind::polar_arc},
                                                 {"sphere-shell", GridKind::sphere_shell},
                                                 {"custom", GridKind::custom}};
  return t;
}

const std::map<std::string, Quantity>& quantity_names() {
  static const std::map<std::string, Quantity> t{
      {"energies", Quantity::energies},     {"transitions", Quantity::transitions},
      {"gradient", Quantity::gradient},     {"curvature", Quantity::curvature},
      {"t2", Quantity::t2},                 {"probability", Quantity::probability},
      {"eminence", Quantity::eminence}};
  return t;
}

const std::map<std::string, SweepSelector::Kind>& selector_names() {
  static const std::map<std::string, SweepSelector::Kind> t{
      {"all", SweepSelector::Kind::all},
      {"max-probability", SweepSelector::Kind::max_probability},
      {"explicit", SweepSelector::Kind::explicit_pairs},
      {"tracked", SweepSelector::Kind::tracked}};
  return t;
}

double linspace(double lo, double hi, int n, int k) {
  if (n == 1) return lo;
  if (k == n - 1) return hi;
  return lo + (hi - lo) * k / (n - 1);
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

void check_phi(double phi) {
  require(std::isfinite(phi) && phi >= 0.0 && phi < 2.0 * kPi, "phi must lie in [0, 2 pi)");
}

void check_theta(double theta) {
  require(std::isfinite(theta) && theta >= 0.0 && theta <= kPi, "theta must lie in [0, pi]");
}

Eigen::Vector3d cartesian(const GridPoint& p) { return field_vector(p.b0, p.theta, p.phi); }

void add_flag(std::string& flags, const char* f) {
  if (flags.find(f) != std::string::npos) return;
  if (!flags.empty()) flags += ';';
  flags += f;
}

bool wants(const SweepOptions& o, Quantity q) { return o.quantities.count(q) > 0; }

bool wants_fd(const SweepOptions& o) {
  return wants(o, Quantity::gradient) || wants(o, Quantity::curvature) || wants(o, Quantity::t2);
}

// Transition record for an arbitrary state pair, used when a tracked pair
// drifts away from the manifold labels.
TransitionRecord make_record(const EigenSystem& es, const SpinSpace& space, int i, int f) {
  TransitionRecord t;
  t.initial = i;
  t.final = f;
  t.energy = es.energies[f] - es.energies[i];
  t.probability = transition_probability(es.states.col(i), es.states.col(f), space.sx, space.sy);
  t.ms_initial = es.ms_label[i];
  t.ms_final = es.ms_label[f];
  t.mi_initial = es.mi_label(i);
  t.mi_final = es.mi_label(f);
  t.mixed = es.mixed[i] || es.mixed[f];
  return t;
}

struct ManifoldMax {
  double plus = 0.0;
  double minus = 0.0;
};

ManifoldMax manifold_max(const std::vector<TransitionRecord>& all) {
  ManifoldMax m;
  for (const auto& t : all) {
    if (t.ms_final > 0) m.plus = std::max(m.plus, t.probability);
    else m.minus = std::max(m.minus, t.probability);
  }
  return m;
}

struct PointContext {
  const HamiltonianModel& model;
  const SweepOptions& options;
};

// Rows for already-chosen transitions at one point.
std::vector<SweepRow> make_rows(const PointContext& ctx, std::size_t index, const GridPoint& gp,
                                const EigenSystem& es, const std::vector<TransitionRecord>& all,
                                const std::vector<TransitionRecord>& chosen,
                                const std::string& extra_flags) {
  const auto& opt = ctx.options;
  std::vector<SensitivityResult> sens;
  if (wants_fd(opt)) sens = sensitivity(ctx.model, cartesian(gp), es, chosen, opt.response);
  const ManifoldMax mm = wants(opt, Quantity::eminence) ? manifold_max(all) : ManifoldMax{};

  std::vector<SweepRow> rows;
  rows.reserve(chosen.size());
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    const auto& t = chosen[k];
    SweepRow r;
    r.point = index;
    r.b0 = gp.b0;
    r.theta = gp.theta;
    r.phi = gp.phi;
    r.initial = t.initial;
    r.final = t.final;
    r.ms_initial = t.ms_initial;
    r.ms_final = t.ms_final;
    r.mi_final = t.mi_final;
    r.energy = t.energy;
    r.probability = t.probability;
    r.flags = extra_flags;
    if (t.mixed) add_flag(r.flags, flag::kMixed);
    if (!sens.empty()) {
      const auto& s = sens[k];
      if (wants(opt, Quantity::gradient)) r.grad = s.grad_mag;
      if (wants(opt, Quantity::curvature)) r.curv = s.curv_mag;
      if (wants(opt, Quantity::t2)) {
        r.t2 = s.t2.value;
        if (s.t2.capped) add_flag(r.flags, flag::kT2Capped);
      }
      if (s.match_flag) add_flag(r.flags, flag::kLowOverlap);
    }
    if (wants(opt, Quantity::eminence)) {
      const double m = t.ms_final > 0 ? mm.plus : mm.minus;
      r.eminence = m > 0.0 ? t.probability / m : 0.0;
      if (!(m > 0.0)) add_flag(r.flags, flag::kEminenceDegenerate);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

SweepRow error_row(std::size_t index, const GridPoint& gp) {
  SweepRow r;
  r.point = index;
  r.b0 = gp.b0;
  r.theta = gp.theta;
  r.phi = gp.phi;
  r.flags = flag::kSolverError;
  return r;
}

std::vector<SweepRow> independent_point(const PointContext& ctx, std::size_t index,
                                        const GridPoint& gp) {
  const EigenSystem es = eigensystem(ctx.model.at(cartesian(gp)), ctx.model.space());
  const auto all = transitions(es, ctx.model.space());
  const auto& sel = ctx.options.selector;
  Selector s;
  switch (sel.kind) {
    case SweepSelector::Kind::all: s = Selector::all(); break;
    case SweepSelector::Kind::explicit_pairs: s = Selector::explicit_pairs(sel.pairs); break;
    default: s = Selector::max_probability(sel.threshold); break;
  }
  bool below = false;
  const auto chosen = select_transitions(all, s, &below);
  return make_rows(ctx, index, gp, es, all, chosen, below ? flag::kBelowThreshold : "");
}

// Reference pair at the start of a tracked chain.
TransitionPair chain_reference(const PointContext& ctx, const GridPoint& gp, const EigenSystem& es,
                               const std::vector<TransitionRecord>& all, bool* below) {
  const auto& sel = ctx.options.selector;
  std::vector<TransitionRecord> cand;
  for (const auto& t : all)
    if (t.probability > sel.threshold) cand.push_back(t);
  *below = cand.empty();
  if (cand.empty() || sel.reference == SweepSelector::Reference::max_probability) {
    const auto best = select_transitions(all, Selector::max_probability(sel.threshold));
    return {best.front().initial, best.front().final};
  }
  const auto sens = sensitivity(ctx.model, cartesian(gp), es, cand, ctx.options.response);
  std::size_t best = 0;
  for (std::size_t k = 1; k < sens.size(); ++k)
    if (sens[k].grad_mag < sens[best].grad_mag) best = k;
  return {cand[best].initial, cand[best].final};
}

struct TrackStep {
  TransitionPair pair;
  double overlap = 1.0;
};

GridPoint midpoint(const GridPoint& a, const GridPoint& b) {
  return {0.5 * (a.b0 + b.b0), 0.5 * (a.theta + b.theta), 0.5 * (a.phi + b.phi)};
}

TrackStep follow(const HamiltonianModel& model, const EigenSystem& es_a, const GridPoint& a,
                 const GridPoint& b, const EigenSystem& es_b, TransitionPair pair, int depth) {
  const StateMatch m = match_states(es_a, es_b);
  const double ov = std::min(m.overlap[pair.initial], m.overlap[pair.final]);
  if (ov >= kTrackRefine || depth >= kTrackMaxDepth) {
    return {{m.permutation[pair.initial], m.permutation[pair.final]}, ov};
  }
  const GridPoint mid = midpoint(a, b);
  const EigenSystem es_mid = eigensystem(model.at(cartesian(mid)), model.space());
  const TrackStep s1 = follow(model, es_a, a, mid, es_mid, pair, depth + 1);
  const TrackStep s2 = follow(model, es_mid, mid, b, es_b, s1.pair, depth + 1);
  return {s2.pair, std::min(s1.overlap, s2.overlap)};
}

// One tracked chain over consecutive grid points; fills rows[index] for each.
void run_chain(const PointContext& ctx, const std::vector<GridPoint>& pts,
               const std::vector<std::size_t>& chain, std::vector<std::vector<SweepRow>>& rows) {
  std::optional<EigenSystem> prev;
  GridPoint prev_gp;
  TransitionPair pair;
  std::string sticky;  // flags carried along the chain
  for (std::size_t index : chain) {
    const GridPoint& gp = pts[index];
    try {
      EigenSystem es = eigensystem(ctx.model.at(cartesian(gp)), ctx.model.space());
      const auto all = transitions(es, ctx.model.space());
      std::string flags = sticky;
      if (!prev) {
        bool below = false;
        pair = chain_reference(ctx, gp, es, all, &below);
        if (below) {
          add_flag(sticky, flag::kBelowThreshold);
          flags = sticky;
        }
      } else {
        const TrackStep st = follow(ctx.model, *prev, prev_gp, gp, es, pair, 0);
        pair = st.pair;
        if (st.overlap < kMatchFlagOverlap) add_flag(flags, flag::kTrackLost);
      }
      const auto rec = make_record(es, ctx.model.space(), pair.initial, pair.final);
      rows[index] = make_rows(ctx, index, gp, es, all, {rec}, flags);
      prev = std::move(es);
      prev_gp = gp;
    } catch (const NumericError&) {
      rows[index] = {error_row(index, gp)};
      // Restart the chain from the next healthy point.
      prev.reset();
      add_flag(sticky, flag::kTrackLost);
    }
  }
}

}  // namespace

std::string to_string(GridKind kind) { return enum_name(grid_names(), kind); }
std::string to_string(Quantity q) { return enum_name(quantity_names(), q); }
std::string to_string(SweepSelector::Kind kind) { return enum_name(selector_names(), kind); }
GridKind parse_grid_kind(const std::string& s) { return parse_enum(grid_names(), s, "grid kind"); }
Quantity parse_quantity(const std::string& s) { return parse_enum(quantity_names(), s, "quantity"); }
SweepSelector::Kind parse_selector_kind(const std::string& s) {
  return parse_enum(selector_names(), s, "selector");
}

SweepGrid SweepGrid::line(GridKind axis, double bmin, double bmax, int n, double phi) {
  SweepGrid g;
  g.kind = axis;
  g.b0_min = bmin;
  g.b0_max = bmax;
  g.n = n;
  g.phi = phi;
  return g;
}

SweepGrid SweepGrid::polar_arc(double b0, double theta_min, double theta_max, double phi, int n) {
  SweepGrid g;
  g.kind = GridKind::polar_arc;
  g.b0 = b0;
  g.theta_min = theta_min;
  g.theta_max = theta_max;
  g.phi = phi;
  g.n = n;
  return g;
}

SweepGrid SweepGrid::sphere(double b0, int n_theta, int n_phi) {
  SweepGrid g;
  g.kind = GridKind::sphere_shell;
  g.b0 = b0;
  g.n_theta = n_theta;
  g.n_phi = n_phi;
  return g;
}

void SweepGrid::validate() const {
  switch (kind) {
    case GridKind::line_parallel:
    case GridKind::line_transverse:
      require(std::isfinite(b0_min) && std::isfinite(b0_max), "B0 range must be finite");
      require(b0_min >= 0.0, "B0_min must be >= 0");
      require(b0_min < b0_max, "line sweep needs B0_min < B0_max");
      require(n >= 2, "line sweep needs n >= 2");
      check_phi(phi);
      break;
    case GridKind::polar_arc:
      require(std::isfinite(b0) && b0 > 0.0, "polar arc needs B0 > 0");
      check_theta(theta_min);
      check_theta(theta_max);
      check_phi(phi);
      require(theta_min <= theta_max, "polar arc needs theta_min <= theta_max");
      if (theta_min < theta_max) require(n >= 2, "polar arc needs n >= 2");
      break;
    case GridKind::sphere_shell:
      require(std::isfinite(b0) && b0 > 0.0, "sphere shell needs B0 > 0");
      require(n_theta >= 2 && n_phi >= 2, "sphere shell needs n_theta, n_phi >= 2");
      break;
    case GridKind::custom:
      require(!custom.empty(), "custom grid has no points");
      for (const auto& p : custom) {
        require(std::isfinite(p.b0) && p.b0 >= 0.0, "custom point needs finite B0 >= 0");
        check_theta(p.theta);
        check_phi(p.phi);
      }
      break;
  }
}

std::vector<GridPoint> SweepGrid::points() const {
  validate();
  std::vector<GridPoint> out;
  switch (kind) {
    case GridKind::line_parallel:
    case GridKind::line_transverse: {
      const double theta = kind == GridKind::line_parallel ? 0.0 : kPi / 2.0;
      for (int k = 0; k < n; ++k) out.push_back({linspace(b0_min, b0_max, n, k), theta, phi});
      break;
    }
    case GridKind::polar_arc: {
      const int count = theta_min == theta_max ? 1 : n;
      for (int k = 0; k < count; ++k)
        out.push_back({b0, linspace(theta_min, theta_max, count, k), phi});
      break;
    }
    case GridKind::sphere_shell:
      out.resize(static_cast<std::size_t>(n_theta) * n_phi);
      for (int col = 0; col < n_phi; ++col) {
        const double p = 2.0 * kPi * col / n_phi;
        for (int row = 0; row < n_theta; ++row)
          out[sphere_index(row, col)] = {b0, linspace(0.0, kPi, n_theta, row), p};
      }
      break;
    case GridKind::custom:
      out = custom;
      break;
  }
  return out;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers < 1) throw ValidationError("worker count must be >= 1");
  const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

SweepDataset run_sweep(const HamiltonianModel& model, const SweepGrid& grid,
                       const SweepOptions& options) {
  if (options.quantities.empty()) throw ValidationError("quantity set is empty");
  options.response.noise.validate();
  require(std::isfinite(options.response.step) && options.response.step > 0.0,
          "finite-difference step must be > 0");
  require(options.response.t2_cap > 0.0, "T2 cap must be > 0");
  require(options.selector.threshold >= 0.0 && options.selector.threshold <= 1.0,
          "probability threshold must lie in [0, 1]");
  if (options.selector.kind == SweepSelector::Kind::explicit_pairs) {
    require(!options.selector.pairs.empty(), "explicit selector needs at least one pair");
  }
  const auto pts = grid.points();
  const PointContext ctx{model, options};
  std::vector<std::vector<SweepRow>> per_point(pts.size());

  if (options.selector.kind == SweepSelector::Kind::tracked) {
    std::vector<std::vector<std::size_t>> chains;
    if (grid.kind == GridKind::sphere_shell) {
      for (int col = 0; col < grid.n_phi; ++col) {
        std::vector<std::size_t> c;
        for (int row = 0; row < grid.n_theta; ++row) c.push_back(grid.sphere_index(row, col));
        chains.push_back(std::move(c));
      }
    } else {
      chains.emplace_back(pts.size());
      for (std::size_t k = 0; k < pts.size(); ++k) chains.front()[k] = k;
    }
    parallel_for(chains.size(), options.workers,
                 [&](std::size_t c) { run_chain(ctx, pts, chains[c], per_point); });
  } else {
    parallel_for(pts.size(), options.workers, [&](std::size_t k) {
      try {
        per_point[k] = independent_point(ctx, k, pts[k]);
      } catch (const NumericError&) {
        per_point[k] = {error_row(k, pts[k])};
      }
    });
  }

  SweepDataset ds;
  ds.metadata = {{"grid_points", pts.size()}};
  for (auto& rows : per_point)
    for (auto& r : rows) ds.rows.push_back(std::move(r));
  return ds;
}

SweepDataset sweep_line(const HamiltonianModel& model, GridKind axis, double bmin, double bmax,
                        int n, const SweepOptions& options) {
  require(axis == GridKind::line_parallel || axis == GridKind::line_transverse,
          "sweep_line needs a line grid kind");
  return run_sweep(model, SweepGrid::line(axis, bmin, bmax, n), options);
}

SweepDataset sweep_polar_arc(const HamiltonianModel& model, double b0, double theta_min,
                             double theta_max, double phi, int n, const SweepOptions& options) {
  return run_sweep(model, SweepGrid::polar_arc(b0, theta_min, theta_max, phi, n), options);
}

SweepDataset sweep_sphere(const HamiltonianModel& model, double b0, int n_theta, int n_phi,
                          const SweepOptions& options) {
  return run_sweep(model, SweepGrid::sphere(b0, n_theta, n_phi), options);
}

std::vector<std::size_t> local_minima(std::span<const double> y, double ceiling) {
  std::vector<std::size_t> out;
  for (std::size_t k = 1; k + 1 < y.size(); ++k) {
    if (y[k] < y[k - 1] && y[k] < y[k + 1] && y[k] < ceiling) out.push_back(k);
  }
  return out;
}

double lower_envelope_gradient(const HamiltonianModel& model, double bz,
                               const ResponseOptions& options) {
  const auto res = sensitivity(model, Eigen::Vector3d(0.0, 0.0, bz), Selector::all(), options);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : res) best = std::min(best, r.grad_mag);
  return best;
}

SpectrumDataset sweep_spectrum(const HamiltonianModel& model, const SweepGrid& grid, int workers) {
  const auto pts = grid.points();
  SpectrumDataset ds;
  ds.rows.resize(pts.size());
  parallel_for(pts.size(), workers, [&](std::size_t k) {
    auto& row = ds.rows[k];
    row.b0 = pts[k].b0;
    row.theta = pts[k].theta;
    row.phi = pts[k].phi;
    try {
      const auto eig = solve_hermitian(model.at(cartesian(pts[k])));
      row.energies.assign(eig.values.data(), eig.values.data() + eig.values.size());
    } catch (const NumericError&) {
      row.flags = flag::kSolverError;
    }
  });
  ds.metadata = {{"grid_points", pts.size()}, {"levels", model.space().dimension()}};
  return ds;
}

}  // namespace vbmap
