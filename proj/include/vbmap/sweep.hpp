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

#pragma once

#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "vbmap/hamiltonian.hpp"
#include "vbmap/response.hpp"

namespace vbmap {

enum class GridKind { line_parallel, line_transverse, polar_arc, sphere_shell, custom };
enum class Quantity { energies, transitions, gradient, curvature, t2, probability, eminence };

std::string to_string(GridKind kind);
std::string to_string(Quantity q);
GridKind parse_grid_kind(const std::string& s);
Quantity parse_quantity(const std::string& s);

struct GridPoint {
  double b0 = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

/// Field grid. Ranged axes are inclusive at both ends except phi on a sphere
/// shell, which covers [0, 2 pi) without the duplicate endpoint.
struct SweepGrid {
  GridKind kind = GridKind::line_parallel;
  double b0_min = 0.0;    // line sweeps
  double b0_max = 6.0;
  int n = 501;
  double b0 = 1.0;        // arcs and shells
  double theta_min = 0.0;
  double theta_max = 0.0;
  int n_theta = 181;
  double phi = 0.0;       // lines and arcs
  int n_phi = 181;
  std::vector<GridPoint> custom;

  static SweepGrid line(GridKind axis, double bmin, double bmax, int n, double phi = 0.0);
  static SweepGrid polar_arc(double b0, double theta_min, double theta_max, double phi, int n);
  static SweepGrid sphere(double b0, int n_theta, int n_phi);

  void validate() const;
  std::vector<GridPoint> points() const;
  // Point index of (theta row, phi column) on a sphere shell.
  std::size_t sphere_index(int row, int col) const { return static_cast<std::size_t>(col) * n_theta + row; }
};

/// How transitions are chosen at each grid point.
struct SweepSelector {
  enum class Kind { all, max_probability, explicit_pairs, tracked };
  // Reference transition for `tracked`, picked at the first point of each chain.
  enum class Reference { max_probability, min_gradient };

  Kind kind = Kind::max_probability;
  double threshold = kDefaultThreshold;
  std::vector<TransitionPair> pairs;
  Reference reference = Reference::min_gradient;
};

std::string to_string(SweepSelector::Kind kind);
SweepSelector::Kind parse_selector_kind(const std::string& s);

struct SweepOptions {
  std::set<Quantity> quantities{Quantity::gradient};
  SweepSelector selector;
  ResponseOptions response;
  int workers = 1;
};

namespace flag {
inline constexpr const char* kMixed = "mixed";
inline constexpr const char* kLowOverlap = "low_overlap";
inline constexpr const char* kBelowThreshold = "below_threshold";
inline constexpr const char* kT2Capped = "t2_capped";
inline constexpr const char* kSolverError = "solver_error";
inline constexpr const char* kTrackLost = "track_lost";
inline constexpr const char* kEminenceDegenerate = "eminence_degenerate";
}  // namespace flag

/// One (field point, transition) row of a sweep dataset. Energy and P are
/// always filled on healthy points; other quantities only when requested.
struct SweepRow {
  std::size_t point = 0;
  double b0 = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  int initial = -1;
  int final = -1;
  int ms_initial = 0;
  int ms_final = 0;
  int mi_final = 0;
  std::optional<double> energy;
  std::optional<double> probability;
  std::optional<double> grad;
  std::optional<double> curv;
  std::optional<double> t2;
  std::string flags;
  std::optional<double> eminence;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepDataset {
  nlohmann::json metadata;
  std::vector<SweepRow> rows;
};

struct SpectrumRow {
  double b0 = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  std::vector<double> energies;
  std::string flags;
};

struct SpectrumDataset {
  nlohmann::json metadata;
  std::vector<SpectrumRow> rows;
};

/// Runs `fn(i)` for i in [0, n) over `workers` threads. `fn` must only write
/// to slot i of its own output.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

SweepDataset run_sweep(const HamiltonianModel& model, const SweepGrid& grid,
                       const SweepOptions& options);

SweepDataset sweep_line(const HamiltonianModel& model, GridKind axis, double bmin, double bmax,
                        int n, const SweepOptions& options);
SweepDataset sweep_polar_arc(const HamiltonianModel& model, double b0, double theta_min,
                             double theta_max, double phi, int n, const SweepOptions& options);
SweepDataset sweep_sphere(const HamiltonianModel& model, double b0, int n_theta, int n_phi,
                          const SweepOptions& options);

/// Interior strict local minima of a sampled curve with value below `ceiling`.
std::vector<std::size_t> local_minima(std::span<const double> y, double ceiling);

/// Smallest grad_mag over all 0 <-> +/-1 transitions at B = (0, 0, bz).
double lower_envelope_gradient(const HamiltonianModel& model, double bz,
                               const ResponseOptions& options = {});

/// Energy levels at every grid point.
SpectrumDataset sweep_spectrum(const HamiltonianModel& model, const SweepGrid& grid, int workers);

}  // namespace vbmap
