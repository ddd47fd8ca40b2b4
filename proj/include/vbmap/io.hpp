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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vbmap/analytic.hpp"
#include "vbmap/hamiltonian.hpp"
#include "vbmap/sweep.hpp"

namespace vbmap {

inline constexpr const char* kConfigSchema = "vbmap-config/1";
inline constexpr const char* kSweepSchema = "vbmap-sweep/1";
inline constexpr const char* kSpectrumSchema = "vbmap-spectrum/1";
inline constexpr const char* kVersion = "0.1.0";

enum class OutputFormat { csv, json };

/// Everything needed to reproduce one run. Physical fields carry their units
/// in the JSON key (B0_min_mT, sigma_B_mT, ...).
struct RunConfig {
  std::optional<SpinSystem> system;  // empty means the shipped default
  SweepGrid grid;
  SweepOptions sweep;
  std::optional<double> analytic_a_zz;             // overrides the A_zz used by the PT model
  std::vector<analytic::ShellTerm> shells;         // extra shells for multi-shell dips
  std::string output_path;
  OutputFormat format = OutputFormat::csv;

  SpinSystem resolved_system() const;
  double resolved_a_zz() const;
  void validate() const;
};

RunConfig default_run_config();

nlohmann::json to_json(const SpinSystem& sys);
SpinSystem spin_system_from_json(const nlohmann::json& j);

/// Full config, including execution-only settings (workers, output).
nlohmann::json to_json(const RunConfig& cfg);
/// The part of the config that determines the dataset contents; embedded in
/// every output file. Omits the output path and worker count.
nlohmann::json reproducible_json(const RunConfig& cfg);
/// Throws ValidationError on unknown keys, missing units or bad values.
RunConfig run_config_from_json(const nlohmann::json& j);

/// Reads a JSON config, or the config embedded in a previously written dataset.
RunConfig load_run_config(const std::string& path);

nlohmann::json dataset_metadata(const RunConfig& cfg, const char* schema);

inline const std::vector<std::string>& sweep_csv_columns() {
  static const std::vector<std::string> cols{
      "B0_mT", "theta_rad", "phi_rad", "i_idx", "f_idx", "ms_i", "ms_f", "mI_f", "f_MHz", "P",
      "grad_MHz_per_mT", "curv_MHz_per_mT2", "t2_us", "flags", "eminence"};
  return cols;
}

std::string csv_escape(const std::string& field);
std::vector<std::string> csv_split(const std::string& line);

void write_sweep_csv(const SweepDataset& ds, std::ostream& out);
void write_sweep_json(const SweepDataset& ds, std::ostream& out);
SweepDataset read_sweep_csv(std::istream& in);
SweepDataset read_sweep_json(std::istream& in);

void write_spectrum_csv(const SpectrumDataset& ds, std::ostream& out);
void write_spectrum_json(const SpectrumDataset& ds, std::ostream& out);
SpectrumDataset read_spectrum_csv(std::istream& in);

}  // namespace vbmap
