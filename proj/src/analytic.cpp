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

#include "vbmap/analytic.hpp"

#include <cmath>

#include "vbmap/error.hpp"

namespace vbmap::analytic {

void PtConfig::validate() const {
  if (!std::isfinite(zfs) || !std::isfinite(a_zz)) throw ValidationError("D and A_zz must be finite");
  if (!std::isfinite(gamma_e) || gamma_e <= 0.0) throw ValidationError("gamma_e must be > 0");
  if (ms != 1 && ms != -1) throw ValidationError("m_s must be +1 or -1");
}

double pt_transition_energy(const PtConfig& cfg, double bz, const Eigen::Vector3d& b) {
  const double z = cfg.gamma_e * (bz + b.z()) + cfg.mi * cfg.a_zz;
  const double t = cfg.gamma_e * std::hypot(b.x(), b.y());
  return cfg.zfs + cfg.ms * std::hypot(z, t);
}

PtGradient pt_gradient(const PtConfig& cfg, double bz, const Eigen::Vector3d& b) {
  const double g = cfg.gamma_e;
  const double z = g * (bz + b.z()) + cfg.mi * cfg.a_zz;
  const double y = std::hypot(z, g * std::hypot(b.x(), b.y()));
  PtGradient out;
  if (y == 0.0) {
    out.grad = Eigen::Vector3d(0.0, 0.0, cfg.ms * g);
    out.kink = true;
  } else {
    out.grad = Eigen::Vector3d(cfg.ms * g * g * b.x() / y, cfg.ms * g * g * b.y() / y,
                               cfg.ms * g * z / y);
  }
  out.magnitude = out.grad.norm();
  return out;
}

std::vector<double> dip_fields(double a_zz, double gamma_e, std::span<const int> mi_values) {
  if (!std::isfinite(gamma_e) || gamma_e <= 0.0) throw ValidationError("gamma_e must be > 0");
  std::vector<double> out;
  out.reserve(mi_values.size());
  for (int mi : mi_values) out.push_back(-mi * a_zz / gamma_e);
  return out;
}

double multi_shell_dip_field(std::span<const ShellTerm> shells, double gamma_e) {
  if (shells.empty()) throw ValidationError("multi-shell dip needs at least one shell");
  if (!std::isfinite(gamma_e) || gamma_e <= 0.0) throw ValidationError("gamma_e must be > 0");
  double sum = 0.0;
  for (const auto& s : shells) sum += s.mi * s.a_zz;
  return -sum / gamma_e;
}

double effective_out_of_plane_coupling(const RankTwoTensor& a) {
  return std::sqrt(a.xz() * a.xz() + a.yz() * a.yz() + a.zz() * a.zz());
}

}  // namespace vbmap::analytic
