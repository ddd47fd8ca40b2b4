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

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vbmap/spin_algebra.hpp"

// Second-order perturbative model of a spin-1 electron coupled to an
// effective collective nuclear spin through A_zz, under a field along z.
namespace vbmap::analytic {

struct PtConfig {
  double zfs = 3450.0;         // MHz
  double gamma_e = 28.02495;   // MHz/mT
  double a_zz = 48.158;        // MHz
  int ms = -1;                 // +1 or -1
  int mi = 0;                  // collective nuclear projection

  void validate() const;
};

/// f = D + m_s sqrt([gamma_e (B_z + b_z) + m_I A_zz]^2 + gamma_e^2 (b_x^2 + b_y^2)).
double pt_transition_energy(const PtConfig& cfg, double bz, const Eigen::Vector3d& b);

struct PtGradient {
  Eigen::Vector3d grad = Eigen::Vector3d::Zero();
  double magnitude = 0.0;
  bool kink = false;  // exact dip with b = 0; grad is the limit along +b_z
};

PtGradient pt_gradient(const PtConfig& cfg, double bz, const Eigen::Vector3d& b);

/// B_z = -m_I A_zz / gamma_e for each m_I.
std::vector<double> dip_fields(double a_zz, double gamma_e, std::span<const int> mi_values);

struct ShellTerm {
  int mi = 0;
  double a_zz = 0.0;
};

/// B_z = -sum_i m_I,i A_zz,i / gamma_e.
double multi_shell_dip_field(std::span<const ShellTerm> shells, double gamma_e);

/// sqrt(A_zx^2 + A_zy^2 + A_zz^2).
double effective_out_of_plane_coupling(const RankTwoTensor& a);

}  // namespace vbmap::analytic
