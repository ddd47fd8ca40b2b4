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

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vbmap/spin_algebra.hpp"

namespace vbmap {

// Units throughout: energies in MHz (E/h), fields in mT, angles in radians.
inline constexpr double kGammaElectron = 28.02495;  // MHz/mT, free electron
inline constexpr double kGammaN14 = 3.0777e-3;      // MHz/mT
inline constexpr double kZeroFieldSplittingVB = 3450.0;

struct NucleusSpec {
  std::string label;
  double spin = 1.0;
  double gamma_n = kGammaN14;
  RankTwoTensor hyperfine;
  RankTwoTensor quadrupole;
};

/// Spin-1 electron with zero-field splitting D and strain epsilon, coupled to nuclei.
struct SpinSystem {
  double zfs = kZeroFieldSplittingVB;
  double strain = 0.0;
  double gamma_e = kGammaElectron;
  std::vector<NucleusSpec> nuclei;

  /// Subsystem dimensions, electron first.
  std::vector<int> dims() const;
  int dimension() const;

  /// Throws ValidationError for non-finite parameters, gamma_e <= 0, bad spins.
  void validate() const;
};

/// Negatively charged boron vacancy in hBN with its three first-shell 14N.
SpinSystem default_vb_system();

/// Cartesian field B0 * (sin t cos p, sin t sin p, cos t).
Eigen::Vector3d field_vector(double b0, double theta, double phi);

/// Bias field in spherical form plus an optional Cartesian fluctuation offset.
struct FieldPoint {
  double b0 = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();

  Eigen::Vector3d cartesian() const { return field_vector(b0, theta, phi) + offset; }
};

/// Embedded electron and collective nuclear operators on the composite space.
struct SpinSpace {
  std::vector<int> dims;
  ComplexMatrix sx;
  ComplexMatrix sy;
  ComplexMatrix sz;
  ComplexMatrix sz2;
  ComplexMatrix iz_total;

  explicit SpinSpace(const SpinSystem& sys);
  int dimension() const { return static_cast<int>(sz.rows()); }
};

/// Precomputed field-independent part and field couplings of the Hamiltonian,
/// H(B) = H_static + sum_d B_d * C_d. Immutable after construction.
class HamiltonianModel {
 public:
  explicit HamiltonianModel(SpinSystem sys);

  ComplexMatrix at(const Eigen::Vector3d& field) const;
  ComplexMatrix at(const FieldPoint& field) const { return at(field.cartesian()); }

  const SpinSystem& system() const { return sys_; }
  const SpinSpace& space() const { return space_; }

 private:
  SpinSystem sys_;
  SpinSpace space_;
  ComplexMatrix static_part_;
  ComplexMatrix coupling_[3];
};

/// Full Hamiltonian in MHz, Hermitian bit-for-bit.
ComplexMatrix build_hamiltonian(const SpinSystem& sys, const FieldPoint& field);
ComplexMatrix build_hamiltonian(const SpinSystem& sys, const Eigen::Vector3d& field);

}  // namespace vbmap
