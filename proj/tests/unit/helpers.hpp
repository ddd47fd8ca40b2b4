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

#include <complex>

#include "vbmap/hamiltonian.hpp"

namespace vbmap::testing {

// Default system with every nuclear coupling removed.
inline SpinSystem decoupled_system() {
  SpinSystem sys = default_vb_system();
  for (auto& n : sys.nuclei) {
    n.hyperfine = RankTwoTensor();
    n.quadrupole = RankTwoTensor();
    n.gamma_n = 0.0;
  }
  return sys;
}

// Only A_zz survives; Q and the transverse hyperfine elements are zero.
inline SpinSystem simplified_system() {
  SpinSystem sys = default_vb_system();
  for (auto& n : sys.nuclei) {
    n.hyperfine = RankTwoTensor::from_components(0.0, 0.0, n.hyperfine.zz());
    n.quadrupole = RankTwoTensor();
  }
  return sys;
}

// Default system with 14N2/14N3 generated from 14N1 by exact C3 rotations.
inline SpinSystem c3_exact_system() {
  SpinSystem sys = default_vb_system();
  const double a = 2.0 * 3.14159265358979323846 / 3.0;
  const auto& n1 = sys.nuclei[0];
  sys.nuclei[1].hyperfine = rotate_tensor_about_z(n1.hyperfine, a);
  sys.nuclei[1].quadrupole = rotate_tensor_about_z(n1.quadrupole, a);
  sys.nuclei[2].hyperfine = rotate_tensor_about_z(n1.hyperfine, -a);
  sys.nuclei[2].quadrupole = rotate_tensor_about_z(n1.quadrupole, -a);
  return sys;
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace vbmap::testing
