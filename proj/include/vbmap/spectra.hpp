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

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vbmap/hamiltonian.hpp"

namespace vbmap {

struct HermitianEigen {
  Eigen::VectorXd values;  // ascending
  ComplexMatrix vectors;   // columns
};

/// Dense Hermitian eigensolve (LAPACK zheevd). Throws NumericError on failure.
HermitianEigen solve_hermitian(const ComplexMatrix& h);

/// Eigenstates of one Hamiltonian with electron-manifold bookkeeping.
///
/// The m_s = 0 manifold is the N/3 states with the smallest <Sz^2>; the rest
/// are +1 or -1 by the sign of <Sz>. A state is flagged `mixed` when its
/// manifold assignment is ambiguous (<Sz^2> in [0.35, 0.65]) or when a +/-1
/// state has |<Sz>| < 0.65, i.e. m_s = +1 and -1 are strongly superposed.
struct EigenSystem {
  Eigen::VectorXd energies;
  ComplexMatrix states;
  std::vector<int> ms_label;
  std::vector<double> sz_expectation;
  std::vector<double> sz2_expectation;
  std::vector<double> mi_expectation;  // collective nuclear <sum Iz>
  std::vector<std::uint8_t> mixed;

  int size() const { return static_cast<int>(energies.size()); }
  int mi_label(int k) const;
};

EigenSystem eigensystem(const ComplexMatrix& h, const SpinSpace& space);

struct TransitionRecord {
  int initial = 0;
  int final = 0;
  double energy = 0.0;       // E_final - E_initial, MHz
  double probability = 0.0;  // |<f|Sx|i>|^2 + |<f|Sy|i>|^2
  int ms_initial = 0;
  int ms_final = 0;
  int mi_initial = 0;
  int mi_final = 0;
  bool mixed = false;
};

/// All m_s = 0 -> m_s = +/-1 transitions, initial index major, both ascending.
std::vector<TransitionRecord> transitions(const EigenSystem& es, const SpinSpace& space);

double transition_probability(const ComplexVector& psi_i, const ComplexVector& psi_f,
                              const ComplexMatrix& sx, const ComplexMatrix& sy);

inline constexpr double kMatchFlagOverlap = 0.5;

struct StateMatch {
  std::vector<int> permutation;  // reference column k -> perturbed column
  std::vector<double> overlap;   // |<ref_k|pert_perm[k]>|^2
  double min_overlap = 1.0;
  bool flagged = false;          // some overlap^2 < kMatchFlagOverlap
};

/// Greedy bijective assignment by descending |<ref_k|pert_j>|.
StateMatch match_states(const ComplexMatrix& reference, const ComplexMatrix& perturbed);
inline StateMatch match_states(const EigenSystem& reference, const EigenSystem& perturbed) {
  return match_states(reference.states, perturbed.states);
}

struct EminenceResult {
  std::vector<double> ratio;
  bool degenerate = false;  // every probability in a manifold pair was zero
};

/// P divided by the largest P among records sharing the same final manifold.
EminenceResult eminence_ratio(std::span<const TransitionRecord> records);

}  // namespace vbmap
