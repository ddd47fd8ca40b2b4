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

#include <Eigen/Dense>

namespace vbmap {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Angular momentum matrices for a single spin (hbar = 1).
///
/// Basis is ordered by descending magnetic quantum number m = s, s-1, ..., -s.
struct SpinOperatorSet {
  double s = 0.0;
  ComplexMatrix sx;
  ComplexMatrix sy;
  ComplexMatrix sz;
  ComplexMatrix splus;
  ComplexMatrix sminus;

  int dim() const { return static_cast<int>(sz.rows()); }
};

/// Throws ValidationError unless 2s is a non-negative integer.
SpinOperatorSet spin_operators(double s);

/// Kronecker product I (x) ... (x) op (x) ... (x) I with `op` at position `slot`.
ComplexMatrix embed(const ComplexMatrix& op, std::size_t slot, std::span<const int> dims);

/// Real symmetric 3x3 interaction tensor in MHz (hyperfine, quadrupole).
class RankTwoTensor {
 public:
  RankTwoTensor() = default;

  static RankTwoTensor from_components(double xx, double yy, double zz, double xy = 0.0,
                                       double xz = 0.0, double yz = 0.0);
  // Symmetric part (M + M^T) / 2.
  static RankTwoTensor from_matrix(const Eigen::Matrix3d& m);

  const Eigen::Matrix3d& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }
  double trace() const { return m_.trace(); }

  double xx() const { return m_(0, 0); }
  double yy() const { return m_(1, 1); }
  double zz() const { return m_(2, 2); }
  double xy() const { return m_(0, 1); }
  double xz() const { return m_(0, 2); }
  double yz() const { return m_(1, 2); }

  friend bool operator==(const RankTwoTensor& a, const RankTwoTensor& b) { return a.m_ == b.m_; }

 private:
  Eigen::Matrix3d m_ = Eigen::Matrix3d::Zero();
};

/// R(angle) T R(angle)^T with R the active rotation about z.
RankTwoTensor rotate_tensor_about_z(const RankTwoTensor& tensor, double angle);

}  // namespace vbmap
