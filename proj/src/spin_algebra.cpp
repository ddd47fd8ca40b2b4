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

#include "vbmap/spin_algebra.hpp"

#include <cmath>
#include <string>

#include "vbmap/error.hpp"

namespace vbmap {

SpinOperatorSet spin_operators(double s) {
  const double two_s = 2.0 * s;
  if (!std::isfinite(s) || s < 0.0 || std::abs(two_s - std::round(two_s)) > 1e-12) {
    throw ValidationError("spin quantum number must be a non-negative half-integer, got " +
                          std::to_string(s));
  }
  const int dim = static_cast<int>(std::lround(two_s)) + 1;
  SpinOperatorSet ops;
  ops.s = s;
  ops.sz = ComplexMatrix::Zero(dim, dim);
  ops.splus = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double m = s - k;
    ops.sz(k, k) = m;
    // S+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>; |m+1> sits one row up.
    if (k > 0) ops.splus(k - 1, k) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
  }
  ops.sminus = ops.splus.adjoint();
  ops.sx = 0.5 * (ops.splus + ops.sminus);
  ops.sy = std::complex<double>(0.0, -0.5) * (ops.splus - ops.sminus);
  return ops;
}

ComplexMatrix embed(const ComplexMatrix& op, std::size_t slot, std::span<const int> dims) {
  if (slot >= dims.size()) throw ValidationError("embed: slot out of range");
  for (int d : dims) {
    if (d < 1) throw ValidationError("embed: subsystem dimensions must be >= 1");
  }
  if (op.rows() != op.cols() || op.rows() != dims[slot]) {
    throw ValidationError("embed: operator dimension " + std::to_string(op.rows()) +
                          " does not match dims[" + std::to_string(slot) +
                          "] = " + std::to_string(dims[slot]));
  }
  long left = 1;
  long right = 1;
  for (std::size_t k = 0; k < slot; ++k) left *= dims[k];
  for (std::size_t k = slot + 1; k < dims.size(); ++k) right *= dims[k];

  const long d = op.rows();
  const long n = left * d * right;
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (long l = 0; l < left; ++l) {
    for (long a = 0; a < d; ++a) {
      for (long b = 0; b < d; ++b) {
        const std::complex<double> v = op(a, b);
        if (v == 0.0) continue;
        const long row0 = (l * d + a) * right;
        const long col0 = (l * d + b) * right;
        for (long r = 0; r < right; ++r) out(row0 + r, col0 + r) = v;
      }
    }
  }
  return out;
}

RankTwoTensor RankTwoTensor::from_components(double xx, double yy, double zz, double xy,
                                             double xz, double yz) {
  RankTwoTensor t;
  t.m_ << xx, xy, xz,
          xy, yy, yz,
          xz, yz, zz;
  return t;
}

RankTwoTensor RankTwoTensor::from_matrix(const Eigen::Matrix3d& m) {
  RankTwoTensor t;
  t.m_ = 0.5 * (m + m.transpose());
  return t;
}

RankTwoTensor rotate_tensor_about_z(const RankTwoTensor& tensor, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Eigen::Matrix3d r;
  r << c, -s, 0.0,
       s,  c, 0.0,
       0.0, 0.0, 1.0;
  return RankTwoTensor::from_matrix(r * tensor.matrix() * r.transpose());
}

}  // namespace vbmap
