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

#include "vbmap/hamiltonian.hpp"

#include <cmath>
#include <numeric>

#include "vbmap/error.hpp"

namespace vbmap {
namespace {

bool finite(const RankTwoTensor& t) { return t.matrix().allFinite(); }

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ValidationError(std::string(what) + " must be finite");
}

}  // namespace

std::vector<int> SpinSystem::dims() const {
  std::vector<int> d{3};
  for (const auto& n : nuclei) d.push_back(static_cast<int>(std::lround(2.0 * n.spin)) + 1);
  return d;
}

int SpinSystem::dimension() const {
  const auto d = dims();
  return std::accumulate(d.begin(), d.end(), 1, std::multiplies<>());
}

void SpinSystem::validate() const {
  require_finite(zfs, "D");
  require_finite(strain, "epsilon");
  require_finite(gamma_e, "gamma_e");
  if (gamma_e <= 0.0) throw ValidationError("gamma_e must be > 0");
  for (const auto& n : nuclei) {
    require_finite(n.spin, "nuclear spin");
    require_finite(n.gamma_n, "gamma_n");
    const double two_s = 2.0 * n.spin;
    if (n.spin <= 0.0 || std::abs(two_s - std::round(two_s)) > 1e-12) {
      throw ValidationError("nuclear spin must be a positive half-integer");
    }
    if (!finite(n.hyperfine) || !finite(n.quadrupole)) {
      throw ValidationError("hyperfine and quadrupole tensors must be finite");
    }
  }
  if (dimension() > 4096) throw ValidationError("Hilbert space too large for dense solves");
}

SpinSystem default_vb_system() {
  // Table values used verbatim; the 14N2/14N3 hyperfine rows are close to,
  // but not exactly, +/-120 degree rotations of the 14N1 row.
  SpinSystem sys;
  sys.zfs = kZeroFieldSplittingVB;
  sys.strain = 0.0;
  sys.gamma_e = kGammaElectron;
  sys.nuclei = {
      {"14N1", 1.0, kGammaN14, RankTwoTensor::from_components(46.944, 90.025, 48.158, 0.0),
       RankTwoTensor::from_components(-0.46, 0.98, -0.52, 0.0)},
      {"14N2", 1.0, kGammaN14, RankTwoTensor::from_components(79.406, 58.170, 48.159, -18.391),
       RankTwoTensor::from_components(0.62, -0.10, -0.52, -0.623)},
      {"14N3", 1.0, kGammaN14, RankTwoTensor::from_components(79.406, 58.170, 48.159, 18.391),
       RankTwoTensor::from_components(0.62, -0.10, -0.52, 0.623)},
  };
  return sys;
}

Eigen::Vector3d field_vector(double b0, double theta, double phi) {
  if (!(b0 >= 0.0)) throw ValidationError("field magnitude B0 must be >= 0");
  return b0 * Eigen::Vector3d(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                              std::cos(theta));
}

SpinSpace::SpinSpace(const SpinSystem& sys) : dims(sys.dims()) {
  const auto e = spin_operators(1.0);
  sx = embed(e.sx, 0, dims);
  sy = embed(e.sy, 0, dims);
  sz = embed(e.sz, 0, dims);
  sz2 = sz * sz;
  iz_total = ComplexMatrix::Zero(sz.rows(), sz.cols());
  for (std::size_t k = 0; k < sys.nuclei.size(); ++k) {
    iz_total += embed(spin_operators(sys.nuclei[k].spin).sz, k + 1, dims);
  }
}

HamiltonianModel::HamiltonianModel(SpinSystem sys) : sys_(std::move(sys)), space_(sys_) {
  sys_.validate();
  const auto& dims = space_.dims;
  const long n = space_.dimension();
  const ComplexMatrix s[3] = {space_.sx, space_.sy, space_.sz};

  static_part_ = sys_.zfs * (space_.sz2 - (2.0 / 3.0) * ComplexMatrix::Identity(n, n)) +
                 sys_.strain * (s[1] * s[1] - s[0] * s[0]);
  for (int d = 0; d < 3; ++d) coupling_[d] = sys_.gamma_e * s[d];

  for (std::size_t k = 0; k < sys_.nuclei.size(); ++k) {
    const auto& nuc = sys_.nuclei[k];
    const auto ops = spin_operators(nuc.spin);
    const ComplexMatrix i_op[3] = {embed(ops.sx, k + 1, dims), embed(ops.sy, k + 1, dims),
                                   embed(ops.sz, k + 1, dims)};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (nuc.hyperfine(a, b) != 0.0) static_part_ += nuc.hyperfine(a, b) * (s[a] * i_op[b]);
        if (nuc.quadrupole(a, b) != 0.0) {
          static_part_ += nuc.quadrupole(a, b) * (i_op[a] * i_op[b]);
        }
      }
      // Nuclear Zeeman with the same sign as the electron term.
      coupling_[a] += nuc.gamma_n * i_op[a];
    }
  }
  static_part_ = (0.5 * (static_part_ + static_part_.adjoint())).eval();
}

ComplexMatrix HamiltonianModel::at(const Eigen::Vector3d& field) const {
  if (!field.allFinite()) throw ValidationError("field must be finite");
  ComplexMatrix h = static_part_;
  for (int d = 0; d < 3; ++d) {
    if (field[d] != 0.0) h += field[d] * coupling_[d];
  }
  // Each coupling is Hermitian, but rounding in the sums need not be symmetric.
  return 0.5 * (h + h.adjoint());
}

ComplexMatrix build_hamiltonian(const SpinSystem& sys, const Eigen::Vector3d& field) {
  return HamiltonianModel(sys).at(field);
}

ComplexMatrix build_hamiltonian(const SpinSystem& sys, const FieldPoint& field) {
  return build_hamiltonian(sys, field.cartesian());
}

}  // namespace vbmap
