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

#include "vbmap/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include "vbmap/error.hpp"

extern "C" void zheevd_(const char* jobz, const char* uplo, const int* n, std::complex<double>* a,
                        const int* lda, double* w, std::complex<double>* work, const int* lwork,
                        double* rwork, const int* lrwork, int* iwork, const int* liwork,
                        int* info, std::size_t jobz_len, std::size_t uplo_len);

namespace vbmap {

HermitianEigen solve_hermitian(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) throw ValidationError("solve_hermitian: matrix must be square");
  if (!h.allFinite()) throw NumericError("solve_hermitian: non-finite matrix entries");
  const int n = static_cast<int>(h.rows());
  HermitianEigen out;
  out.vectors = h;
  out.values.resize(n);
  if (n == 0) return out;

  const char jobz = 'V';
  const char uplo = 'L';
  int info = 0;
  // Workspace query first.
  int lwork = -1;
  int lrwork = -1;
  int liwork = -1;
  std::complex<double> work_q;
  double rwork_q = 0.0;
  int iwork_q = 0;
  zheevd_(&jobz, &uplo, &n, out.vectors.data(), &n, out.values.data(), &work_q, &lwork, &rwork_q,
          &lrwork, &iwork_q, &liwork, &info, 1, 1);
  if (info != 0) throw NumericError("zheevd workspace query failed, info=" + std::to_string(info));

  lwork = static_cast<int>(work_q.real());
  lrwork = static_cast<int>(rwork_q);
  liwork = iwork_q;
  std::vector<std::complex<double>> work(std::max(lwork, 1));
  std::vector<double> rwork(std::max(lrwork, 1));
  std::vector<int> iwork(std::max(liwork, 1));
  zheevd_(&jobz, &uplo, &n, out.vectors.data(), &n, out.values.data(), work.data(), &lwork,
          rwork.data(), &lrwork, iwork.data(), &liwork, &info, 1, 1);
  if (info != 0) throw NumericError("zheevd failed to converge, info=" + std::to_string(info));
  return out;
}

int EigenSystem::mi_label(int k) const {
  return static_cast<int>(std::lround(mi_expectation.at(static_cast<std::size_t>(k))));
}

EigenSystem eigensystem(const ComplexMatrix& h, const SpinSpace& space) {
  if (h.rows() != space.dimension()) {
    throw ValidationError("eigensystem: Hamiltonian and spin space dimensions differ");
  }
  auto eig = solve_hermitian(h);
  EigenSystem es;
  es.energies = std::move(eig.values);
  es.states = std::move(eig.vectors);
  const int n = es.size();

  const auto expect_diag = [&](const ComplexMatrix& op) {
    // Re <k|op|k> for every column at once.
    const ComplexMatrix ov = op * es.states;
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) out[k] = es.states.col(k).dot(ov.col(k)).real();
    return out;
  };
  es.sz_expectation = expect_diag(space.sz);
  es.sz2_expectation = expect_diag(space.sz2);
  es.mi_expectation = expect_diag(space.iz_total);

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return es.sz2_expectation[a] < es.sz2_expectation[b];
  });
  es.ms_label.assign(static_cast<std::size_t>(n), 0);
  es.mixed.assign(static_cast<std::size_t>(n), 0);
  const int n_zero = n / 3;
  for (int r = n_zero; r < n; ++r) {
    const int k = order[r];
    es.ms_label[k] = es.sz_expectation[k] >= 0.0 ? 1 : -1;
    if (std::abs(es.sz_expectation[k]) < 0.65) es.mixed[k] = 1;
  }
  for (int k = 0; k < n; ++k) {
    const double s2 = es.sz2_expectation[k];
    if (s2 >= 0.35 && s2 <= 0.65) es.mixed[k] = 1;
  }
  return es;
}

double transition_probability(const ComplexVector& psi_i, const ComplexVector& psi_f,
                              const ComplexMatrix& sx, const ComplexMatrix& sy) {
  const std::complex<double> mx = psi_f.dot(sx * psi_i);
  const std::complex<double> my = psi_f.dot(sy * psi_i);
  return std::norm(mx) + std::norm(my);
}

std::vector<TransitionRecord> transitions(const EigenSystem& es, const SpinSpace& space) {
  const ComplexMatrix mx = es.states.adjoint() * (space.sx * es.states);
  const ComplexMatrix my = es.states.adjoint() * (space.sy * es.states);
  const int n = es.size();
  std::vector<TransitionRecord> out;
  out.reserve(static_cast<std::size_t>(n / 3) * static_cast<std::size_t>(n - n / 3));
  for (int i = 0; i < n; ++i) {
    if (es.ms_label[i] != 0) continue;
    for (int f = 0; f < n; ++f) {
      if (es.ms_label[f] == 0) continue;
      TransitionRecord t;
      t.initial = i;
      t.final = f;
      t.energy = es.energies[f] - es.energies[i];
      t.probability = std::norm(mx(f, i)) + std::norm(my(f, i));
      t.ms_initial = 0;
      t.ms_final = es.ms_label[f];
      t.mi_initial = es.mi_label(i);
      t.mi_final = es.mi_label(f);
      t.mixed = es.mixed[i] || es.mixed[f];
      out.push_back(t);
    }
  }
  return out;
}

StateMatch match_states(const ComplexMatrix& reference, const ComplexMatrix& perturbed) {
  if (reference.rows() != perturbed.rows() || reference.cols() != perturbed.cols()) {
    throw ValidationError("match_states: eigenvector sets differ in shape");
  }
  const int n = static_cast<int>(reference.cols());
  const Eigen::MatrixXd ov = (reference.adjoint() * perturbed).cwiseAbs2();

  StateMatch m;
  m.permutation.assign(static_cast<std::size_t>(n), -1);
  m.overlap.assign(static_cast<std::size_t>(n), 0.0);

  // Rows and columns of |U|^2 sum to 1, so an entry above 1/2 is the largest
  // in its row and column and greedy picks it first.
  bool dominant = true;
  std::vector<char> taken(static_cast<std::size_t>(n), 0);
  for (int r = 0; r < n && dominant; ++r) {
    int c = 0;
    const double best = ov.row(r).maxCoeff(&c);
    // Rounding can push two entries of one column just above 1/2.
    if (best <= 0.5 || taken[c]) dominant = false;
    taken[c] = 1;
    m.permutation[r] = c;
    m.overlap[r] = best;
  }
  if (dominant) {
    m.min_overlap = n ? *std::min_element(m.overlap.begin(), m.overlap.end()) : 1.0;
    m.flagged = m.min_overlap < kMatchFlagOverlap;
    return m;
  }
  std::fill(m.permutation.begin(), m.permutation.end(), -1);

  std::vector<std::pair<int, int>> cand;
  cand.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) cand.emplace_back(r, c);
  std::stable_sort(cand.begin(), cand.end(), [&](const auto& a, const auto& b) {
    return ov(a.first, a.second) > ov(b.first, b.second);
  });

  std::vector<char> used(static_cast<std::size_t>(n), 0);
  int assigned = 0;
  for (const auto& [r, c] : cand) {
    if (assigned == n) break;
    if (m.permutation[r] >= 0 || used[c]) continue;
    m.permutation[r] = c;
    m.overlap[r] = ov(r, c);
    used[c] = 1;
    ++assigned;
  }
  m.min_overlap = n ? *std::min_element(m.overlap.begin(), m.overlap.end()) : 1.0;
  m.flagged = m.min_overlap < kMatchFlagOverlap;
  return m;
}

EminenceResult eminence_ratio(std::span<const TransitionRecord> records) {
  double max_plus = 0.0;
  double max_minus = 0.0;
  bool has_plus = false;
  bool has_minus = false;
  for (const auto& t : records) {
    if (t.ms_final > 0) {
      max_plus = std::max(max_plus, t.probability);
      has_plus = true;
    } else {
      max_minus = std::max(max_minus, t.probability);
      has_minus = true;
    }
  }
  EminenceResult out;
  out.ratio.reserve(records.size());
  out.degenerate = (has_plus && max_plus <= 0.0) || (has_minus && max_minus <= 0.0);
  for (const auto& t : records) {
    const double m = t.ms_final > 0 ? max_plus : max_minus;
    out.ratio.push_back(m > 0.0 ? t.probability / m : 0.0);
  }
  return out;
}

}  // namespace vbmap
