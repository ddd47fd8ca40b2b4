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

#include "vbmap/response.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vbmap/error.hpp"

namespace vbmap {

void NoiseModel::validate() const {
  if (!std::isfinite(sigma_b) || sigma_b <= 0.0) throw ValidationError("sigma_B must be > 0");
}

T2Estimate estimate_t2(double f_prime, double f_double_prime, const NoiseModel& noise,
                       double cap) {
  noise.validate();
  if (!std::isfinite(f_prime) || !std::isfinite(f_double_prime) || f_prime < 0.0 ||
      f_double_prime < 0.0) {
    throw ValidationError("estimate_t2: sensitivities must be finite and non-negative");
  }
  if (!(cap > 0.0)) throw ValidationError("estimate_t2: cap must be > 0");
  const double s = noise.sigma_b;
  const double a = f_prime * s;
  const double b = f_double_prime * s * s;
  const double rate = std::sqrt(a * a + 0.5 * b * b);  // MHz
  if (rate * cap <= 1.0) return {cap, true};
  return {1.0 / rate, false};
}

FiniteDifference central_differences(const OffsetFunction& f, double step,
                                     const Eigen::Matrix3d& axes) {
  if (!std::isfinite(step) || step <= 0.0) throw ValidationError("step must be > 0");
  FiniteDifference fd;
  fd.value = f(Eigen::Vector3d::Zero());
  const long n = fd.value.size();
  fd.first.resize(n, 3);
  fd.second.resize(n, 3);
  for (int d = 0; d < 3; ++d) {
    const Eigen::Vector3d h = step * axes.col(d);
    const Eigen::VectorXd plus = f(h);
    const Eigen::VectorXd minus = f(-h);
    if (plus.size() != n || minus.size() != n) {
      throw NumericError("central_differences: function changed output size");
    }
    fd.first.col(d) = (plus - minus) / (2.0 * step);
    fd.second.col(d) = (plus - 2.0 * fd.value + minus) / (step * step);
  }
  return fd;
}

std::vector<TransitionRecord> select_transitions(const std::vector<TransitionRecord>& all,
                                                 const Selector& selector,
                                                 bool* below_threshold) {
  if (below_threshold) *below_threshold = false;
  switch (selector.kind) {
    case Selector::Kind::all:
      return all;
    case Selector::Kind::max_probability: {
      if (all.empty()) return {};
      auto best = all.begin();
      for (auto it = all.begin(); it != all.end(); ++it) {
        if (it->probability > best->probability) best = it;
      }
      if (below_threshold) *below_threshold = !(best->probability > selector.threshold);
      return {*best};
    }
    case Selector::Kind::explicit_pairs: {
      std::vector<TransitionRecord> out;
      for (const auto& p : selector.pairs) {
        auto it = std::find_if(all.begin(), all.end(), [&](const TransitionRecord& t) {
          return t.initial == p.initial && t.final == p.final;
        });
        if (it == all.end()) {
          throw ValidationError("no m_s=0 -> +/-1 transition " + std::to_string(p.initial) +
                                " -> " + std::to_string(p.final));
        }
        out.push_back(*it);
      }
      return out;
    }
  }
  return {};
}

std::vector<SensitivityResult> sensitivity(const HamiltonianModel& model,
                                           const Eigen::Vector3d& field,
                                           const EigenSystem& centre,
                                           const std::vector<TransitionRecord>& selected,
                                           const ResponseOptions& options) {
  options.noise.validate();
  const std::size_t m = selected.size();
  std::vector<double> worst(m, 1.0);

  const OffsetFunction energies = [&](const Eigen::Vector3d& b) -> Eigen::VectorXd {
    Eigen::VectorXd out(static_cast<long>(m));
    if (b.isZero(0.0)) {
      for (std::size_t k = 0; k < m; ++k) out[k] = selected[k].energy;
      return out;
    }
    const EigenSystem es = eigensystem(model.at(Eigen::Vector3d(field + b)), model.space());
    const StateMatch match = match_states(centre, es);
    for (std::size_t k = 0; k < m; ++k) {
      const int i = selected[k].initial;
      const int f = selected[k].final;
      out[k] = es.energies[match.permutation[f]] - es.energies[match.permutation[i]];
      worst[k] = std::min({worst[k], match.overlap[i], match.overlap[f]});
    }
    return out;
  };
  const FiniteDifference fd = central_differences(energies, options.step, options.axes);

  std::vector<SensitivityResult> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    auto& r = out[k];
    r.transition = selected[k];
    r.grad = fd.first.row(static_cast<long>(k)).transpose();
    r.curv = fd.second.row(static_cast<long>(k)).transpose();
    r.grad_mag = r.grad.norm();
    r.curv_mag = r.curv.norm();
    if (!std::isfinite(r.grad_mag) || !std::isfinite(r.curv_mag)) {
      throw NumericError("non-finite finite-difference derivative");
    }
    r.t2 = estimate_t2(r.grad_mag, r.curv_mag, options.noise, options.t2_cap);
    r.min_overlap = worst[k];
    r.match_flag = worst[k] < kMatchFlagOverlap;
  }
  return out;
}

std::vector<SensitivityResult> sensitivity(const HamiltonianModel& model,
                                           const Eigen::Vector3d& field,
                                           const Selector& selector,
                                           const ResponseOptions& options) {
  const EigenSystem centre = eigensystem(model.at(field), model.space());
  bool below = false;
  const auto selected = select_transitions(transitions(centre, model.space()), selector, &below);
  auto out = sensitivity(model, field, centre, selected, options);
  for (auto& r : out) r.below_threshold = below;
  return out;
}

}  // namespace vbmap
