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

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "vbmap/hamiltonian.hpp"
#include "vbmap/spectra.hpp"

namespace vbmap {

inline constexpr double kDefaultStep = 1e-3;        // mT (1 uT)
inline constexpr double kDefaultT2Cap = 1e4;        // us
inline constexpr double kDefaultSigmaB = 0.1726;    // mT
inline constexpr double kDefaultThreshold = 0.3;

/// Isotropic Gaussian field noise.
struct NoiseModel {
  double sigma_b = kDefaultSigmaB;  // mT
  void validate() const;
};

struct T2Estimate {
  double value = 0.0;  // us
  bool capped = false;
};

/// T2 = 1 / sqrt((f' sigma)^2 + (f'' sigma^2)^2 / 2), in us for MHz/mT inputs.
/// Returns `cap` with `capped` set when the broadening is below 1/cap.
T2Estimate estimate_t2(double f_prime, double f_double_prime, const NoiseModel& noise,
                       double cap = kDefaultT2Cap);

/// Central-difference derivatives of a vector-valued function of a field offset.
struct FiniteDifference {
  Eigen::VectorXd value;
  Eigen::MatrixX3d first;   // column d: df/db_d
  Eigen::MatrixX3d second;  // column d: d2f/db_d^2
};

using OffsetFunction = std::function<Eigen::VectorXd(const Eigen::Vector3d&)>;

/// Evaluates f at 0 and at +/-step along each column of `axes`.
FiniteDifference central_differences(const OffsetFunction& f, double step,
                                     const Eigen::Matrix3d& axes = Eigen::Matrix3d::Identity());

struct TransitionPair {
  int initial = 0;
  int final = 0;
  friend bool operator==(const TransitionPair&, const TransitionPair&) = default;
};

struct Selector {
  enum class Kind { all, max_probability, explicit_pairs };
  Kind kind = Kind::max_probability;
  double threshold = kDefaultThreshold;
  std::vector<TransitionPair> pairs;

  static Selector all() { return {Kind::all, kDefaultThreshold, {}}; }
  static Selector max_probability(double threshold = kDefaultThreshold) {
    return {Kind::max_probability, threshold, {}};
  }
  static Selector explicit_pairs(std::vector<TransitionPair> pairs) {
    return {Kind::explicit_pairs, kDefaultThreshold, std::move(pairs)};
  }
};

struct ResponseOptions {
  double step = kDefaultStep;
  NoiseModel noise;
  double t2_cap = kDefaultT2Cap;
  // Fluctuation basis; columns are the unit axes b_x, b_y, b_z.
  Eigen::Matrix3d axes = Eigen::Matrix3d::Identity();
};

struct SensitivityResult {
  TransitionRecord transition;
  Eigen::Vector3d grad = Eigen::Vector3d::Zero();  // MHz/mT
  double grad_mag = 0.0;
  Eigen::Vector3d curv = Eigen::Vector3d::Zero();  // MHz/mT^2
  double curv_mag = 0.0;
  T2Estimate t2;
  double min_overlap = 1.0;  // worst state match over the six displaced solves
  bool match_flag = false;
  bool below_threshold = false;
};

/// Transitions picked by `selector` from an already-solved eigensystem.
std::vector<TransitionRecord> select_transitions(const std::vector<TransitionRecord>& all,
                                                 const Selector& selector,
                                                 bool* below_threshold = nullptr);

/// Gradient (first derivatives) and curvature (unmixed second derivatives)
/// of the selected transition energies about `field`. States at the displaced
/// fields are tied to the central ones with match_states.
std::vector<SensitivityResult> sensitivity(const HamiltonianModel& model,
                                           const Eigen::Vector3d& field,
                                           const Selector& selector,
                                           const ResponseOptions& options = {});

/// Same as sensitivity() but starting from a central eigensystem the caller
/// already has.
std::vector<SensitivityResult> sensitivity(const HamiltonianModel& model,
                                           const Eigen::Vector3d& field,
                                           const EigenSystem& centre,
                                           const std::vector<TransitionRecord>& selected,
                                           const ResponseOptions& options = {});

inline std::vector<SensitivityResult> gradient(const HamiltonianModel& model,
                                               const FieldPoint& field, double step,
                                               const Selector& selector) {
  ResponseOptions opt;
  opt.step = step;
  return sensitivity(model, field.cartesian(), selector, opt);
}

inline std::vector<SensitivityResult> curvature(const HamiltonianModel& model,
                                                const FieldPoint& field, double step,
                                                const Selector& selector) {
  return gradient(model, field, step, selector);
}

}  // namespace vbmap
