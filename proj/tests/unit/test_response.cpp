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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "vbmap/analytic.hpp"
#include "vbmap/error.hpp"
#include "vbmap/response.hpp"

using namespace vbmap;
using namespace vbmap::testing;

namespace {

constexpr double kGamma = 28.02495;

SensitivityResult max_p(const HamiltonianModel& m, const Eigen::Vector3d& b,
                        const ResponseOptions& opt = {}) {
  const auto r = sensitivity(m, b, Selector::max_probability(), opt);
  REQUIRE(r.size() == 1);
  return r.front();
}

}  // namespace

TEST_CASE("T2 from the noise-broadened line") {
  const NoiseModel noise;
  CHECK(noise.sigma_b == 0.1726);
  const auto base = estimate_t2(kGamma, 0.0, noise);
  CHECK_FALSE(base.capped);
  CHECK(std::abs(base.value - 0.206735) < 1e-6);
  CHECK(std::abs(base.value - 0.207) / 0.207 < 0.005);

  const auto zero = estimate_t2(0.0, 0.0, noise);
  CHECK(zero.capped);
  CHECK(zero.value == kDefaultT2Cap);

  const auto doubled = estimate_t2(kGamma, 0.0, NoiseModel{2 * 0.1726});
  CHECK(std::abs(doubled.value - base.value / 2) < 1e-15);

  // 1 / sqrt((f' s)^2 + (f'' s^2)^2 / 2)
  const double s = 0.1726;
  const auto both = estimate_t2(3.0, 40.0, noise);
  CHECK(std::abs(both.value - 1.0 / std::sqrt(9 * s * s + 0.5 * 1600 * s * s * s * s)) < 1e-14);
}

TEST_CASE("T2 is monotone non-increasing in f', f'' and sigma_B") {
  double last = INFINITY;
  for (double fp = 0.0; fp < 50.0; fp += 0.7) {
    const double v = estimate_t2(fp, 2.0, NoiseModel{}).value;
    CHECK(v <= last);
    last = v;
  }
  last = INFINITY;
  for (double fpp = 0.0; fpp < 500.0; fpp += 7.0) {
    const double v = estimate_t2(1.0, fpp, NoiseModel{}).value;
    CHECK(v <= last);
    last = v;
  }
  last = INFINITY;
  for (double sb = 0.01; sb < 2.0; sb += 0.05) {
    const double v = estimate_t2(1.0, 1.0, NoiseModel{sb}).value;
    CHECK(v <= last);
    last = v;
  }
}

TEST_CASE("T2 input validation") {
  CHECK_THROWS_AS(estimate_t2(1.0, 0.0, NoiseModel{0.0}), ValidationError);
  CHECK_THROWS_AS(estimate_t2(-1.0, 0.0, NoiseModel{}), ValidationError);
  CHECK_THROWS_AS(estimate_t2(NAN, 0.0, NoiseModel{}), ValidationError);
  CHECK_THROWS_AS(estimate_t2(1.0, 0.0, NoiseModel{}, 0.0), ValidationError);
}

TEST_CASE("central differences on polynomials") {
  const double c = 3.7;
  const auto quad = [&](const Eigen::Vector3d& b) {
    Eigen::VectorXd v(1);
    v[0] = c * b.x() * b.x() + 2.0 * b.y() - b.z();
    return v;
  };
  const auto fd = central_differences(quad, 1e-3);
  CHECK(std::abs(fd.second(0, 0) - 2 * c) < 1e-6);
  CHECK(std::abs(fd.first(0, 1) - 2.0) < 1e-12);
  CHECK(std::abs(fd.first(0, 2) + 1.0) < 1e-12);
  CHECK(std::abs(fd.second(0, 1)) < 1e-6);

  // O(h^2): halving the step quarters the first-derivative error of a cubic.
  const auto cubic = [](const Eigen::Vector3d& b) {
    Eigen::VectorXd v(1);
    const double x = 0.4 + b.x();
    v[0] = x * x * x;
    return v;
  };
  const double exact = 3 * 0.4 * 0.4;
  const double e1 = std::abs(central_differences(cubic, 0.02).first(0, 0) - exact);
  const double e2 = std::abs(central_differences(cubic, 0.01).first(0, 0) - exact);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(1e-6));

  CHECK_THROWS_AS(central_differences(quad, 0.0), ValidationError);
}

TEST_CASE("decoupled electron: gradient and curvature along z") {
  const HamiltonianModel model(decoupled_system());
  const double b = 10.0;
  const auto es = eigensystem(model.at(Eigen::Vector3d(0, 0, b)), model.space());
  const auto all = transitions(es, model.space());
  const TransitionRecord* lower = nullptr;
  for (const auto& t : all)
    if (t.ms_final == -1) {
      lower = &t;
      break;
    }
  REQUIRE(lower);
  const auto r = sensitivity(model, Eigen::Vector3d(0, 0, b), es, {*lower}).front();
  CHECK(std::abs(r.grad.z() + kGamma) < 1e-6);
  CHECK(std::abs(r.grad.x()) < 1e-6);
  CHECK(std::abs(r.grad.y()) < 1e-6);
  CHECK(std::abs(r.grad_mag - kGamma) < 1e-6);
  // 3x3 electron oracle: gamma^2 (2/(D - gamma B) + 1/(D + gamma B)).
  const double g = kGamma;
  const double closed = g * g * (2.0 / (3450.0 - g * b) + 1.0 / (3450.0 + g * b));
  CHECK(std::abs(closed - 0.7061064697) < 1e-9);
  CHECK(std::abs(r.curv.x() - closed) < 1e-3);
  CHECK(std::abs(r.curv.y() - closed) < 1e-3);
  CHECK(std::abs(r.curv.z()) < 1e-3);
  CHECK(r.curv_mag == doctest::Approx(r.curv.norm()));
}

TEST_CASE("step convergence away from anti-crossings") {
  const HamiltonianModel model(default_vb_system());
  const Eigen::Vector3d b(0, 0, 10.0);
  ResponseOptions half;
  half.step = 0.5e-3;
  const auto a = max_p(model, b);
  const auto h = max_p(model, b, half);
  CHECK(a.transition.final == h.transition.final);
  CHECK(std::abs(a.grad_mag - h.grad_mag) / a.grad_mag < 1e-3);
  CHECK(a.min_overlap > 0.999);
  CHECK_FALSE(a.match_flag);
}

TEST_CASE("gradient magnitude does not depend on the transverse axis labels") {
  const HamiltonianModel model(default_vb_system());
  const Eigen::Vector3d b = field_vector(8.0, 0.6, 1.1);
  ResponseOptions rot;
  rot.axes = Eigen::AngleAxisd(std::numbers::pi / 2, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  const auto a = max_p(model, b);
  const auto r = max_p(model, b, rot);
  CHECK(std::abs(a.grad_mag - r.grad_mag) < 1e-8);
}

TEST_CASE("numeric gradient follows the perturbative magnitude at 10 mT") {
  const HamiltonianModel model(default_vb_system());
  const auto r = max_p(model, Eigen::Vector3d(0, 0, 10.0));
  analytic::PtConfig pt;
  pt.mi = r.transition.mi_final;
  const double ref = analytic::pt_gradient(pt, 10.0, Eigen::Vector3d::Zero()).magnitude;
  CHECK(std::abs(r.grad_mag - ref) / ref < 0.01);
  CHECK(r.transition.mi_initial == r.transition.mi_final);
}

TEST_CASE("curvature is larger at the m_I = -1 anti-crossing") {
  const HamiltonianModel model(default_vb_system());
  const auto dip = sensitivity(model, Eigen::Vector3d(0, 0, 1.718397), Selector::all());
  const auto away = sensitivity(model, Eigen::Vector3d(0, 0, 1.0), Selector::all());
  double dip_max = 0.0, away_max = 0.0;
  for (const auto& r : dip)
    if (r.transition.probability > 0.3) dip_max = std::max(dip_max, r.curv_mag);
  for (const auto& r : away)
    if (r.transition.probability > 0.3) away_max = std::max(away_max, r.curv_mag);
  CHECK(dip_max > 10.0 * away_max);
}

TEST_CASE("transition selection") {
  const HamiltonianModel model(default_vb_system());
  const auto es = eigensystem(model.at(Eigen::Vector3d(0, 0, 15.0)), model.space());
  const auto all = transitions(es, model.space());
  bool below = true;
  CHECK(select_transitions(all, Selector::all(), &below).size() == 1458);
  CHECK_FALSE(below);
  select_transitions(all, Selector::max_probability(0.99), &below);
  CHECK(below);
  const auto pick = select_transitions(all, Selector::explicit_pairs({{0, 43}, {1, 49}}));
  REQUIRE(pick.size() == 2);
  CHECK(pick[1].initial == 1);
  CHECK(pick[1].final == 49);
  CHECK_THROWS_AS(select_transitions(all, Selector::explicit_pairs({{0, 1}})), ValidationError);
}
