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

#include <array>
#include <cmath>
#include <vector>

#include "vbmap/analytic.hpp"
#include "vbmap/error.hpp"
#include "vbmap/hamiltonian.hpp"

using namespace vbmap;
using namespace vbmap::analytic;

namespace {
constexpr double kGamma = 28.02495;
}

TEST_CASE("perturbative transition energy") {
  PtConfig cfg;  // m_s = -1, m_I = 0
  CHECK(std::abs(pt_transition_energy(cfg, 15.0, {0, 0, 0}) - 3029.62575) < 1e-9);
  CHECK(std::abs(pt_transition_energy(cfg, 15.0, {0, 0, 0}) - 3029.63) < 0.01);

  cfg.mi = 2;
  cfg.ms = 1;
  CHECK(std::abs(pt_transition_energy(cfg, 3.0, {0, 0, 0}) -
                 (3450.0 + kGamma * 3.0 + 2 * 48.158)) < 1e-9);
  // The radical takes the absolute value below the dip.
  cfg.mi = -2;
  CHECK(std::abs(pt_transition_energy(cfg, 1.0, {0, 0, 0}) -
                 (3450.0 + std::abs(kGamma - 2 * 48.158))) < 1e-9);
}

TEST_CASE("at the dip only transverse noise enters, at second order") {
  PtConfig cfg;
  cfg.mi = -1;
  const double dip = 48.158 / kGamma;
  const Eigen::Vector3d b(3e-3, -4e-3, 0.0);
  const double f = pt_transition_energy(cfg, dip, b);
  CHECK(std::abs(f - (3450.0 - kGamma * 5e-3)) < 1e-9);

  // Even in b_x everywhere; first-order term absent at the dip.
  for (double bz : {0.5, dip, 4.0}) {
    CHECK(pt_transition_energy(cfg, bz, {0.01, 0, 0}) ==
          doctest::Approx(pt_transition_energy(cfg, bz, {-0.01, 0, 0})).epsilon(1e-15));
  }
  const double f0 = pt_transition_energy(cfg, 2.5, {0, 0, 0});
  const double d1 = pt_transition_energy(cfg, 2.5, {1e-3, 0, 0}) - f0;
  const double d2 = pt_transition_energy(cfg, 2.5, {2e-3, 0, 0}) - f0;
  CHECK(d2 / d1 == doctest::Approx(4.0).epsilon(1e-4));
}

TEST_CASE("perturbative gradient") {
  PtConfig cfg;
  auto g = pt_gradient(cfg, 15.0, {0, 0, 0});
  CHECK_FALSE(g.kink);
  CHECK(g.grad.x() == 0.0);
  CHECK(g.grad.y() == 0.0);
  CHECK(g.grad.z() == doctest::Approx(-kGamma));
  CHECK(g.magnitude == doctest::Approx(kGamma));

  // Below the m_I = -1 dip the z-slope flips sign.
  cfg.mi = -1;
  g = pt_gradient(cfg, 1.0, {0, 0, 0});
  CHECK(g.grad.z() == doctest::Approx(kGamma));

  // Off the kink the magnitude is gamma_e, whatever the fluctuation.
  for (const Eigen::Vector3d b : {Eigen::Vector3d(1e-3, 0, 0), Eigen::Vector3d(0.2, -0.1, 0.3),
                                  Eigen::Vector3d(0, 1e-6, -1e-6)}) {
    for (double bz : {0.3, 48.158 / kGamma, 9.0}) {
      CHECK(pt_gradient(cfg, bz, b).magnitude == doctest::Approx(kGamma).epsilon(1e-12));
    }
  }

  // Exact dip with b = 0: directional limit along +b_z plus the flag.
  PtConfig exact;
  exact.a_zz = kGamma;
  exact.mi = -1;
  g = pt_gradient(exact, 1.0, {0, 0, 0});
  CHECK(g.kink);
  CHECK(g.magnitude == kGamma);
  CHECK(g.grad.z() == -kGamma);
  CHECK(std::isfinite(g.grad.norm()));
}

TEST_CASE("dip fields") {
  const std::array<int, 7> mi{-3, -2, -1, 0, 1, 2, 3};
  const auto d = dip_fields(48.158, kGamma, mi);
  CHECK(std::abs(d[2] - 1.718397) < 1e-6);
  CHECK(std::abs(d[1] - 3.436795) < 1e-6);
  CHECK(std::abs(d[0] - 5.155192) < 1e-6);
  CHECK(d[3] == 0.0);
  CHECK(d[6] == -d[0]);
  CHECK_THROWS_AS(dip_fields(48.158, 0.0, mi), ValidationError);
}

TEST_CASE("multi-shell dip field") {
  const std::vector<ShellTerm> one{{-1, 48.158}};
  CHECK(multi_shell_dip_field(one, kGamma) == dip_fields(48.158, kGamma, std::array{-1})[0]);
  const std::vector<ShellTerm> two{{-1, 48.158}, {-1, 4.8158}};
  CHECK(std::abs(multi_shell_dip_field(two, kGamma) - 1.890237) < 1e-6);
  const std::vector<ShellTerm> cancel{{-1, 10.0}, {2, 5.0}};
  CHECK(multi_shell_dip_field(cancel, kGamma) == 0.0);
  CHECK_THROWS_AS(multi_shell_dip_field(std::vector<ShellTerm>{}, kGamma), ValidationError);
}

TEST_CASE("out-of-plane effective coupling") {
  const auto sys = default_vb_system();
  CHECK(effective_out_of_plane_coupling(sys.nuclei[0].hyperfine) == 48.158);
  CHECK(effective_out_of_plane_coupling(RankTwoTensor::from_components(0, 0, 0, 0, 3, 4)) == 5.0);
  const auto t = RankTwoTensor::from_components(1, 2, -7, 0.5, 0.3, -0.2);
  CHECK(effective_out_of_plane_coupling(t) >= std::abs(t.zz()));
}

TEST_CASE("PtConfig validation") {
  PtConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.ms = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg.ms = 1;
  cfg.gamma_e = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}
