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
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vbmap/error.hpp"
#include "vbmap/io.hpp"

using namespace vbmap;
using nlohmann::json;

namespace {

SweepDataset sample_dataset() {
  SweepDataset ds;
  ds.metadata = {{"schema", kSweepSchema}, {"note", "a,b \"c\""}};
  SweepRow r;
  r.point = 0;
  r.b0 = 1.718397356640017;
  r.theta = 0.1234567890123456;
  r.phi = 0.0;
  r.initial = 3;
  r.final = 51;
  r.ms_final = -1;
  r.mi_final = -1;
  r.energy = 3401.842112398765;
  r.probability = 0.3950000000001;
  r.grad = 1.8962311244121;
  r.t2 = 1.0 / 3.0;
  r.flags = "mixed;low_overlap";
  r.eminence = 0.41;
  ds.rows.push_back(r);
  r.point = 1;
  r.b0 = 2.0;
  r.grad.reset();
  r.curv = 1e-300;
  r.flags = "odd,\"flag\"";
  ds.rows.push_back(r);
  return ds;
}

bool close12(double a, double b) { return std::abs(a - b) <= 1e-11 * std::max(std::abs(a), 1e-300); }

bool close12(const std::optional<double>& a, const std::optional<double>& b) {
  return a.has_value() == b.has_value() && (!a || close12(*a, *b));
}

}  // namespace

TEST_CASE("CSV quoting") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  const auto f = csv_split("1,\"a,b\",,\"x\"\"y\"");
  REQUIRE(f.size() == 4);
  CHECK(f[1] == "a,b");
  CHECK(f[2].empty());
  CHECK(f[3] == "x\"y");
  CHECK_THROWS_AS(csv_split("\"open"), ValidationError);
}

TEST_CASE("sweep CSV round trip keeps 12 significant digits") {
  const auto ds = sample_dataset();
  std::stringstream buf;
  write_sweep_csv(ds, buf);
  const auto back = read_sweep_csv(buf);
  CHECK(back.metadata == ds.metadata);
  REQUIRE(back.rows.size() == ds.rows.size());
  for (std::size_t k = 0; k < ds.rows.size(); ++k) {
    const auto& a = ds.rows[k];
    const auto& b = back.rows[k];
    CHECK(b.point == a.point);
    CHECK(close12(a.b0, b.b0));
    CHECK(close12(a.theta, b.theta));
    CHECK(b.initial == a.initial);
    CHECK(b.final == a.final);
    CHECK(b.ms_final == a.ms_final);
    CHECK(b.mi_final == a.mi_final);
    CHECK(close12(a.energy, b.energy));
    CHECK(close12(a.probability, b.probability));
    CHECK(close12(a.grad, b.grad));
    CHECK(close12(a.curv, b.curv));
    CHECK(close12(a.t2, b.t2));
    CHECK(close12(a.eminence, b.eminence));
    CHECK(b.flags == a.flags);
  }
  // Writing what was read gives the same bytes.
  std::stringstream again;
  write_sweep_csv(back, again);
  std::stringstream first;
  write_sweep_csv(ds, first);
  CHECK(again.str() == first.str());
}

TEST_CASE("sweep JSON round trip is exact") {
  const auto ds = sample_dataset();
  std::stringstream buf;
  write_sweep_json(ds, buf);
  const auto back = read_sweep_json(buf);
  CHECK(back.metadata == ds.metadata);
  REQUIRE(back.rows.size() == ds.rows.size());
  for (std::size_t k = 0; k < ds.rows.size(); ++k) CHECK(back.rows[k] == ds.rows[k]);
}

TEST_CASE("CSV header is the fixed column contract") {
  std::stringstream buf;
  write_sweep_csv(sample_dataset(), buf);
  std::string meta, header;
  std::getline(buf, meta);
  std::getline(buf, header);
  CHECK(meta.rfind("# {", 0) == 0);
  CHECK(header ==
        "B0_mT,theta_rad,phi_rad,i_idx,f_idx,ms_i,ms_f,mI_f,f_MHz,P,grad_MHz_per_mT,"
        "curv_MHz_per_mT2,t2_us,flags,eminence");

  std::stringstream bad("# {}\nB0_mT,theta_rad\n1,2\n");
  CHECK_THROWS_AS(read_sweep_csv(bad), ValidationError);
  std::stringstream short_row("# {}\n" + header + "\n1,2,3\n");
  CHECK_THROWS_AS(read_sweep_csv(short_row), ValidationError);
}

TEST_CASE("spectrum CSV round trip") {
  SpectrumDataset ds;
  ds.metadata = {{"levels", 3}};
  ds.rows.push_back({0.5, 0.0, 0.0, {-1.5, 0.25, 1.25}, ""});
  ds.rows.push_back({1.0, 0.0, 0.0, {}, "solver_error"});
  std::stringstream buf;
  write_spectrum_csv(ds, buf);
  const auto back = read_spectrum_csv(buf);
  REQUIRE(back.rows.size() == 2);
  CHECK(back.rows[0].energies == ds.rows[0].energies);
  CHECK(back.rows[1].energies.empty());
  CHECK(back.rows[1].flags == "solver_error");
}

TEST_CASE("config round trip through JSON") {
  RunConfig cfg = default_run_config();
  cfg.grid = SweepGrid::sphere(23.5, 91, 12);
  cfg.sweep.quantities = {Quantity::t2, Quantity::curvature};
  cfg.sweep.selector.kind = SweepSelector::Kind::explicit_pairs;
  cfg.sweep.selector.pairs = {{0, 43}};
  cfg.sweep.response.step = 5e-4;
  cfg.sweep.response.noise.sigma_b = 0.2;
  cfg.analytic_a_zz = 50.0;
  cfg.shells = {{-1, 4.8158}};
  cfg.sweep.workers = 3;
  cfg.output_path = "out.json";
  cfg.format = OutputFormat::json;
  auto sys = default_vb_system();
  sys.zfs = 3400.0;
  cfg.system = sys;

  const json j = to_json(cfg);
  const RunConfig back = run_config_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(back.sweep.workers == 3);
  CHECK(back.output_path == "out.json");
  CHECK(back.resolved_system().zfs == 3400.0);
  CHECK(back.resolved_system().nuclei[2].hyperfine == sys.nuclei[2].hyperfine);
  CHECK(back.resolved_a_zz() == 50.0);

  const json r = reproducible_json(cfg);
  CHECK_FALSE(r.contains("execution"));
  CHECK_FALSE(r.at("output").contains("path"));
}

TEST_CASE("default config uses the shipped system and a parallel sweep") {
  const RunConfig cfg = default_run_config();
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.grid.kind == GridKind::line_parallel);
  CHECK(cfg.grid.n == 501);
  CHECK(cfg.resolved_a_zz() == 48.158);
  CHECK(reproducible_json(cfg).at("system") == "default-vb");
}

TEST_CASE("config validation rejects bad input before any computation") {
  const json base = reproducible_json(default_run_config());
  auto expect_reject = [&](json j) { CHECK_THROWS_AS(run_config_from_json(j), ValidationError); };

  json j = base;
  j["grid"]["B0_min"] = 1.0;  // no unit suffix
  expect_reject(j);
  j = base;
  j["colour"] = "blue";
  expect_reject(j);
  j = base;
  j["quantities"] = json::array();
  expect_reject(j);
  j = base;
  j["system"] = to_json(default_vb_system());
  j["system"]["gamma_e_MHz_per_mT"] = 0.0;
  expect_reject(j);
  j = base;
  j["schema"] = "vbmap-config/99";
  expect_reject(j);
  j = base;
  j["grid"]["n"] = "many";
  expect_reject(j);
  j = base;
  j["response"]["sigma_B_mT"] = -1.0;
  expect_reject(j);
  j = base;
  j["system"] = "nv-centre";
  expect_reject(j);
  CHECK_NOTHROW(run_config_from_json(base));
  CHECK_NOTHROW(run_config_from_json(json::object()));
}

TEST_CASE("config can be recovered from a dataset file") {
  RunConfig cfg = default_run_config();
  cfg.grid.n = 7;
  SweepDataset ds;
  ds.metadata = dataset_metadata(cfg, kSweepSchema);
  const std::string path = "io_test_dataset.csv";
  {
    std::ofstream out(path);
    write_sweep_csv(ds, out);
  }
  CHECK(load_run_config(path).grid.n == 7);
  {
    std::ofstream out(path);
    write_sweep_json(ds, out);
  }
  CHECK(load_run_config(path).grid.n == 7);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_run_config("does/not/exist.json"), ValidationError);
}
