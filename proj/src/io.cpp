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

#include "vbmap/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "vbmap/error.hpp"

namespace vbmap {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw ValidationError(std::string(where) + " must be an object");
  for (const auto& [k, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ValidationError(std::string("unknown key '") + k + "' in " + where);
  }
}

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad value for '") + key + "': " + e.what());
  }
}

json tensor_json(const RankTwoTensor& t) {
  return {{"xx", t.xx()}, {"yy", t.yy()}, {"zz", t.zz()},
          {"xy", t.xy()}, {"xz", t.xz()}, {"yz", t.yz()}};
}

RankTwoTensor tensor_from_json(const json& j, const char* where) {
  check_keys(j, {"xx", "yy", "zz", "xy", "xz", "yz"}, where);
  double v[6] = {0, 0, 0, 0, 0, 0};
  const char* keys[6] = {"xx", "yy", "zz", "xy", "xz", "yz"};
  for (int k = 0; k < 6; ++k) read_opt(j, keys[k], v[k]);
  return RankTwoTensor::from_components(v[0], v[1], v[2], v[3], v[4], v[5]);
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_opt(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(std::string("cannot parse ") + what + " '" + s + "'");
  }
}

int parse_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(std::string("cannot parse ") + what + " '" + s + "'");
  }
}

std::optional<double> parse_opt(const std::string& s, const char* what) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, what);
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from_json(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

// Leading "# {...}" metadata line of a CSV dataset, then the header line.
json read_csv_preamble(std::istream& in, std::string& header) {
  json meta = json::object();
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind('#', 0) == 0) {
      const auto body = line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
      try {
        meta = json::parse(body);
      } catch (const json::exception& e) {
        throw ValidationError(std::string("bad metadata line: ") + e.what());
      }
      continue;
    }
    header = line;
    return meta;
  }
  throw ValidationError("dataset has no header line");
}

}  // namespace

SpinSystem RunConfig::resolved_system() const { return system ? *system : default_vb_system(); }

double RunConfig::resolved_a_zz() const {
  if (analytic_a_zz) return *analytic_a_zz;
  const auto sys = resolved_system();
  if (sys.nuclei.empty()) return 0.0;
  return sys.nuclei.front().hyperfine.zz();
}

void RunConfig::validate() const {
  resolved_system().validate();
  grid.validate();
  if (sweep.quantities.empty()) throw ValidationError("quantity set is empty");
  sweep.response.noise.validate();
  if (!std::isfinite(sweep.response.step) || sweep.response.step <= 0.0) {
    throw ValidationError("finite-difference step must be > 0");
  }
  if (!(sweep.response.t2_cap > 0.0)) throw ValidationError("T2 cap must be > 0");
  if (!(sweep.selector.threshold >= 0.0 && sweep.selector.threshold <= 1.0)) {
    throw ValidationError("probability threshold must lie in [0, 1]");
  }
  if (sweep.workers < 1) throw ValidationError("worker count must be >= 1");
  if (analytic_a_zz && !std::isfinite(*analytic_a_zz)) throw ValidationError("A_zz must be finite");
  for (const auto& s : shells) {
    if (!std::isfinite(s.a_zz)) throw ValidationError("shell A_zz must be finite");
  }
}

RunConfig default_run_config() {
  RunConfig cfg;
  cfg.grid = SweepGrid::line(GridKind::line_parallel, 0.0, 6.0, 501);
  return cfg;
}

json to_json(const SpinSystem& sys) {
  json nuclei = json::array();
  for (const auto& n : sys.nuclei) {
    nuclei.push_back({{"label", n.label},
                      {"spin", n.spin},
                      {"gamma_n_MHz_per_mT", n.gamma_n},
                      {"A_MHz", tensor_json(n.hyperfine)},
                      {"Q_MHz", tensor_json(n.quadrupole)}});
  }
  return {{"D_MHz", sys.zfs},
          {"epsilon_MHz", sys.strain},
          {"gamma_e_MHz_per_mT", sys.gamma_e},
          {"nuclei", nuclei}};
}

SpinSystem spin_system_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "default-vb") return default_vb_system();
    throw ValidationError("unknown system '" + j.get<std::string>() + "'");
  }
  check_keys(j, {"D_MHz", "epsilon_MHz", "gamma_e_MHz_per_mT", "nuclei"}, "system");
  SpinSystem sys = default_vb_system();
  read_opt(j, "D_MHz", sys.zfs);
  read_opt(j, "epsilon_MHz", sys.strain);
  read_opt(j, "gamma_e_MHz_per_mT", sys.gamma_e);
  if (j.contains("nuclei")) {
    if (!j.at("nuclei").is_array()) throw ValidationError("system.nuclei must be an array");
    sys.nuclei.clear();
    for (const auto& jn : j.at("nuclei")) {
      check_keys(jn, {"label", "spin", "gamma_n_MHz_per_mT", "A_MHz", "Q_MHz"}, "nucleus");
      NucleusSpec n;
      read_opt(jn, "label", n.label);
      read_opt(jn, "spin", n.spin);
      read_opt(jn, "gamma_n_MHz_per_mT", n.gamma_n);
      if (jn.contains("A_MHz")) n.hyperfine = tensor_from_json(jn.at("A_MHz"), "A_MHz");
      if (jn.contains("Q_MHz")) n.quadrupole = tensor_from_json(jn.at("Q_MHz"), "Q_MHz");
      sys.nuclei.push_back(std::move(n));
    }
  }
  sys.validate();
  return sys;
}

json to_json(const RunConfig& cfg) {
  json j = reproducible_json(cfg);
  j["execution"] = {{"workers", cfg.sweep.workers}};
  j["output"]["path"] = cfg.output_path;
  return j;
}

json reproducible_json(const RunConfig& cfg) {
  const auto& g = cfg.grid;
  json points = json::array();
  for (const auto& p : g.custom) {
    points.push_back({{"B0_mT", p.b0}, {"theta_rad", p.theta}, {"phi_rad", p.phi}});
  }
  json quantities = json::array();
  for (auto q : cfg.sweep.quantities) quantities.push_back(to_string(q));
  json pairs = json::array();
  for (const auto& p : cfg.sweep.selector.pairs) pairs.push_back({p.initial, p.final});
  json shells = json::array();
  for (const auto& s : cfg.shells) shells.push_back({{"m_I", s.mi}, {"A_zz_MHz", s.a_zz}});

  json j;
  j["schema"] = kConfigSchema;
  j["system"] = cfg.system ? to_json(*cfg.system) : json("default-vb");
  j["grid"] = {{"kind", to_string(g.kind)},
               {"B0_min_mT", g.b0_min},
               {"B0_max_mT", g.b0_max},
               {"n", g.n},
               {"B0_mT", g.b0},
               {"theta_min_rad", g.theta_min},
               {"theta_max_rad", g.theta_max},
               {"n_theta", g.n_theta},
               {"phi_rad", g.phi},
               {"n_phi", g.n_phi},
               {"points", points}};
  j["quantities"] = quantities;
  j["selector"] = {{"kind", to_string(cfg.sweep.selector.kind)},
                   {"threshold", cfg.sweep.selector.threshold},
                   {"pairs", pairs},
                   {"reference", cfg.sweep.selector.reference ==
                                         SweepSelector::Reference::min_gradient
                                     ? "min-gradient"
                                     : "max-probability"}};
  j["response"] = {{"fd_step_mT", cfg.sweep.response.step},
                   {"sigma_B_mT", cfg.sweep.response.noise.sigma_b},
                   {"t2_cap_us", cfg.sweep.response.t2_cap}};
  j["analytic"] = {{"A_zz_MHz", cfg.analytic_a_zz ? json(*cfg.analytic_a_zz) : json(nullptr)},
                   {"shells", shells}};
  j["output"] = {{"format", cfg.format == OutputFormat::csv ? "csv" : "json"}};
  return j;
}

RunConfig run_config_from_json(const json& j) {
  check_keys(j, {"schema", "system", "grid", "quantities", "selector", "response", "analytic",
                 "execution", "output"},
             "config");
  if (j.contains("schema") && j.at("schema") != kConfigSchema) {
    throw ValidationError("unsupported config schema " + j.at("schema").dump());
  }
  RunConfig cfg = default_run_config();
  try {
    if (j.contains("system")) {
      const auto& js = j.at("system");
      if (js.is_string() && js.get<std::string>() == "default-vb") cfg.system.reset();
      else cfg.system = spin_system_from_json(js);
    }
    if (j.contains("grid")) {
      const auto& jg = j.at("grid");
      check_keys(jg, {"kind", "B0_min_mT", "B0_max_mT", "n", "B0_mT", "theta_min_rad",
                      "theta_max_rad", "n_theta", "phi_rad", "n_phi", "points"},
                 "grid");
      auto& g = cfg.grid;
      if (jg.contains("kind")) g.kind = parse_grid_kind(jg.at("kind").get<std::string>());
      read_opt(jg, "B0_min_mT", g.b0_min);
      read_opt(jg, "B0_max_mT", g.b0_max);
      read_opt(jg, "n", g.n);
      read_opt(jg, "B0_mT", g.b0);
      read_opt(jg, "theta_min_rad", g.theta_min);
      read_opt(jg, "theta_max_rad", g.theta_max);
      read_opt(jg, "n_theta", g.n_theta);
      read_opt(jg, "phi_rad", g.phi);
      read_opt(jg, "n_phi", g.n_phi);
      if (jg.contains("points")) {
        g.custom.clear();
        for (const auto& p : jg.at("points")) {
          check_keys(p, {"B0_mT", "theta_rad", "phi_rad"}, "grid point");
          GridPoint gp;
          read_opt(p, "B0_mT", gp.b0);
          read_opt(p, "theta_rad", gp.theta);
          read_opt(p, "phi_rad", gp.phi);
          g.custom.push_back(gp);
        }
      }
    }
    if (j.contains("quantities")) {
      cfg.sweep.quantities.clear();
      for (const auto& q : j.at("quantities"))
        cfg.sweep.quantities.insert(parse_quantity(q.get<std::string>()));
    }
    if (j.contains("selector")) {
      const auto& js = j.at("selector");
      check_keys(js, {"kind", "threshold", "pairs", "reference"}, "selector");
      auto& s = cfg.sweep.selector;
      if (js.contains("kind")) s.kind = parse_selector_kind(js.at("kind").get<std::string>());
      read_opt(js, "threshold", s.threshold);
      if (js.contains("pairs")) {
        s.pairs.clear();
        for (const auto& p : js.at("pairs")) {
          if (!p.is_array() || p.size() != 2) throw ValidationError("pairs must be [i, f]");
          s.pairs.push_back({p[0].get<int>(), p[1].get<int>()});
        }
      }
      if (js.contains("reference")) {
        const auto r = js.at("reference").get<std::string>();
        if (r == "min-gradient") s.reference = SweepSelector::Reference::min_gradient;
        else if (r == "max-probability") s.reference = SweepSelector::Reference::max_probability;
        else throw ValidationError("unknown selector reference '" + r + "'");
      }
    }
    if (j.contains("response")) {
      const auto& jr = j.at("response");
      check_keys(jr, {"fd_step_mT", "sigma_B_mT", "t2_cap_us"}, "response");
      read_opt(jr, "fd_step_mT", cfg.sweep.response.step);
      read_opt(jr, "sigma_B_mT", cfg.sweep.response.noise.sigma_b);
      read_opt(jr, "t2_cap_us", cfg.sweep.response.t2_cap);
    }
    if (j.contains("analytic")) {
      const auto& ja = j.at("analytic");
      check_keys(ja, {"A_zz_MHz", "shells"}, "analytic");
      if (ja.contains("A_zz_MHz") && !ja.at("A_zz_MHz").is_null()) {
        cfg.analytic_a_zz = ja.at("A_zz_MHz").get<double>();
      }
      if (ja.contains("shells")) {
        cfg.shells.clear();
        for (const auto& s : ja.at("shells")) {
          check_keys(s, {"m_I", "A_zz_MHz"}, "shell");
          analytic::ShellTerm t;
          read_opt(s, "m_I", t.mi);
          read_opt(s, "A_zz_MHz", t.a_zz);
          cfg.shells.push_back(t);
        }
      }
    }
    if (j.contains("execution")) {
      check_keys(j.at("execution"), {"workers"}, "execution");
      read_opt(j.at("execution"), "workers", cfg.sweep.workers);
    }
    if (j.contains("output")) {
      const auto& jo = j.at("output");
      check_keys(jo, {"path", "format"}, "output");
      read_opt(jo, "path", cfg.output_path);
      if (jo.contains("format")) {
        const auto f = jo.at("format").get<std::string>();
        if (f == "csv") cfg.format = OutputFormat::csv;
        else if (f == "json") cfg.format = OutputFormat::json;
        else throw ValidationError("unknown output format '" + f + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json j;
  if (text.rfind('#', 0) == 0) {
    std::istringstream lines(text);
    std::string header;
    j = read_csv_preamble(lines, header);
  } else {
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw ValidationError("cannot parse '" + path + "': " + e.what());
    }
  }
  if (j.contains("metadata")) j = j.at("metadata");
  if (j.contains("config")) j = j.at("config");
  return run_config_from_json(j);
}

json dataset_metadata(const RunConfig& cfg, const char* schema) {
  return {{"schema", schema}, {"version", kVersion}, {"config", reproducible_json(cfg)}};
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"') {
        if (k + 1 < line.size() && line[k + 1] == '"') {
          cur += '"';
          ++k;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ValidationError("unterminated quoted CSV field");
  out.push_back(std::move(cur));
  return out;
}

void write_sweep_csv(const SweepDataset& ds, std::ostream& out) {
  out << "# " << ds.metadata.dump() << '\n';
  const auto& cols = sweep_csv_columns();
  for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << cols[k];
  out << '\n';
  for (const auto& r : ds.rows) {
    out << format_number(r.b0) << ',' << format_number(r.theta) << ',' << format_number(r.phi)
        << ',' << r.initial << ',' << r.final << ',' << r.ms_initial << ',' << r.ms_final << ','
        << r.mi_final << ',' << format_opt(r.energy) << ',' << format_opt(r.probability) << ','
        << format_opt(r.grad) << ',' << format_opt(r.curv) << ',' << format_opt(r.t2) << ','
        << csv_escape(r.flags) << ',' << format_opt(r.eminence) << '\n';
  }
}

SweepDataset read_sweep_csv(std::istream& in) {
  SweepDataset ds;
  std::string header;
  ds.metadata = read_csv_preamble(in, header);
  const auto cols = csv_split(header);
  if (cols != sweep_csv_columns()) throw ValidationError("unexpected sweep CSV columns: " + header);
  std::string line;
  std::size_t point = 0;
  bool first = true;
  double last[3] = {0, 0, 0};
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = csv_split(line);
    if (f.size() != cols.size()) throw ValidationError("wrong field count in row: " + line);
    SweepRow r;
    r.b0 = parse_double(f[0], "B0_mT");
    r.theta = parse_double(f[1], "theta_rad");
    r.phi = parse_double(f[2], "phi_rad");
    r.initial = parse_int(f[3], "i_idx");
    r.final = parse_int(f[4], "f_idx");
    r.ms_initial = parse_int(f[5], "ms_i");
    r.ms_final = parse_int(f[6], "ms_f");
    r.mi_final = parse_int(f[7], "mI_f");
    r.energy = parse_opt(f[8], "f_MHz");
    r.probability = parse_opt(f[9], "P");
    r.grad = parse_opt(f[10], "grad");
    r.curv = parse_opt(f[11], "curv");
    r.t2 = parse_opt(f[12], "t2");
    r.flags = f[13];
    r.eminence = parse_opt(f[14], "eminence");
    // The CSV carries no point index; consecutive rows at one field share it.
    if (!first && (r.b0 != last[0] || r.theta != last[1] || r.phi != last[2])) ++point;
    first = false;
    last[0] = r.b0;
    last[1] = r.theta;
    last[2] = r.phi;
    r.point = point;
    ds.rows.push_back(std::move(r));
  }
  return ds;
}

void write_sweep_json(const SweepDataset& ds, std::ostream& out) {
  json rows = json::array();
  for (const auto& r : ds.rows) {
    rows.push_back({{"point", r.point},
                    {"B0_mT", r.b0},
                    {"theta_rad", r.theta},
                    {"phi_rad", r.phi},
                    {"i_idx", r.initial},
                    {"f_idx", r.final},
                    {"ms_i", r.ms_initial},
                    {"ms_f", r.ms_final},
                    {"mI_f", r.mi_final},
                    {"f_MHz", opt_json(r.energy)},
                    {"P", opt_json(r.probability)},
                    {"grad_MHz_per_mT", opt_json(r.grad)},
                    {"curv_MHz_per_mT2", opt_json(r.curv)},
                    {"t2_us", opt_json(r.t2)},
                    {"flags", r.flags},
                    {"eminence", opt_json(r.eminence)}});
  }
  out << json{{"metadata", ds.metadata}, {"rows", rows}}.dump(1) << '\n';
}

SweepDataset read_sweep_json(std::istream& in) {
  SweepDataset ds;
  try {
    const json j = json::parse(in);
    ds.metadata = j.at("metadata");
    for (const auto& jr : j.at("rows")) {
      SweepRow r;
      r.point = jr.at("point").get<std::size_t>();
      r.b0 = jr.at("B0_mT").get<double>();
      r.theta = jr.at("theta_rad").get<double>();
      r.phi = jr.at("phi_rad").get<double>();
      r.initial = jr.at("i_idx").get<int>();
      r.final = jr.at("f_idx").get<int>();
      r.ms_initial = jr.at("ms_i").get<int>();
      r.ms_final = jr.at("ms_f").get<int>();
      r.mi_final = jr.at("mI_f").get<int>();
      r.energy = opt_from_json(jr, "f_MHz");
      r.probability = opt_from_json(jr, "P");
      r.grad = opt_from_json(jr, "grad_MHz_per_mT");
      r.curv = opt_from_json(jr, "curv_MHz_per_mT2");
      r.t2 = opt_from_json(jr, "t2_us");
      r.flags = jr.at("flags").get<std::string>();
      r.eminence = opt_from_json(jr, "eminence");
      ds.rows.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed sweep JSON: ") + e.what());
  }
  return ds;
}

namespace {
std::size_t spectrum_levels(const SpectrumDataset& ds) {
  if (ds.metadata.contains("levels")) return ds.metadata.at("levels").get<std::size_t>();
  std::size_t n = 0;
  for (const auto& r : ds.rows) n = std::max(n, r.energies.size());
  return n;
}
}  // namespace

void write_spectrum_csv(const SpectrumDataset& ds, std::ostream& out) {
  const std::size_t levels = spectrum_levels(ds);
  out << "# " << ds.metadata.dump() << '\n';
  out << "B0_mT,theta_rad,phi_rad";
  for (std::size_t k = 0; k < levels; ++k) out << ",E" << k << "_MHz";
  out << ",flags\n";
  for (const auto& r : ds.rows) {
    out << format_number(r.b0) << ',' << format_number(r.theta) << ',' << format_number(r.phi);
    for (std::size_t k = 0; k < levels; ++k) {
      out << ',';
      if (k < r.energies.size()) out << format_number(r.energies[k]);
    }
    out << ',' << csv_escape(r.flags) << '\n';
  }
}

void write_spectrum_json(const SpectrumDataset& ds, std::ostream& out) {
  json rows = json::array();
  for (const auto& r : ds.rows) {
    rows.push_back({{"B0_mT", r.b0},
                    {"theta_rad", r.theta},
                    {"phi_rad", r.phi},
                    {"energies_MHz", r.energies},
                    {"flags", r.flags}});
  }
  out << json{{"metadata", ds.metadata}, {"rows", rows}}.dump(1) << '\n';
}

SpectrumDataset read_spectrum_csv(std::istream& in) {
  SpectrumDataset ds;
  std::string header;
  ds.metadata = read_csv_preamble(in, header);
  const auto cols = csv_split(header);
  if (cols.size() < 4 || cols[0] != "B0_mT" || cols[1] != "theta_rad" || cols[2] != "phi_rad" ||
      cols.back() != "flags") {
    throw ValidationError("unexpected spectrum CSV columns: " + header);
  }
  const std::size_t levels = cols.size() - 4;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = csv_split(line);
    if (f.size() != cols.size()) throw ValidationError("wrong field count in row: " + line);
    SpectrumRow r;
    r.b0 = parse_double(f[0], "B0_mT");
    r.theta = parse_double(f[1], "theta_rad");
    r.phi = parse_double(f[2], "phi_rad");
    for (std::size_t k = 0; k < levels; ++k) {
      if (!f[3 + k].empty()) r.energies.push_back(parse_double(f[3 + k], "energy"));
    }
    r.flags = f.back();
    ds.rows.push_back(std::move(r));
  }
  return ds;
}

}  // namespace vbmap
