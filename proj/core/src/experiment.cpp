#include "meanfield/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "meanfield/errors.hpp"
#include "meanfield/fock_basis.hpp"
#include "meanfield/krylov.hpp"

namespace meanfield {

std::string study_name(StudyKind kind) {
  switch (kind) {
    case StudyKind::free_case: return "free";
    case StudyKind::convergence: return "convergence";
    case StudyKind::growth: return "growth";
    case StudyKind::bogoliubov: return "bogoliubov";
    case StudyKind::clt: return "clt";
  }
  return "?";
}

StudyKind study_from_name(const std::string& name) {
  if (name == "free") return StudyKind::free_case;
  if (name == "convergence") return StudyKind::convergence;
  if (name == "growth") return StudyKind::growth;
  if (name == "bogoliubov") return StudyKind::bogoliubov;
  if (name == "clt") return StudyKind::clt;
  throw config_error("unknown study '" + name +
                     "', expected free, convergence, growth, bogoliubov or clt");
}

std::string data_name(DataKind kind) {
  return kind == DataKind::product ? "product" : "coherent";
}

DataKind data_from_name(const std::string& name) {
  if (name == "product") return DataKind::product;
  if (name == "coherent") return DataKind::coherent;
  throw config_error("unknown initial data kind '" + name + "', expected product or coherent");
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& tok, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw config_error(where + ": '" + tok + "' is not a number");
  }
  if (used != tok.size()) throw config_error(where + ": '" + tok + "' is not a number");
  return v;
}

long parse_long(const std::string& tok, const std::string& where) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(tok, &used);
  } catch (const std::exception&) {
    throw config_error(where + ": '" + tok + "' is not an integer");
  }
  if (used != tok.size()) throw config_error(where + ": '" + tok + "' is not an integer");
  return v;
}

// steps in the trajectory grid, or -1 when t_final is off the grid
long grid_steps(double t_final, double dt) {
  if (dt <= 0.0) return -1;
  const long steps = std::lround(t_final / dt);
  if (steps < 1) return -1;
  if (std::abs(steps * dt - t_final) > 1e-9 * std::max(1.0, std::abs(t_final))) return -1;
  return steps;
}

using LineMap = std::map<std::string, int>;

[[noreturn]] void fail_at(const LineMap* lines, const std::string& key, const std::string& msg) {
  if (lines && lines->count(key))
    throw config_error("line " + std::to_string(lines->at(key)) + ": " + msg);
  throw config_error(msg);
}

void validate_impl(const ExperimentConfig& c, const LineMap* lines) {
  if (c.sites < 2) fail_at(lines, "sites", "sites: need at least 2, got " + std::to_string(c.sites));
  if (c.potential.size() != c.sites)
    fail_at(lines, "potential",
            "potential: expected " + std::to_string(c.sites) + " displacement values, got " +
                std::to_string(c.potential.size()));
  for (int d = 0; d < c.sites; ++d) {
    const int mirror = (c.sites - d) % c.sites;
    if (std::abs(c.potential(d) - c.potential(mirror)) > 1e-12)
      fail_at(lines, "potential",
              "potential: breaks evenness at displacement " + std::to_string(d) + " (v(" +
                  std::to_string(d) + ")=" + fmt17(c.potential(d)) + ", v(" +
                  std::to_string(mirror) + ")=" + fmt17(c.potential(mirror)) + ")");
  }
  if (c.phi0.size() != c.sites)
    fail_at(lines, "phi0",
            "phi0: expected " + std::to_string(c.sites) + " complex entries, got " +
                std::to_string(c.phi0.size()));
  if (c.phi0.norm() < 1e-12) fail_at(lines, "phi0", "phi0: vanishing norm");
  if (c.n_list.empty()) fail_at(lines, "n", "n: need at least one particle number");
  for (std::size_t k = 0; k < c.n_list.size(); ++k) {
    if (c.n_list[k] < 1)
      fail_at(lines, "n", "n: particle numbers must be positive, got " +
                              std::to_string(c.n_list[k]));
    if (k > 0 && c.n_list[k] <= c.n_list[k - 1])
      fail_at(lines, "n", "n: particle numbers must be strictly increasing");
  }
  if (c.nmax_override < 0)
    fail_at(lines, "nmax", "nmax: must be 'auto' or a positive integer");
  if (c.nmax_override > 0 && c.nmax_override < c.n_list.back())
    fail_at(lines, "nmax",
            "nmax: override " + std::to_string(c.nmax_override) + " is below the largest n " +
                std::to_string(c.n_list.back()));
  const long steps = grid_steps(c.t_final, c.dt);
  if (steps < 0)
    fail_at(lines, "time", "time: t_final must be a positive whole number of dt steps");
  if (c.stride < 1) fail_at(lines, "time", "time: stride must be at least 1");
  if (steps % c.stride != 0)
    fail_at(lines, "time",
            "time: step count " + std::to_string(steps) + " is not divisible by stride " +
                std::to_string(c.stride));
  if (c.delta <= 0.0) fail_at(lines, "delta", "delta: must be positive");
  if (c.samples < 1) fail_at(lines, "samples", "samples: must be at least 1");
  if (c.memory_mb <= 0.0) fail_at(lines, "memory", "memory: must be positive (MB)");
  if (c.out_dir.empty()) fail_at(lines, "out", "out: empty output directory");
}

ExperimentConfig parse_json_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("json: ") + e.what());
  }
  ExperimentConfig c;
  try {
    c.study = study_from_name(j.at("study").get<std::string>());
    c.sites = j.at("sites").get<int>();
    const auto pot = j.at("potential").get<std::vector<double>>();
    c.potential = Eigen::Map<const Eigen::VectorXd>(pot.data(), pot.size());
    const auto raw = j.at("phi0").get<std::vector<double>>();
    if (raw.size() % 2 != 0)
      throw config_error("phi0: expected a flat list of re, im pairs");
    c.phi0.resize(raw.size() / 2);
    for (std::size_t k = 0; k + 1 < raw.size(); k += 2)
      c.phi0(k / 2) = cplx(raw[k], raw[k + 1]);
    c.data = data_from_name(j.at("data").get<std::string>());
    c.n_list = j.at("n").get<std::vector<int>>();
    if (j.contains("nmax")) {
      if (j["nmax"].is_string() && j["nmax"] == "auto") c.nmax_override = 0;
      else c.nmax_override = j["nmax"].get<int>();
    }
    const auto time = j.at("time").get<std::vector<double>>();
    if (time.size() != 3) throw config_error("time: expected [t_final, dt, stride]");
    c.t_final = time[0];
    c.dt = time[1];
    c.stride = int(std::lround(time[2]));
    if (j.contains("observable"))
      c.observable = observable_from_name(j["observable"].get<std::string>());
    if (j.contains("delta")) c.delta = j["delta"].get<double>();
    if (j.contains("samples")) c.samples = j["samples"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<unsigned long>();
    if (j.contains("memory")) c.memory_mb = j["memory"].get<double>();
    if (j.contains("charts")) c.charts = j["charts"].get<bool>();
    if (j.contains("out")) c.out_dir = j["out"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("json: ") + e.what());
  }
  validate_impl(c, nullptr);
  return c;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_json_config(text);

  ExperimentConfig c;
  LineMap lines;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_study = false, have_sites = false, have_potential = false, have_phi0 = false,
       have_data = false, have_n = false, have_time = false;

  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::vector<std::string> vals;
    for (std::string tok; ls >> tok;) vals.push_back(tok);
    const std::string at = "line " + std::to_string(lineno);
    if (lines.count(key)) throw config_error(at + ": duplicate key '" + key + "'");
    lines[key] = lineno;

    try {
      if (key == "study") {
        if (vals.size() != 1) throw config_error("study: expected one name");
        c.study = study_from_name(vals[0]);
        have_study = true;
      } else if (key == "sites") {
        if (vals.size() != 1) throw config_error("sites: expected one integer");
        c.sites = int(parse_long(vals[0], "sites"));
        have_sites = true;
      } else if (key == "potential") {
        c.potential.resize(vals.size());
        for (std::size_t k = 0; k < vals.size(); ++k)
          c.potential(k) = parse_double(vals[k], "potential");
        have_potential = true;
      } else if (key == "phi0") {
        if (vals.size() % 2 != 0)
          throw config_error("phi0: expected re im pairs, got an odd count");
        c.phi0.resize(vals.size() / 2);
        for (std::size_t k = 0; k + 1 < vals.size(); k += 2)
          c.phi0(k / 2) = cplx(parse_double(vals[k], "phi0"), parse_double(vals[k + 1], "phi0"));
        have_phi0 = true;
      } else if (key == "data") {
        if (vals.size() != 1) throw config_error("data: expected one kind");
        c.data = data_from_name(vals[0]);
        have_data = true;
      } else if (key == "n") {
        c.n_list.clear();
        for (const std::string& v : vals) c.n_list.push_back(int(parse_long(v, "n")));
        have_n = true;
      } else if (key == "nmax") {
        if (vals.size() != 1) throw config_error("nmax: expected 'auto' or one integer");
        c.nmax_override = vals[0] == "auto" ? 0 : int(parse_long(vals[0], "nmax"));
        if (vals[0] != "auto" && c.nmax_override <= 0)
          throw config_error("nmax: must be 'auto' or a positive integer");
      } else if (key == "time") {
        if (vals.size() != 3) throw config_error("time: expected t_final dt stride");
        c.t_final = parse_double(vals[0], "time");
        c.dt = parse_double(vals[1], "time");
        c.stride = int(parse_long(vals[2], "time"));
        have_time = true;
      } else if (key == "observable") {
        if (vals.size() != 1) throw config_error("observable: expected one name");
        c.observable = observable_from_name(vals[0]);
      } else if (key == "delta") {
        if (vals.size() != 1) throw config_error("delta: expected one number");
        c.delta = parse_double(vals[0], "delta");
      } else if (key == "samples") {
        if (vals.size() != 1) throw config_error("samples: expected one integer");
        c.samples = int(parse_long(vals[0], "samples"));
      } else if (key == "seed") {
        if (vals.size() != 1) throw config_error("seed: expected one integer");
        c.seed = std::stoul(vals[0]);
      } else if (key == "memory") {
        if (vals.size() != 1) throw config_error("memory: expected one number (MB)");
        c.memory_mb = parse_double(vals[0], "memory");
      } else if (key == "charts") {
        if (vals.size() != 1 || (vals[0] != "on" && vals[0] != "off"))
          throw config_error("charts: expected on or off");
        c.charts = vals[0] == "on";
      } else if (key == "out") {
        if (vals.size() != 1) throw config_error("out: expected one path");
        c.out_dir = vals[0];
      } else {
        throw config_error("unknown key '" + key + "'");
      }
    } catch (const config_error& e) {
      const std::string msg = e.what();
      if (msg.rfind("line ", 0) == 0) throw;
      throw config_error(at + ": " + msg);
    }
  }

  if (!have_study) throw config_error("missing required key 'study'");
  if (!have_sites) throw config_error("missing required key 'sites'");
  if (!have_potential) throw config_error("missing required key 'potential'");
  if (!have_phi0) throw config_error("missing required key 'phi0'");
  if (!have_data) throw config_error("missing required key 'data'");
  if (!have_n) throw config_error("missing required key 'n'");
  if (!have_time) throw config_error("missing required key 'time'");

  validate_impl(c, &lines);
  return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "study " << study_name(c.study) << "\n";
  out << "sites " << c.sites << "\n";
  out << "potential";
  for (int d = 0; d < c.potential.size(); ++d) out << " " << fmt17(c.potential(d));
  out << "\nphi0";
  for (int x = 0; x < c.phi0.size(); ++x)
    out << " " << fmt17(c.phi0(x).real()) << " " << fmt17(c.phi0(x).imag());
  out << "\ndata " << data_name(c.data) << "\n";
  out << "n";
  for (int n : c.n_list) out << " " << n;
  out << "\n";
  if (c.nmax_override > 0) out << "nmax " << c.nmax_override << "\n";
  else out << "nmax auto\n";
  out << "time " << fmt17(c.t_final) << " " << fmt17(c.dt) << " " << c.stride << "\n";
  out << "observable " << observable_name(c.observable) << "\n";
  out << "delta " << fmt17(c.delta) << "\n";
  out << "samples " << c.samples << "\n";
  out << "seed " << c.seed << "\n";
  out << "memory " << fmt17(c.memory_mb) << "\n";
  out << "charts " << (c.charts ? "on" : "off") << "\n";
  out << "out " << c.out_dir << "\n";
  return out.str();
}

void validate(const ExperimentConfig& c) { validate_impl(c, nullptr); }

int resolved_nmax(const ExperimentConfig& c, int n) {
  if (c.nmax_override > 0) return c.nmax_override;
  // the growth study tracks a displaced vacuum whose occupation is Poisson
  // around N, so it needs coherent headroom whatever the data kind says
  if (c.study == StudyKind::growth || c.data == DataKind::coherent)
    return truncation_for_coherent(n);
  return truncation_for_product(n);
}

FeasibilityReport estimate_feasibility(const ExperimentConfig& c) {
  const KrylovOptions kdflt;
  FeasibilityReport rep;
  for (int n : c.n_list) {
    FeasibilityLine line;
    line.n = n;
    line.n_max = resolved_nmax(c, n);
    line.dim = FockBasis::dim_estimate(c.sites, line.n_max);
    const double bytes_per_vec = 16.0 * line.dim;
    double vecs = std::min(double(kdflt.max_dim + 2),
                           std::floor(kdflt.memory_budget / std::max(bytes_per_vec, 1.0)));
    vecs = std::max(vecs, 3.0) + 6.0;  // Lanczos basis plus runner-held states
    line.mb = bytes_per_vec * vecs / (1024.0 * 1024.0);
    rep.peak_mb = std::max(rep.peak_mb, line.mb);
    rep.lines.push_back(line);
  }
  return rep;
}

void require_feasible(const ExperimentConfig& c) {
  const FeasibilityReport rep = estimate_feasibility(c);
  for (const FeasibilityLine& line : rep.lines)
    if (line.mb > c.memory_mb)
      throw infeasible_error("n=" + std::to_string(line.n) + " needs about " +
                             std::to_string(long(line.mb)) + " MB (cutoff " +
                             std::to_string(line.n_max) + ", dimension " +
                             fmt17(line.dim) + "), budget is " +
                             std::to_string(long(c.memory_mb)) + " MB");
}

namespace {

const std::map<std::string, const char*>& preset_map() {
  static const std::map<std::string, const char*> presets = {
      {"free", R"(# interaction switched off: evolved product data stays exactly factorized
study free
sites 6
potential 0 0 0 0 0 0
phi0 1 0 0.8 0.3 0.5 0.1 0.3 -0.2 0.45 -0.15 0.7 -0.25
data product
n 2 4 8 12
time 1.0 0.001 500
observable hopping
seed 20260816
out out-free
)"},
      {"convergence", R"(# one-particle matrix converges to the mean-field projector as n grows
study convergence
sites 6
potential 0.4 0.2 0.08 0.04 0.08 0.2
phi0 1 0 0.8 0.3 0.5 0.1 0.3 -0.2 0.45 -0.15 0.7 -0.25
data product
n 2 4 8 12
time 0.5 0.001 500
observable hopping
seed 20260816
out out-convergence
)"},
      {"growth", R"(# expected pair content of the dressed vacuum stays exponentially bounded
study growth
sites 4
potential 0.3 0.15 0.08 0.15
phi0 1 0 0.7 0.25 0.45 -0.1 0.6 -0.2
data coherent
n 8 16
time 2.0 0.001 100
observable hopping
seed 20260816
out out-growth
)"},
      {"bogoliubov", R"(# pair-flow identities along theta and the conjugation action check
study bogoliubov
sites 4
potential 0.3 0.15 0.08 0.15
phi0 1 0 0.7 0.25 0.45 -0.1 0.6 -0.2
data product
n 12
time 2.0 0.001 200
observable hopping
samples 20
seed 20260816
out out-bogoliubov
)"},
      {"clt", R"(# centered fluctuation moments against the quadratic-flow variance
study clt
sites 6
potential 0.4 0.2 0.08 0.04 0.08 0.2
phi0 1 0 0.8 0.3 0.5 0.1 0.3 -0.2 0.45 -0.15 0.7 -0.25
data product
n 4 8 12
time 1.0 0.001 125
observable site_cosine
delta 0.1
seed 20260816
out out-clt
)"}};
  return presets;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : preset_map()) out.push_back(name);
  return out;
}

std::string preset_text(const std::string& name) {
  const auto& presets = preset_map();
  const auto it = presets.find(name);
  if (it == presets.end()) throw config_error("unknown preset '" + name + "'");
  return it->second;
}

}  // namespace meanfield
