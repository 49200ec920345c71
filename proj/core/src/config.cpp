#include "dfrc/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numbers>
#include <sstream>

namespace dfrc {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void fail(int line, const std::string& key,
                       const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": key '" + key + "': " +
                    what);
}

double parse_double(const std::string& v, int line, const std::string& key) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    fail(line, key, "expected a number, got '" + v + "'");
  }
}

int parse_int(const std::string& v, int line, const std::string& key) {
  try {
    size_t pos = 0;
    long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return static_cast<int>(d);
  } catch (...) {
    fail(line, key, "expected an integer, got '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& v, int line,
                        const std::string& key) {
  try {
    size_t pos = 0;
    std::uint64_t d = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    fail(line, key, "expected a nonnegative integer, got '" + v + "'");
  }
}

std::vector<double> parse_double_list(const std::string& v, int line,
                                      const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_list(v))
    out.push_back(parse_double(item, line, key));
  if (out.empty()) fail(line, key, "empty list");
  return out;
}

std::vector<int> parse_int_list(const std::string& v, int line,
                                const std::string& key) {
  std::vector<int> out;
  for (const auto& item : split_list(v)) out.push_back(parse_int(item, line, key));
  if (out.empty()) fail(line, key, "empty list");
  return out;
}

}  // namespace

ExperimentConfig::SweepAxis ExperimentConfig::sweep_axis() const {
  if (!n_rf_sweep.empty()) return SweepAxis::n_rf;
  if (!n_users_sweep.empty()) return SweepAxis::n_users;
  if (gamma_db.size() > 1) return SweepAxis::gamma;
  return SweepAxis::none;
}

std::vector<double> ExperimentConfig::sweep_values() const {
  switch (sweep_axis()) {
    case SweepAxis::n_rf: {
      std::vector<double> v(n_rf_sweep.begin(), n_rf_sweep.end());
      return v;
    }
    case SweepAxis::n_users: {
      std::vector<double> v(n_users_sweep.begin(), n_users_sweep.end());
      return v;
    }
    default:
      return gamma_db;
  }
}

void ExperimentConfig::validate() const {
  if (scenario != "su-mimo" && scenario != "mu-miso")
    throw ConfigError("scenario must be su-mimo or mu-miso, got '" + scenario +
                      "'");
  try {
    system.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  int sweeps = (gamma_db.size() > 1 ? 1 : 0) + (n_rf_sweep.empty() ? 0 : 1) +
               (n_users_sweep.empty() ? 0 : 1);
  if (sweeps > 1) throw ConfigError("at most one sweep axis is allowed");
  if (gamma_db.empty()) throw ConfigError("gamma_db list is empty");
  for (int n : n_rf_sweep) {
    if (n < 1) throw ConfigError("n_rf_sweep entries must be positive");
    if (system.n_tx % n != 0)
      throw ConfigError("n_tx not divisible by n_rf sweep value " +
                        std::to_string(n));
  }
  for (int n : n_users_sweep)
    if (n < 1) throw ConfigError("n_users_sweep entries must be positive");
  if (!n_users_sweep.empty() && scenario != "mu-miso")
    throw ConfigError("n_users_sweep requires the mu-miso scenario");
  if (n_users < 1) throw ConfigError("n_users must be >= 1");
  if (n_path < 1) throw ConfigError("n_path must be >= 1");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (baselines.empty()) throw ConfigError("baselines list is empty");
  for (const auto& b : baselines)
    if (b != "dps" && b != "sps" && b != "fully-digital")
      throw ConfigError("unknown baseline '" + b + "'");
  if (rho1 <= 0.0 || rho2 <= 0.0) throw ConfigError("rho1/rho2 must be positive");
  if (admm_max_iter < 1) throw ConfigError("admm_max_iter must be >= 1");
  if (outer_max_iter < 1) throw ConfigError("outer_max_iter must be >= 1");
  if (scene.target_fir_len < 1 || scene.clutter_fir_len < 1)
    throw ConfigError("FIR lengths must be >= 1");
  if (scene.n_clutter < 0) throw ConfigError("n_clutter must be >= 0");
  if (scene.target_shape <= 1.0 || scene.clutter_shape <= 1.0)
    throw ConfigError("covariance shape parameters must exceed 1");
  if (scene.target_power <= 0.0 || scene.clutter_power < 0.0)
    throw ConfigError("scatterer powers out of range");
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(ss, raw)) {
    ++line_no;
    std::string line = raw;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) +
                          ": malformed section header");
      continue;  // headers are organisational only
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (val.empty()) fail(line_no, key, "empty value");

    if (key == "scenario") cfg.scenario = val;
    else if (key == "n_tx") cfg.system.n_tx = parse_int(val, line_no, key);
    else if (key == "n_rf") cfg.system.n_rf = parse_int(val, line_no, key);
    else if (key == "n_rx") cfg.system.n_rx = parse_int(val, line_no, key);
    else if (key == "n_rad") cfg.system.n_rad = parse_int(val, line_no, key);
    else if (key == "n_streams")
      cfg.system.n_streams = parse_int(val, line_no, key);
    else if (key == "n_subpulses")
      cfg.system.n_subpulses = parse_int(val, line_no, key);
    else if (key == "energy_budget")
      cfg.system.energy_budget = parse_double(val, line_no, key);
    else if (key == "noise_var_comm")
      cfg.system.noise_var_comm = parse_double(val, line_no, key);
    else if (key == "noise_var_radar")
      cfg.system.noise_var_radar = parse_double(val, line_no, key);
    else if (key == "target_angle_deg")
      cfg.scene.target_angle =
          parse_double(val, line_no, key) * std::numbers::pi / 180.0;
    else if (key == "target_fir_len")
      cfg.scene.target_fir_len = parse_int(val, line_no, key);
    else if (key == "target_power")
      cfg.scene.target_power = parse_double(val, line_no, key);
    else if (key == "target_shape")
      cfg.scene.target_shape = parse_double(val, line_no, key);
    else if (key == "n_clutter")
      cfg.scene.n_clutter = parse_int(val, line_no, key);
    else if (key == "clutter_fir_len")
      cfg.scene.clutter_fir_len = parse_int(val, line_no, key);
    else if (key == "clutter_power")
      cfg.scene.clutter_power = parse_double(val, line_no, key);
    else if (key == "clutter_shape")
      cfg.scene.clutter_shape = parse_double(val, line_no, key);
    else if (key == "gamma_db")
      cfg.gamma_db = parse_double_list(val, line_no, key);
    else if (key == "n_rf_sweep")
      cfg.n_rf_sweep = parse_int_list(val, line_no, key);
    else if (key == "n_users_sweep")
      cfg.n_users_sweep = parse_int_list(val, line_no, key);
    else if (key == "n_users") cfg.n_users = parse_int(val, line_no, key);
    else if (key == "n_path") cfg.n_path = parse_int(val, line_no, key);
    else if (key == "trials") cfg.trials = parse_int(val, line_no, key);
    else if (key == "seed") cfg.seed = parse_u64(val, line_no, key);
    else if (key == "out_dir") cfg.out_dir = val;
    else if (key == "baselines") cfg.baselines = split_list(val);
    else if (key == "rho1") cfg.rho1 = parse_double(val, line_no, key);
    else if (key == "rho2") cfg.rho2 = parse_double(val, line_no, key);
    else if (key == "admm_max_iter")
      cfg.admm_max_iter = parse_int(val, line_no, key);
    else if (key == "outer_max_iter")
      cfg.outer_max_iter = parse_int(val, line_no, key);
    else
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" +
                        key + "'");
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace dfrc
