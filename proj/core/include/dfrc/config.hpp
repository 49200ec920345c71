#ifndef DFRC_CONFIG_HPP
#define DFRC_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfrc/model.hpp"
#include "dfrc/types.hpp"

namespace dfrc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything an experiment run needs, with paper-default values. Parsed
/// from a flat key = value file; '#' comments and [section] headers are
/// allowed (headers are purely organisational).
struct ExperimentConfig {
  std::string scenario = "su-mimo";  // or "mu-miso"
  SystemConfig system;
  SceneParams scene;

  std::vector<double> gamma_db = {12.0};  // >1 entries makes a gamma sweep
  std::vector<int> n_rf_sweep;            // empty = no RF-chain sweep
  std::vector<int> n_users_sweep;         // empty = no user-count sweep

  int n_users = 4;  // mu-miso only
  int n_path = 16;
  int trials = 1;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  std::vector<std::string> baselines = {"dps"};

  double rho1 = 20.0, rho2 = 20.0;
  int admm_max_iter = 100;
  int outer_max_iter = 10;

  enum class SweepAxis { none, gamma, n_rf, n_users };
  SweepAxis sweep_axis() const;
  /// Numeric sweep labels for the CSV: gamma in dB, else the integer axis.
  std::vector<double> sweep_values() const;

  void validate() const;  // throws ConfigError
};

ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

}  // namespace dfrc

#endif
