#ifndef DFRC_TEST_HELPERS_HPP
#define DFRC_TEST_HELPERS_HPP

#include <numbers>

#include "dfrc/model.hpp"
#include "dfrc/rng.hpp"
#include "dfrc/types.hpp"

namespace testutil {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline Eigen::MatrixXcd random_psd(int n, dfrc::Rng& rng) {
  const Eigen::MatrixXcd a = rng.complex_normal_matrix(n, n);
  return a * a.adjoint() / double(n);
}

inline dfrc::RadarScene random_scene(dfrc::Rng& rng, int n_subpulses,
                                     int target_len, int n_clutter,
                                     int clutter_len) {
  dfrc::RadarScene s;
  s.n_subpulses = n_subpulses;
  s.target.angle = rng.uniform(0.0, kTwoPi);
  s.target.covariance = random_psd(target_len, rng);
  for (int i = 0; i < n_clutter; ++i) {
    dfrc::ExtendedScattererStats bin;
    bin.angle = rng.uniform(0.0, kTwoPi);
    bin.covariance = random_psd(clutter_len, rng);
    s.clutter.push_back(std::move(bin));
  }
  return s;
}

inline dfrc::PrecoderStack random_precoders(const dfrc::SystemConfig& cfg,
                                            dfrc::Rng& rng) {
  dfrc::PrecoderStack f(cfg.n_subpulses);
  double power = 0.0;
  for (auto& fl : f) {
    fl = rng.complex_normal_matrix(cfg.n_tx, cfg.n_streams);
    power += fl.squaredNorm();
  }
  const double s = std::sqrt(cfg.energy_budget / power);
  for (auto& fl : f) fl *= s;
  return f;
}

inline Eigen::VectorXcd random_unit_vector(int n, dfrc::Rng& rng) {
  Eigen::VectorXcd v = rng.complex_normal_vector(n);
  return v / v.norm();
}

}  // namespace testutil

#endif
