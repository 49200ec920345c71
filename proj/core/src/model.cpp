#include "dfrc/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dfrc {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void SystemConfig::validate() const {
  auto bad = [](const std::string& msg) {
    throw std::invalid_argument(msg);
  };
  if (n_tx < 1) bad("n_tx must be >= 1");
  if (n_rf < 1) bad("n_rf must be >= 1");
  if (n_rx < 1) bad("n_rx must be >= 1");
  if (n_rad < 1) bad("n_rad must be >= 1");
  if (n_streams < 1) bad("n_streams must be >= 1");
  if (n_subpulses < 1) bad("n_subpulses must be >= 1");
  if (n_tx % n_rf != 0) bad("n_tx not divisible by n_rf");
  if (n_streams > n_rf) bad("n_streams must not exceed n_rf");
  if (!(energy_budget > 0)) bad("energy_budget must be > 0");
  if (!(noise_var_comm > 0)) bad("noise_var_comm must be > 0");
  if (!(noise_var_radar > 0)) bad("noise_var_radar must be > 0");
  if (!(spacing_over_lambda_tx > 0)) bad("spacing_over_lambda_tx must be > 0");
  if (!(spacing_over_lambda_rx > 0)) bad("spacing_over_lambda_rx must be > 0");
}

Eigen::VectorXcd DpsAnalogPrecoder::gains() const {
  Eigen::VectorXcd f(amplitudes.size());
  for (int m = 0; m < amplitudes.size(); ++m)
    f(m) = std::polar(amplitudes(m), phases(m));
  return f;
}

Eigen::MatrixXcd DpsAnalogPrecoder::materialize(int n_rf) const {
  const int n_tx = size();
  const int m_sub = n_tx / n_rf;
  Eigen::MatrixXcd f_rf = Eigen::MatrixXcd::Zero(n_tx, n_rf);
  const Eigen::VectorXcd f = gains();
  for (int m = 0; m < n_tx; ++m) f_rf(m, m / m_sub) = f(m);
  return f_rf;
}

void DpsAnalogPrecoder::validate(int n_tx) const {
  if (size() != n_tx || phases.size() != n_tx)
    throw std::invalid_argument("analog precoder size mismatch");
  const double a_max = 2.0 / std::sqrt(static_cast<double>(n_tx));
  for (int m = 0; m < n_tx; ++m) {
    if (amplitudes(m) < 0.0 || amplitudes(m) > a_max + 1e-12)
      throw std::invalid_argument("amplitude out of [0, 2/sqrt(n_tx)] at antenna " +
                                  std::to_string(m));
  }
  if (has_split_phases()) {
    const double inv = 1.0 / std::sqrt(static_cast<double>(n_tx));
    for (int m = 0; m < n_tx; ++m) {
      const cplx rec = inv * (std::polar(1.0, psi1(m)) + std::polar(1.0, psi2(m)));
      const cplx want = std::polar(amplitudes(m), phases(m));
      if (std::abs(rec - want) > 1e-10)
        throw std::invalid_argument("split-phase reconstruction violated at antenna " +
                                    std::to_string(m));
    }
  }
}

int RadarScene::max_fir_length() const {
  int len = target.fir_length();
  for (const auto& c : clutter) len = std::max(len, c.fir_length());
  return len;
}

Eigen::VectorXcd steering_vector(double angle, int count,
                                 double spacing_over_lambda) {
  Eigen::VectorXcd a(count);
  const double step = kTwoPi * spacing_over_lambda * std::sin(angle);
  const double scale = 1.0 / std::sqrt(static_cast<double>(count));
  for (int k = 0; k < count; ++k) a(k) = std::polar(scale, step * k);
  return a;
}

CommChannel generate_geometric_channel(const SystemConfig& cfg, int n_path,
                                       Rng& rng) {
  if (n_path < 1) throw std::invalid_argument("n_path must be >= 1");
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(cfg.n_rx, cfg.n_tx);
  for (int p = 0; p < n_path; ++p) {
    const cplx gain = rng.complex_normal();
    const double aoa = rng.uniform(0.0, kTwoPi);
    const double aod = rng.uniform(0.0, kTwoPi);
    h += gain * steering_vector(aoa, cfg.n_rx, cfg.spacing_over_lambda_rx) *
         steering_vector(aod, cfg.n_tx, cfg.spacing_over_lambda_tx).adjoint();
  }
  return CommChannel{h * std::sqrt(1.0 / n_path)};
}

Eigen::MatrixXd exponential_covariance(double power, double shape, int len) {
  if (!(power > 0)) throw std::invalid_argument("covariance power must be > 0");
  if (!(shape > 1)) throw std::invalid_argument("covariance shape must be > 1");
  if (len < 1) throw std::invalid_argument("covariance length must be >= 1");
  Eigen::MatrixXd sigma(len, len);
  for (int m = 0; m < len; ++m)
    for (int n = 0; n < len; ++n)
      sigma(m, n) = power * std::pow(shape, -std::abs(m - n));
  return sigma;
}

RadarScene build_scene(const SceneParams& p, int n_subpulses) {
  if (n_subpulses < 1) throw std::invalid_argument("n_subpulses must be >= 1");
  if (p.target_fir_len < 1 || (p.n_clutter > 0 && p.clutter_fir_len < 1))
    throw std::invalid_argument("FIR length must be >= 1");
  if (p.n_clutter < 0) throw std::invalid_argument("clutter bin count must be >= 0");
  RadarScene scene;
  scene.n_subpulses = n_subpulses;
  scene.doppler_hz = p.doppler_hz;
  scene.sample_rate_hz = p.sample_rate_hz;
  scene.target.angle = p.target_angle;
  scene.target.covariance =
      exponential_covariance(p.target_power, p.target_shape, p.target_fir_len)
          .cast<cplx>();
  scene.clutter.reserve(p.n_clutter);
  const Eigen::MatrixXcd clutter_cov =
      p.n_clutter > 0
          ? exponential_covariance(p.clutter_power, p.clutter_shape,
                                   p.clutter_fir_len)
                .cast<cplx>()
          : Eigen::MatrixXcd();
  for (int i = 0; i < p.n_clutter; ++i) {
    ExtendedScattererStats bin;
    bin.angle = kTwoPi * i / p.n_clutter;
    bin.covariance = clutter_cov;
    scene.clutter.push_back(std::move(bin));
  }
  return scene;
}

Eigen::MatrixXcd spatial_steering_matrix(double angle, const SystemConfig& cfg) {
  return steering_vector(angle, cfg.n_rad, cfg.spacing_over_lambda_rx) *
         steering_vector(angle, cfg.n_tx, cfg.spacing_over_lambda_tx).adjoint();
}

}  // namespace dfrc
