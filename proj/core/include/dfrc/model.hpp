#ifndef DFRC_MODEL_HPP
#define DFRC_MODEL_HPP

#include "dfrc/rng.hpp"
#include "dfrc/types.hpp"

namespace dfrc {

/// ULA steering vector; entry k is (1/sqrt(count)) e^{j 2 pi d/lambda k sin(angle)}.
Eigen::VectorXcd steering_vector(double angle, int count,
                                 double spacing_over_lambda);

/// Geometric channel: sqrt(1/n_path) sum of n_path rank-one terms with
/// CN(0,1) gains and AoA/AoD uniform on [0, 2pi).
CommChannel generate_geometric_channel(const SystemConfig& cfg, int n_path,
                                       Rng& rng);

/// Exponentially shaped tap covariance: Sigma(m,n) = power * shape^{-|m-n|}.
/// shape must exceed 1.
Eigen::MatrixXd exponential_covariance(double power, double shape, int len);

struct SceneParams {
  double target_angle = 0.0;  // radians
  int target_fir_len = 6;
  double target_power = 10.0;  // sigma_alpha^2
  double target_shape = 15.0;  // eta_alpha
  int n_clutter = 31;          // K azimuth cells at 2 pi (i-1)/K
  int clutter_fir_len = 8;
  double clutter_power = 1.0;  // sigma_beta^2
  double clutter_shape = 1.2;  // eta_beta
  double doppler_hz = 0.0;
  double sample_rate_hz = 1.0;
};

/// Scene with the homogeneous ring-of-clutter layout. K = 0 gives a
/// clutter-free scene.
RadarScene build_scene(const SceneParams& p, int n_subpulses);

/// Spatial steering matrix a_rad(angle) a_tx(angle)^H (N_Rad x N_Tx).
Eigen::MatrixXcd spatial_steering_matrix(double angle, const SystemConfig& cfg);

}  // namespace dfrc

#endif
