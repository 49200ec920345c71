#ifndef DFRC_KERNELS_HPP
#define DFRC_KERNELS_HPP

#include "dfrc/model.hpp"
#include "dfrc/rng.hpp"
#include "dfrc/types.hpp"

namespace dfrc {

/// Filter-form SINR kernels: quadratic forms in v = vec(V), each of size
/// (N_Rad * L_obs)^2.
struct SinrKernelsV {
  Eigen::MatrixXcd theta_t;
  Eigen::MatrixXcd theta_c;
};

/// Precoder-form kernels: the L diagonal blocks of Phi_t(V) and Phi_c(V),
/// each N_Tx x N_Tx.
struct SinrKernelsF {
  MatrixStack phi_t;
  MatrixStack phi_c;
};

/// Radar receive beamformer, N_Rad x L_obs. Vectorization is column-major.
struct RadarFilter {
  Eigen::MatrixXcd matrix;

  Eigen::VectorXcd vectorized() const {
    return Eigen::Map<const Eigen::VectorXcd>(matrix.data(), matrix.size());
  }
  static RadarFilter from_vector(const Eigen::VectorXcd& v, int n_rad,
                                 int l_obs);
};

/// Theta_t / Theta_c of Proposition 1 for the given per-subpulse effective
/// precoders F_l = F_RF F_D,l. Results are re-Hermitianized.
SinrKernelsV build_theta_kernels(const PrecoderStack& precoders,
                                 const RadarScene& scene,
                                 const SystemConfig& cfg);

/// The diagonal blocks Phi_t[l,l], Phi_c[l,l] for a fixed filter V.
SinrKernelsF build_phi_kernels(const RadarFilter& filter,
                               const RadarScene& scene,
                               const SystemConfig& cfg);

/// (v^H Theta_t v) / (v^H Theta_c v + sigma_r^2 v^H v).
double sinr_filter_form(const Eigen::VectorXcd& v, const SinrKernelsV& k,
                        double sigma_r2);

/// Sum_l Tr{F_l F_l^H Phi_t[l,l]} over the clutter + noise counterpart.
double sinr_precoder_form(const PrecoderStack& precoders,
                          const SinrKernelsF& k, double sigma_r2,
                          const Eigen::VectorXcd& v);

struct McOptions {
  bool include_doppler = false;  // the kernels drop the known Doppler term
  bool numerator_only = false;   // estimate E|Tr{V^H H_t X T}|^2 instead of the ratio
};

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Direct Monte-Carlo evaluation of the defining SINR expectation: draws FIR
/// taps, symbols and noise, forms the received block and the empirical ratio.
McEstimate monte_carlo_sinr(const PrecoderStack& precoders,
                            const RadarFilter& filter, const RadarScene& scene,
                            const SystemConfig& cfg, int n_draws, Rng& rng,
                            const McOptions& opts = {});

}  // namespace dfrc

#endif
