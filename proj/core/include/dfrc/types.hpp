#ifndef DFRC_TYPES_HPP
#define DFRC_TYPES_HPP

#include <complex>
#include <vector>
#include <Eigen/Dense>

namespace dfrc {

using cplx = std::complex<double>;

/// Array, RF-chain and stream dimensions plus the energy/noise budget.
/// Angles are radians everywhere in the library; degrees exist only at the
/// CLI boundary.
struct SystemConfig {
  int n_tx = 32;         // transmit antennas
  int n_rf = 4;          // RF chains (subarray count)
  int n_rx = 4;          // comm receive antennas
  int n_rad = 4;         // radar receive antennas
  int n_streams = 4;     // data streams per subpulse
  int n_subpulses = 16;  // L
  double energy_budget = 10.0;   // total transmit energy, linear
  double noise_var_comm = 0.1;   // sigma_c^2
  double noise_var_radar = 0.1;  // sigma_r^2
  double spacing_over_lambda_tx = 0.5;
  double spacing_over_lambda_rx = 0.5;

  int subarray_size() const { return n_tx / n_rf; }

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// The diagonal of F_set: per-antenna complex gains A_m e^{j phi_m} realised
/// by two parallel unit phase shifters. Split phases psi1/psi2 are filled in
/// on demand (empty when not materialised yet).
struct DpsAnalogPrecoder {
  Eigen::VectorXd amplitudes;  // A_m in [0, 2/sqrt(n_tx)]
  Eigen::VectorXd phases;      // phi_m in [0, 2pi)
  Eigen::VectorXd psi1, psi2;  // split phases, size 0 or n_tx

  int size() const { return static_cast<int>(amplitudes.size()); }
  bool has_split_phases() const { return psi1.size() == amplitudes.size(); }

  Eigen::VectorXcd gains() const;

  // F_RF = diag(f) * P for the block-diagonal selection matrix P:
  // one nonzero per row, n_tx/n_rf nonzeros per column.
  Eigen::MatrixXcd materialize(int n_rf) const;

  // Checks amplitude bounds and, when present, the split-phase
  // reconstruction identity. Throws on violation.
  void validate(int n_tx) const;
};

/// One extended scatterer: azimuth plus the FIR tap covariance.
struct ExtendedScattererStats {
  double angle = 0.0;          // radians
  Eigen::MatrixXcd covariance; // Hermitian PSD, fir_length x fir_length

  int fir_length() const { return static_cast<int>(covariance.rows()); }
};

struct RadarScene {
  ExtendedScattererStats target;
  std::vector<ExtendedScattererStats> clutter;
  double doppler_hz = 0.0;
  double sample_rate_hz = 1.0;
  int n_subpulses = 0;  // L, mirrored from SystemConfig

  int max_fir_length() const;
  // L + max{L_tar, max_i L_c,i} - 1
  int l_obs() const { return n_subpulses + max_fir_length() - 1; }
};

struct CommChannel {
  Eigen::MatrixXcd matrix;  // N_Rx x N_Tx
};

using PrecoderStack = std::vector<Eigen::MatrixXcd>;  // one N_Tx x N_s per subpulse
using MatrixStack = std::vector<Eigen::MatrixXcd>;

}  // namespace dfrc

#endif
