#ifndef DFRC_COMM_HPP
#define DFRC_COMM_HPP

#include "dfrc/types.hpp"

namespace dfrc {

/// Rate of one subpulse, bits/s/Hz:
/// log2|I + U C^{-1} U^H H X X^H H^H| with C = sigma_c^2 U^H U.
/// Throws if the combiner is rank deficient (C singular).
double spectral_efficiency_subpulse(const Eigen::MatrixXcd& h,
                                    const Eigen::MatrixXcd& x,
                                    const Eigen::MatrixXcd& u,
                                    double sigma_c2);

/// Per-subpulse rates for a stack of effective precoders/combiners.
std::vector<double> spectral_efficiency(const Eigen::MatrixXcd& h,
                                        const MatrixStack& x,
                                        const MatrixStack& u, double sigma_c2);

double sum_rate(const Eigen::MatrixXcd& h, const MatrixStack& x,
                const MatrixStack& u, double sigma_c2);

/// Rate achieved by the MMSE combiner: log2|I + (1/sigma_c^2) H X X^H H^H|.
/// Equal to spectral_efficiency_subpulse at U = MMSE(X) but stays
/// well-conditioned when the precoder sheds streams.
double mmse_spectral_efficiency(const Eigen::MatrixXcd& h,
                                const Eigen::MatrixXcd& x, double sigma_c2);

/// MSE matrix E = (I - U^H H X)(I - U^H H X)^H + sigma_c^2 U^H U.
Eigen::MatrixXcd mse_matrix(const Eigen::MatrixXcd& h,
                            const Eigen::MatrixXcd& x,
                            const Eigen::MatrixXcd& u, double sigma_c2);

/// MMSE combiner U = (H X X^H H^H + sigma_c^2 I)^{-1} H X.
Eigen::MatrixXcd update_combiner(const Eigen::MatrixXcd& h,
                                 const Eigen::MatrixXcd& x, double sigma_c2);

/// Optimal WMMSE weight W = (I - X^H H^H U)^{-1}, valid at the MMSE
/// combiner. Ill-conditioned systems are nudged by 1e-12 I with a warning
/// to stderr.
Eigen::MatrixXcd update_weight(const Eigen::MatrixXcd& h,
                               const Eigen::MatrixXcd& x,
                               const Eigen::MatrixXcd& u);

// ---- MU-MISO scalar counterparts -------------------------------------

/// Per-user rates for one subpulse: x is N_Tx x N_U with column n intended
/// for user n; channels holds the h_n column vectors.
std::vector<double> mu_miso_rates(const std::vector<Eigen::VectorXcd>& channels,
                                  const Eigen::VectorXd& noise_vars,
                                  const Eigen::MatrixXcd& x);

/// Scalar combining filter u_{l,n}.
cplx mu_miso_update_u(const Eigen::VectorXcd& h, const Eigen::MatrixXcd& x,
                      int user, double sigma_n2);

/// Scalar MSE e_{l,n} at a given u.
double mu_miso_mse(const Eigen::VectorXcd& h, const Eigen::MatrixXcd& x,
                   int user, cplx u, double sigma_n2);

/// Weight w = 1/e at the optimal combiner; always positive.
double mu_miso_update_w(const Eigen::VectorXcd& h, const Eigen::MatrixXcd& x,
                        int user, double sigma_n2);

}  // namespace dfrc

#endif
