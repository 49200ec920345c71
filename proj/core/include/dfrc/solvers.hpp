#ifndef DFRC_SOLVERS_HPP
#define DFRC_SOLVERS_HPP

#include "dfrc/comm.hpp"
#include "dfrc/kernels.hpp"
#include "dfrc/types.hpp"

namespace dfrc {

/// Per-subpulse consensus variables and duals of the ADMM splitting.
struct AdmmState {
  MatrixStack x, z;      // consensus copies of the effective precoder
  MatrixStack u, w;      // combiners and WMMSE weights (SU case)
  MatrixStack d1, d2;    // duals for X = F_set P F_D and X = Z
  DpsAnalogPrecoder f_set;
  MatrixStack f_d;       // digital precoders, N_RF x N_s
  double rho1 = 20.0, rho2 = 20.0;
  // MU case scalar combiners/weights, indexed [subpulse][user]
  std::vector<std::vector<cplx>> u_mu;
  std::vector<std::vector<double>> w_mu;
};

/// Raised when the radar SINR constraint cannot be met by any admissible
/// iterate (Z-update sup below alpha, or threshold unreachable outright).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HermEig {
  Eigen::MatrixXcd q;
  Eigen::VectorXd lam;
};

HermEig herm_eig(const Eigen::MatrixXcd& a);

struct StackUpdate {
  MatrixStack value;
  double multiplier = 0.0;
};

/// Principal generalized eigenvector of (Theta_t, Theta_c + sigma_r^2 I):
/// the unit-norm maximizer of the SINR Rayleigh quotient.
Eigen::VectorXcd update_radar_filter(const SinrKernelsV& k, double sigma_r2);

/// Shared energy-constrained KKT solve: X_l = (Xi_l + mu I)^{-1} Psi_l with
/// mu = 0 if the unconstrained power fits the budget, else the bisection
/// root of the power equation.
StackUpdate solve_energy_kkt(const std::vector<HermEig>& xi_eig,
                             const MatrixStack& psi, double energy);

/// Total transmit power sum_l Tr{X_l X_l^H} at a given multiplier (exposed
/// for the monotonicity property of the bisection LHS).
double energy_kkt_power(const std::vector<HermEig>& xi_eig,
                        const MatrixStack& psi, double mu);

/// SU X-update (Theorem 2): builds Xi_l, Psi_l from the WMMSE blocks and the
/// ADMM anchors and runs the energy KKT solve.
StackUpdate update_x_su(const AdmmState& st, const Eigen::MatrixXcd& h,
                        double energy);

/// MU-MISO X-update: same search with the scalar-WMMSE Xi/Psi.
StackUpdate update_x_mu_miso(const AdmmState& st,
                             const std::vector<Eigen::VectorXcd>& channels,
                             const Eigen::VectorXd& priorities,
                             const Eigen::VectorXd& noise_vars, double energy);

/// Fully-digital X-update: consensus with Z only (no analog factorization).
StackUpdate update_x_fully_digital(const AdmmState& st,
                                   const Eigen::MatrixXcd& h, double energy);
StackUpdate update_x_fully_digital_mu(
    const AdmmState& st, const std::vector<Eigen::VectorXcd>& channels,
    const Eigen::VectorXd& priorities, const Eigen::VectorXd& noise_vars,
    double energy);

/// Z-update (Theorem 3): safeguarded Newton on the multiplier of the radar
/// SINR constraint sum_l Tr{Z Z^H M[l,l]} >= alpha, with
/// M[l,l] = Phi_t[l,l] - gamma Phi_c[l,l] supplied eigendecomposed.
/// Throws InfeasibleError when the constraint is unreachable.
StackUpdate update_z(const MatrixStack& x, const MatrixStack& d2, double rho2,
                     const std::vector<HermEig>& m_eig, double alpha);

/// Constraint value sum_l Tr{Z_l Z_l^H M[l,l]}.
double sinr_constraint_value(const MatrixStack& z,
                             const std::vector<HermEig>& m_eig);

/// Digital precoder update, closed form; the per-subarray diagonal
/// normalizer is sums of A_i^2. Throws naming the subarray if one has all
/// amplitudes zero.
MatrixStack update_fd(const DpsAnalogPrecoder& f_set, const MatrixStack& x,
                      const MatrixStack& d1, double rho1,
                      const SystemConfig& cfg);

/// Per-antenna amplitude/phase update of F_set with the amplitude clipped to
/// 2/sqrt(n_tx). Degenerate rows get A = 0, phi = 0.
DpsAnalogPrecoder update_fset(const MatrixStack& x, const MatrixStack& f_d,
                              const MatrixStack& d1, double rho1,
                              const SystemConfig& cfg);

/// Split A e^{j phi} into the two unit phase-shifter angles.
std::pair<double, double> dps_phase_split(double amplitude, double phase,
                                          int n_tx);

/// Fill psi1/psi2 for every antenna.
void materialize_split_phases(DpsAnalogPrecoder& f, int n_tx);

/// Dual ascent: D1 += rho1 (X - F_set P F_D), D2 += rho2 (X - Z).
void update_duals(AdmmState& st, const SystemConfig& cfg,
                  bool with_analog = true);

/// Pin every amplitude to 1/sqrt(n_tx), keeping the phases (the conventional
/// single-phase-shifter baseline).
DpsAnalogPrecoder sps_project(const DpsAnalogPrecoder& f, int n_tx);

}  // namespace dfrc

#endif
