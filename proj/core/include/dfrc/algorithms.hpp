#ifndef DFRC_ALGORITHMS_HPP
#define DFRC_ALGORITHMS_HPP

#include "dfrc/kernels.hpp"
#include "dfrc/rng.hpp"
#include "dfrc/solvers.hpp"
#include "dfrc/types.hpp"

namespace dfrc {

enum class Architecture { dps, sps, fully_digital };

/// Point-to-point MIMO design problem: one comm receiver, one radar target.
struct ProblemSU {
  SystemConfig cfg;
  CommChannel channel;
  RadarScene scene;
  double gamma = 0.0;  // radar SINR threshold, linear
};

/// Multi-user MISO variant: single-antenna users, one stream each.
struct ProblemMU {
  SystemConfig cfg;  // n_streams is the user count here
  std::vector<Eigen::VectorXcd> channels;
  Eigen::VectorXd priorities;
  Eigen::VectorXd noise_vars;
  RadarScene scene;
  double gamma = 0.0;
};

struct AdmmOptions {
  int max_iter = 100;
  // stop when max primal residual <= residual_tol_scale * sqrt(n_tx * n_s)
  double residual_tol_scale = 1e-5;
  double rho1 = 20.0, rho2 = 20.0;
};

struct SolveOptions {
  int n_outer = 10;
  double se_tol = 1e-4;  // outer stop on |sum-SE change|
  Architecture arch = Architecture::dps;
  AdmmOptions admm;
};

struct InnerRecord {
  int outer = 0, inner = 0;
  double sum_se = 0.0;
  double aug_lagrangian = 0.0;
  double res_consensus = 0.0;  // ||X - F_set P F_D||_F over subpulses
  double res_z = 0.0;          // ||X - Z||_F over subpulses
};

struct OuterRecord {
  int outer = 0;
  double sum_se = 0.0;
  double sinr_db = 0.0;
};

struct ConvergenceTrace {
  std::vector<InnerRecord> inner;
  std::vector<OuterRecord> outer;
};

struct SolveResult {
  DpsAnalogPrecoder f_set;  // split phases materialised for dps/sps
  MatrixStack f_d;
  PrecoderStack precoders;  // effective F_l actually evaluated
  MatrixStack combiners;    // SU MMSE combiners (empty in MU)
  Eigen::VectorXcd filter;  // radar receive filter, vectorised
  double sum_se = 0.0;
  std::vector<double> per_user_se;  // MU only
  double sinr_linear = 0.0;
  double sinr_db = 0.0;
  bool feasible = false;
  int outer_iters = 0;
  int inner_iters = 0;
  ConvergenceTrace trace;
};

/// Random start: amplitudes at 1/sqrt(n_tx), phases uniform, F_D CN(0,1)
/// rescaled so the hybrid product meets the energy budget with equality,
/// X = Z = F_set P F_D, duals zero. Combiners/weights are not set.
AdmmState init_admm_state(const SystemConfig& cfg, int n_cols, Rng& rng,
                          double rho1, double rho2);

/// Effective per-subpulse precoders of the current state: the hybrid product
/// for dps/sps, X itself for the fully digital architecture.
PrecoderStack effective_precoders(const AdmmState& st, const SystemConfig& cfg,
                                  Architecture arch);

/// Scaled augmented Lagrangian (natural-log WMMSE objective, negated so the
/// ADMM minimises it); used by the trace and the per-block descent test.
double augmented_lagrangian_su(const ProblemSU& p, const AdmmState& st,
                               Architecture arch);
double augmented_lagrangian_mu(const ProblemMU& p, const AdmmState& st,
                               Architecture arch);

/// Inner consensus-ADMM sweep at a fixed radar filter. alpha is the
/// constraint right-hand side gamma sigma_r^2 ||v||^2. Returns the number of
/// iterations run; appends to trace when given. Z-update infeasibility is
/// rethrown with the iteration index and constraint gap attached.
int consensus_admm_su(const ProblemSU& p, const std::vector<HermEig>& m_eig,
                      double alpha, Architecture arch, const AdmmOptions& opts,
                      AdmmState& st, ConvergenceTrace* trace, int outer_idx);
int consensus_admm_mu(const ProblemMU& p, const std::vector<HermEig>& m_eig,
                      double alpha, Architecture arch, const AdmmOptions& opts,
                      AdmmState& st, ConvergenceTrace* trace, int outer_idx);

/// Full alternating design: radar filter via the generalized eigenproblem,
/// then the ADMM beamformer update, repeated until the sum rate settles.
/// Throws InfeasibleError when the threshold is unreachable outright.
SolveResult thereon(const ProblemSU& p, Rng& rng, const SolveOptions& opts);
SolveResult thereon_mu_miso(const ProblemMU& p, Rng& rng,
                            const SolveOptions& opts);

/// P_d = Q1(sqrt(2 SINR), sqrt(-2 ln p_fa)) for the square-law detector.
/// p_fa must lie in (0, 1).
double detection_probability(double sinr_linear, double p_fa);

}  // namespace dfrc

#endif
