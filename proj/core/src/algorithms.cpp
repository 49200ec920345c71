#include "dfrc/algorithms.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dfrc/comm.hpp"
#include "dfrc/marcum.hpp"
#include "dfrc/model.hpp"

namespace dfrc {

namespace {

double frob2_diff(const MatrixStack& a, const MatrixStack& b) {
  double acc = 0.0;
  for (size_t l = 0; l < a.size(); ++l) acc += (a[l] - b[l]).squaredNorm();
  return acc;
}

double real_inner(const MatrixStack& d, const MatrixStack& a,
                  const MatrixStack& b) {
  double acc = 0.0;
  for (size_t l = 0; l < d.size(); ++l)
    acc += (d[l].adjoint() * (a[l] - b[l])).trace().real();
  return acc;
}

double penalty_terms(const AdmmState& st, const SystemConfig& cfg, bool analog) {
  double acc = 0.0;
  if (analog) {
    const Eigen::MatrixXcd f_rf = st.f_set.materialize(cfg.n_rf);
    MatrixStack f(st.x.size());
    for (size_t l = 0; l < st.x.size(); ++l) f[l] = f_rf * st.f_d[l];
    acc += real_inner(st.d1, st.x, f) + 0.5 * st.rho1 * frob2_diff(st.x, f);
  }
  acc += real_inner(st.d2, st.x, st.z) + 0.5 * st.rho2 * frob2_diff(st.x, st.z);
  return acc;
}

double log_abs_det(const Eigen::MatrixXcd& a) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  double acc = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    acc += std::log(std::abs(lu.matrixLU()(i, i)));
  return acc;
}

double to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace

AdmmState init_admm_state(const SystemConfig& cfg, int n_cols, Rng& rng,
                          double rho1, double rho2) {
  AdmmState st;
  st.rho1 = rho1;
  st.rho2 = rho2;
  st.f_set.amplitudes = Eigen::VectorXd::Constant(
      cfg.n_tx, 1.0 / std::sqrt(static_cast<double>(cfg.n_tx)));
  st.f_set.phases.resize(cfg.n_tx);
  for (int m = 0; m < cfg.n_tx; ++m)
    st.f_set.phases(m) = rng.uniform(0.0, 2.0 * std::numbers::pi);

  const int l_sub = cfg.n_subpulses;
  st.f_d.resize(l_sub);
  for (int l = 0; l < l_sub; ++l)
    st.f_d[l] = rng.complex_normal_matrix(cfg.n_rf, n_cols);

  const Eigen::MatrixXcd f_rf = st.f_set.materialize(cfg.n_rf);
  double power = 0.0;
  for (int l = 0; l < l_sub; ++l) power += (f_rf * st.f_d[l]).squaredNorm();
  const double scale = std::sqrt(cfg.energy_budget / power);
  for (auto& fd : st.f_d) fd *= scale;

  st.x.resize(l_sub);
  st.z.resize(l_sub);
  st.d1.resize(l_sub);
  st.d2.resize(l_sub);
  for (int l = 0; l < l_sub; ++l) {
    st.x[l] = f_rf * st.f_d[l];
    st.z[l] = st.x[l];
    st.d1[l] = Eigen::MatrixXcd::Zero(cfg.n_tx, n_cols);
    st.d2[l] = Eigen::MatrixXcd::Zero(cfg.n_tx, n_cols);
  }
  st.u.resize(l_sub);
  st.w.resize(l_sub);
  return st;
}

PrecoderStack effective_precoders(const AdmmState& st, const SystemConfig& cfg,
                                  Architecture arch) {
  if (arch == Architecture::fully_digital) return st.x;
  const Eigen::MatrixXcd f_rf = st.f_set.materialize(cfg.n_rf);
  PrecoderStack out(st.f_d.size());
  for (size_t l = 0; l < st.f_d.size(); ++l) out[l] = f_rf * st.f_d[l];
  return out;
}

double augmented_lagrangian_su(const ProblemSU& p, const AdmmState& st,
                               Architecture arch) {
  double obj = 0.0;
  for (size_t l = 0; l < st.x.size(); ++l) {
    const Eigen::MatrixXcd e =
        mse_matrix(p.channel.matrix, st.x[l], st.u[l], p.cfg.noise_var_comm);
    obj += (st.w[l] * e).trace().real() - log_abs_det(st.w[l]);
  }
  return obj + penalty_terms(st, p.cfg, arch != Architecture::fully_digital);
}

double augmented_lagrangian_mu(const ProblemMU& p, const AdmmState& st,
                               Architecture arch) {
  double obj = 0.0;
  const int n_users = static_cast<int>(p.channels.size());
  for (size_t l = 0; l < st.x.size(); ++l)
    for (int n = 0; n < n_users; ++n) {
      const double e = mu_miso_mse(p.channels[n], st.x[l], n, st.u_mu[l][n],
                                   p.noise_vars(n));
      obj += p.priorities(n) *
             (st.w_mu[l][n] * e - std::log(st.w_mu[l][n]));
    }
  return obj + penalty_terms(st, p.cfg, arch != Architecture::fully_digital);
}

namespace {

// Z-update wrapper attaching the iteration index and constraint gap.
MatrixStack checked_update_z(const MatrixStack& x, const AdmmState& st,
                             const std::vector<HermEig>& m_eig, double alpha,
                             int outer_idx, int iter) {
  try {
    return update_z(x, st.d2, st.rho2, m_eig, alpha).value;
  } catch (const InfeasibleError& e) {
    MatrixStack unconstrained(x.size());
    for (size_t l = 0; l < x.size(); ++l)
      unconstrained[l] = x[l] + st.d2[l] / st.rho2;
    const double gap = alpha - sinr_constraint_value(unconstrained, m_eig);
    throw InfeasibleError(std::string(e.what()) + " (outer round " +
                          std::to_string(outer_idx + 1) + ", ADMM iteration " +
                          std::to_string(iter + 1) + ", constraint gap " +
                          std::to_string(gap) + ")");
  }
}

struct Residuals {
  double consensus = 0.0, z = 0.0;
};

// Max over subpulses of the per-subpulse constraint norms, matching the
// per-subpulse scale sqrt(n_tx * n_s) of the stopping tolerance.
Residuals primal_residuals(const AdmmState& st, const SystemConfig& cfg,
                           bool analog) {
  Residuals r;
  if (analog) {
    const Eigen::MatrixXcd f_rf = st.f_set.materialize(cfg.n_rf);
    for (size_t l = 0; l < st.x.size(); ++l)
      r.consensus =
          std::max(r.consensus, (st.x[l] - f_rf * st.f_d[l]).norm());
  }
  for (size_t l = 0; l < st.x.size(); ++l)
    r.z = std::max(r.z, (st.x[l] - st.z[l]).norm());
  return r;
}

// With the duals still zero the F_D / F_set updates reduce to alternating
// least squares on || X - F_RF F_D ||, so a few passes fit the analog
// factorization to the warm-started X before the first ADMM round.
void warm_fit_analog(AdmmState& st, const SystemConfig& cfg,
                     Architecture arch) {
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 30; ++it) {
    st.f_d = update_fd(st.f_set, st.x, st.d1, st.rho1, cfg);
    st.f_set = update_fset(st.x, st.f_d, st.d1, st.rho1, cfg);
    if (arch == Architecture::sps) st.f_set = sps_project(st.f_set, cfg.n_tx);
    const Eigen::MatrixXcd f_rf = st.f_set.materialize(cfg.n_rf);
    double gap = 0.0;
    for (size_t l = 0; l < st.x.size(); ++l)
      gap += (st.x[l] - f_rf * st.f_d[l]).squaredNorm();
    if (prev - gap < 1e-6 * std::max(1.0, gap)) break;
    prev = gap;
  }
  st.f_d = update_fd(st.f_set, st.x, st.d1, st.rho1, cfg);
}

// Communication-only WMMSE sweeps from the random start, then a consistent
// state rebuild (Z = X, analog factorization refit, duals still zero).
// Starting the first ADMM round near the WMMSE fixed point removes the rate
// transient that would otherwise dominate its early residuals.
void warm_start_su(AdmmState& st, const Eigen::MatrixXcd& h,
                   const SystemConfig& cfg, Architecture arch) {
  const bool analog = arch != Architecture::fully_digital;
  const Eigen::MatrixXcd ridge =
      1e-9 * Eigen::MatrixXcd::Identity(cfg.n_tx, cfg.n_tx);
  double prev = -1.0;
  for (int it = 0; it < 50; ++it) {
    std::vector<HermEig> xi(st.x.size());
    MatrixStack psi(st.x.size());
    for (size_t l = 0; l < st.x.size(); ++l) {
      st.u[l] = update_combiner(h, st.x[l], cfg.noise_var_comm);
      st.w[l] = update_weight(h, st.x[l], st.u[l]);
      const Eigen::MatrixXcd hu = h.adjoint() * st.u[l];
      const Eigen::MatrixXcd m = hu * st.w[l] * hu.adjoint() + ridge;
      xi[l] = herm_eig(0.5 * (m + m.adjoint()));
      psi[l] = hu * st.w[l];
    }
    st.x = solve_energy_kkt(xi, psi, cfg.energy_budget).value;
    double se = 0.0;
    for (const auto& x : st.x)
      se += mmse_spectral_efficiency(h, x, cfg.noise_var_comm);
    if (it > 0 && std::abs(se - prev) < 1e-3) break;
    prev = se;
  }
  for (size_t l = 0; l < st.x.size(); ++l) {
    st.u[l] = update_combiner(h, st.x[l], cfg.noise_var_comm);
    st.w[l] = update_weight(h, st.x[l], st.u[l]);
  }
  st.z = st.x;
  if (analog) warm_fit_analog(st, cfg, arch);
}

void warm_start_mu(AdmmState& st, const std::vector<Eigen::VectorXcd>& chans,
                   const Eigen::VectorXd& priorities,
                   const Eigen::VectorXd& noise_vars, const SystemConfig& cfg,
                   Architecture arch) {
  const bool analog = arch != Architecture::fully_digital;
  const int n_users = static_cast<int>(chans.size());
  const Eigen::MatrixXcd ridge =
      1e-9 * Eigen::MatrixXcd::Identity(cfg.n_tx, cfg.n_tx);
  double prev = -1.0;
  for (int it = 0; it < 50; ++it) {
    std::vector<HermEig> xi(st.x.size());
    MatrixStack psi(st.x.size());
    for (size_t l = 0; l < st.x.size(); ++l) {
      Eigen::MatrixXcd m = ridge;
      Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(cfg.n_tx, n_users);
      for (int n = 0; n < n_users; ++n) {
        st.u_mu[l][n] = mu_miso_update_u(chans[n], st.x[l], n, noise_vars(n));
        st.w_mu[l][n] = mu_miso_update_w(chans[n], st.x[l], n, noise_vars(n));
        const double bw = priorities(n) * st.w_mu[l][n];
        m += bw * std::norm(st.u_mu[l][n]) * chans[n] * chans[n].adjoint();
        p.col(n) += bw * std::conj(st.u_mu[l][n]) * chans[n];
      }
      xi[l] = herm_eig(0.5 * (m + m.adjoint()));
      psi[l] = p;
    }
    st.x = solve_energy_kkt(xi, psi, cfg.energy_budget).value;
    double se = 0.0;
    for (const auto& x : st.x)
      for (double r : mu_miso_rates(chans, noise_vars, x)) se += r;
    if (it > 0 && std::abs(se - prev) < 1e-3) break;
    prev = se;
  }
  for (size_t l = 0; l < st.x.size(); ++l)
    for (int n = 0; n < n_users; ++n) {
      st.u_mu[l][n] = mu_miso_update_u(chans[n], st.x[l], n, noise_vars(n));
      st.w_mu[l][n] = mu_miso_update_w(chans[n], st.x[l], n, noise_vars(n));
    }
  st.z = st.x;
  if (analog) warm_fit_analog(st, cfg, arch);
}

}  // namespace

int consensus_admm_su(const ProblemSU& p, const std::vector<HermEig>& m_eig,
                      double alpha, Architecture arch, const AdmmOptions& opts,
                      AdmmState& st, ConvergenceTrace* trace, int outer_idx) {
  const bool analog = arch != Architecture::fully_digital;
  const Eigen::MatrixXcd& h = p.channel.matrix;
  const int n_cols = static_cast<int>(st.x.front().cols());
  const double tol = opts.residual_tol_scale *
                     std::sqrt(static_cast<double>(p.cfg.n_tx) * n_cols);
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    for (size_t l = 0; l < st.x.size(); ++l) {
      st.u[l] = update_combiner(h, st.x[l], p.cfg.noise_var_comm);
      st.w[l] = update_weight(h, st.x[l], st.u[l]);
    }
    st.x = (analog ? update_x_su(st, h, p.cfg.energy_budget)
                   : update_x_fully_digital(st, h, p.cfg.energy_budget))
               .value;
    st.z = checked_update_z(st.x, st, m_eig, alpha, outer_idx, iter);
    if (analog) {
      st.f_d = update_fd(st.f_set, st.x, st.d1, st.rho1, p.cfg);
      st.f_set = update_fset(st.x, st.f_d, st.d1, st.rho1, p.cfg);
      if (arch == Architecture::sps)
        st.f_set = sps_project(st.f_set, p.cfg.n_tx);
    }
    update_duals(st, p.cfg, analog);

    const Residuals r = primal_residuals(st, p.cfg, analog);
    if (trace) {
      // SE of the realisable precoders with fresh MMSE combiners, so the
      // final trace row matches the reported solve result bit for bit.
      double se = 0.0;
      for (const auto& x : effective_precoders(st, p.cfg, arch))
        se += mmse_spectral_efficiency(h, x, p.cfg.noise_var_comm);
      trace->inner.push_back({outer_idx + 1, iter + 1, se,
                              augmented_lagrangian_su(p, st, arch),
                              r.consensus, r.z});
    }
    if (std::max(r.consensus, r.z) <= tol) {
      ++iter;
      break;
    }
  }
  return iter;
}

int consensus_admm_mu(const ProblemMU& p, const std::vector<HermEig>& m_eig,
                      double alpha, Architecture arch, const AdmmOptions& opts,
                      AdmmState& st, ConvergenceTrace* trace, int outer_idx) {
  const bool analog = arch != Architecture::fully_digital;
  const int n_users = static_cast<int>(p.channels.size());
  const double tol = opts.residual_tol_scale *
                     std::sqrt(static_cast<double>(p.cfg.n_tx) * n_users);
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    for (size_t l = 0; l < st.x.size(); ++l)
      for (int n = 0; n < n_users; ++n) {
        st.u_mu[l][n] =
            mu_miso_update_u(p.channels[n], st.x[l], n, p.noise_vars(n));
        st.w_mu[l][n] =
            mu_miso_update_w(p.channels[n], st.x[l], n, p.noise_vars(n));
      }
    st.x = (analog ? update_x_mu_miso(st, p.channels, p.priorities,
                                      p.noise_vars, p.cfg.energy_budget)
                   : update_x_fully_digital_mu(st, p.channels, p.priorities,
                                               p.noise_vars,
                                               p.cfg.energy_budget))
               .value;
    st.z = checked_update_z(st.x, st, m_eig, alpha, outer_idx, iter);
    if (analog) {
      st.f_d = update_fd(st.f_set, st.x, st.d1, st.rho1, p.cfg);
      st.f_set = update_fset(st.x, st.f_d, st.d1, st.rho1, p.cfg);
      if (arch == Architecture::sps)
        st.f_set = sps_project(st.f_set, p.cfg.n_tx);
    }
    update_duals(st, p.cfg, analog);

    const Residuals r = primal_residuals(st, p.cfg, analog);
    if (trace) {
      double se = 0.0;
      for (const auto& x : effective_precoders(st, p.cfg, arch))
        for (double rate : mu_miso_rates(p.channels, p.noise_vars, x))
          se += rate;
      trace->inner.push_back({outer_idx + 1, iter + 1, se,
                              augmented_lagrangian_mu(p, st, arch), r.consensus,
                              r.z});
    }
    if (std::max(r.consensus, r.z) <= tol) {
      ++iter;
      break;
    }
  }
  return iter;
}

namespace {

std::vector<HermEig> constraint_eigs(const SinrKernelsF& k, double gamma) {
  std::vector<HermEig> m_eig(k.phi_t.size());
  for (size_t l = 0; l < k.phi_t.size(); ++l) {
    const Eigen::MatrixXcd m = k.phi_t[l] - gamma * k.phi_c[l];
    m_eig[l] = herm_eig(0.5 * (m + m.adjoint()));
  }
  return m_eig;
}

// The ADMM enforces the SINR constraint on Z; the realised precoder tracks
// it only up to the consensus residual, and the final filter refresh moves
// the constraint kernel slightly. Solving against a raised threshold (1%,
// about 0.04 dB) absorbs both effects so met constraints stay met.
constexpr double kGammaMargin = 1e-2;

void fail_fast_threshold(const std::vector<HermEig>& m_eig, double alpha,
                         double energy) {
  double lam_max = 0.0;
  for (const auto& e : m_eig) lam_max = std::max(lam_max, e.lam.maxCoeff());
  if (energy * lam_max < alpha)
    throw InfeasibleError(
        "radar SINR threshold infeasible for any precoder within the energy "
        "budget (best attainable constraint value " +
        std::to_string(energy * lam_max) + " < " + std::to_string(alpha) +
        ")");
}

// Aligns the warm start with the first round's constraint before any ADMM
// iteration runs. Alternating projections between the SINR set (Z-prox at
// zero duals) and the representable set (least-squares analog fit, product
// rescaled to the energy budget) land X near their intersection, which is
// where the ADMM fixed point lives. Without this the first round spends its
// whole budget walking the digital warm start onto that intersection.
void align_warm_start(AdmmState& st, const std::vector<HermEig>& m_eig,
                      double alpha, const SystemConfig& cfg,
                      Architecture arch) {
  const bool analog = arch != Architecture::fully_digital;
  if (!analog) {
    if (sinr_constraint_value(st.x, m_eig) < alpha)
      st.x = update_z(st.x, st.d2, st.rho2, m_eig, alpha).value;
    st.z = st.x;
    return;
  }
  for (int it = 0; it < 12; ++it) {
    const MatrixStack x_old = st.x;
    if (sinr_constraint_value(st.x, m_eig) < alpha)
      st.x = update_z(st.x, st.d2, st.rho2, m_eig, alpha).value;
    warm_fit_analog(st, cfg, arch);
    const Eigen::MatrixXcd f_rf = st.f_set.materialize(cfg.n_rf);
    double energy = 0.0;
    for (size_t l = 0; l < st.x.size(); ++l)
      energy += (f_rf * st.f_d[l]).squaredNorm();
    const double scale = std::sqrt(cfg.energy_budget / energy);
    for (size_t l = 0; l < st.x.size(); ++l) {
      st.f_d[l] *= scale;
      st.x[l] = f_rf * st.f_d[l];
    }
    if (std::sqrt(frob2_diff(st.x, x_old)) < 1e-6) break;
  }
  st.z = st.x;
}

}  // namespace

SolveResult thereon(const ProblemSU& p, Rng& rng, const SolveOptions& opts) {
  p.cfg.validate();
  if (p.channel.matrix.rows() != p.cfg.n_rx ||
      p.channel.matrix.cols() != p.cfg.n_tx)
    throw std::invalid_argument("channel dimensions do not match the config");
  if (p.gamma <= 0.0)
    throw std::invalid_argument("radar SINR threshold must be positive");

  const double sig_r2 = p.cfg.noise_var_radar;
  AdmmState st = init_admm_state(p.cfg, p.cfg.n_streams, rng, opts.admm.rho1,
                                 opts.admm.rho2);
  warm_start_su(st, p.channel.matrix, p.cfg, opts.arch);

  SolveResult res;
  double se_prev = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXcd v;
  int outer = 0;
  for (; outer < opts.n_outer; ++outer) {
    PrecoderStack f_eff = effective_precoders(st, p.cfg, opts.arch);
    const SinrKernelsV theta = build_theta_kernels(f_eff, p.scene, p.cfg);
    v = update_radar_filter(theta, sig_r2);
    const RadarFilter filt =
        RadarFilter::from_vector(v, p.cfg.n_rad, p.scene.l_obs());
    const SinrKernelsF phi = build_phi_kernels(filt, p.scene, p.cfg);
    const double gamma_eff = p.gamma * (1.0 + kGammaMargin);
    const std::vector<HermEig> m_eig = constraint_eigs(phi, gamma_eff);
    const double alpha = gamma_eff * sig_r2 * v.squaredNorm();
    if (outer == 0) {
      fail_fast_threshold(m_eig, alpha, p.cfg.energy_budget);
      align_warm_start(st, m_eig, alpha, p.cfg, opts.arch);
      for (size_t l = 0; l < st.x.size(); ++l) {
        st.u[l] =
            update_combiner(p.channel.matrix, st.x[l], p.cfg.noise_var_comm);
        st.w[l] = update_weight(p.channel.matrix, st.x[l], st.u[l]);
      }
    }

    res.inner_iters += consensus_admm_su(p, m_eig, alpha, opts.arch, opts.admm,
                                         st, &res.trace, outer);

    f_eff = effective_precoders(st, p.cfg, opts.arch);
    double se = 0.0;
    for (const auto& x : f_eff)
      se += mmse_spectral_efficiency(p.channel.matrix, x, p.cfg.noise_var_comm);
    const double sinr = sinr_precoder_form(f_eff, phi, sig_r2, v);
    res.trace.outer.push_back({outer + 1, se, to_db(sinr)});
    const bool settled = outer > 0 && std::abs(se - se_prev) < opts.se_tol;
    se_prev = se;
    if (settled) {
      ++outer;
      break;
    }
  }
  res.outer_iters = outer;

  res.precoders = effective_precoders(st, p.cfg, opts.arch);
  const SinrKernelsV theta = build_theta_kernels(res.precoders, p.scene, p.cfg);
  v = update_radar_filter(theta, sig_r2);
  res.filter = v;
  res.sinr_linear = sinr_filter_form(v, theta, sig_r2);
  res.sinr_db = to_db(res.sinr_linear);
  res.sum_se = 0.0;
  res.combiners.resize(res.precoders.size());
  for (size_t l = 0; l < res.precoders.size(); ++l) {
    res.combiners[l] = update_combiner(p.channel.matrix, res.precoders[l],
                                       p.cfg.noise_var_comm);
    res.sum_se += mmse_spectral_efficiency(p.channel.matrix, res.precoders[l],
                                           p.cfg.noise_var_comm);
  }
  res.f_set = st.f_set;
  res.f_d = st.f_d;
  if (opts.arch != Architecture::fully_digital)
    materialize_split_phases(res.f_set, p.cfg.n_tx);
  res.feasible = res.sinr_linear >= p.gamma * (1.0 - 1e-6);
  return res;
}

SolveResult thereon_mu_miso(const ProblemMU& p, Rng& rng,
                            const SolveOptions& opts) {
  p.cfg.validate();
  const int n_users = static_cast<int>(p.channels.size());
  if (n_users == 0) throw std::invalid_argument("no user channels given");
  for (const auto& h : p.channels)
    if (h.size() != p.cfg.n_tx)
      throw std::invalid_argument("channel dimensions do not match the config");
  if (p.priorities.size() != n_users || p.noise_vars.size() != n_users)
    throw std::invalid_argument("priorities/noise_vars size mismatch");
  if (p.gamma <= 0.0)
    throw std::invalid_argument("radar SINR threshold must be positive");

  const double sig_r2 = p.cfg.noise_var_radar;
  AdmmState st =
      init_admm_state(p.cfg, n_users, rng, opts.admm.rho1, opts.admm.rho2);
  st.u_mu.assign(st.x.size(), std::vector<cplx>(n_users));
  st.w_mu.assign(st.x.size(), std::vector<double>(n_users));
  warm_start_mu(st, p.channels, p.priorities, p.noise_vars, p.cfg, opts.arch);

  SolveResult res;
  double se_prev = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXcd v;
  int outer = 0;
  for (; outer < opts.n_outer; ++outer) {
    PrecoderStack f_eff = effective_precoders(st, p.cfg, opts.arch);
    const SinrKernelsV theta = build_theta_kernels(f_eff, p.scene, p.cfg);
    v = update_radar_filter(theta, sig_r2);
    const RadarFilter filt =
        RadarFilter::from_vector(v, p.cfg.n_rad, p.scene.l_obs());
    const SinrKernelsF phi = build_phi_kernels(filt, p.scene, p.cfg);
    const double gamma_eff = p.gamma * (1.0 + kGammaMargin);
    const std::vector<HermEig> m_eig = constraint_eigs(phi, gamma_eff);
    const double alpha = gamma_eff * sig_r2 * v.squaredNorm();
    if (outer == 0) {
      fail_fast_threshold(m_eig, alpha, p.cfg.energy_budget);
      align_warm_start(st, m_eig, alpha, p.cfg, opts.arch);
      for (size_t l = 0; l < st.x.size(); ++l)
        for (int n = 0; n < n_users; ++n) {
          st.u_mu[l][n] =
              mu_miso_update_u(p.channels[n], st.x[l], n, p.noise_vars(n));
          st.w_mu[l][n] =
              mu_miso_update_w(p.channels[n], st.x[l], n, p.noise_vars(n));
        }
    }

    res.inner_iters += consensus_admm_mu(p, m_eig, alpha, opts.arch, opts.admm,
                                         st, &res.trace, outer);

    f_eff = effective_precoders(st, p.cfg, opts.arch);
    double se = 0.0;
    for (const auto& x : f_eff)
      for (double rate : mu_miso_rates(p.channels, p.noise_vars, x)) se += rate;
    const double sinr = sinr_precoder_form(f_eff, phi, sig_r2, v);
    res.trace.outer.push_back({outer + 1, se, to_db(sinr)});
    const bool settled = outer > 0 && std::abs(se - se_prev) < opts.se_tol;
    se_prev = se;
    if (settled) {
      ++outer;
      break;
    }
  }
  res.outer_iters = outer;

  res.precoders = effective_precoders(st, p.cfg, opts.arch);
  const SinrKernelsV theta = build_theta_kernels(res.precoders, p.scene, p.cfg);
  v = update_radar_filter(theta, sig_r2);
  res.filter = v;
  res.sinr_linear = sinr_filter_form(v, theta, sig_r2);
  res.sinr_db = to_db(res.sinr_linear);
  res.per_user_se.assign(n_users, 0.0);
  for (const auto& x : res.precoders) {
    const std::vector<double> rates =
        mu_miso_rates(p.channels, p.noise_vars, x);
    for (int n = 0; n < n_users; ++n) res.per_user_se[n] += rates[n];
  }
  res.sum_se = 0.0;
  for (double r : res.per_user_se) res.sum_se += r;
  res.f_set = st.f_set;
  res.f_d = st.f_d;
  if (opts.arch != Architecture::fully_digital)
    materialize_split_phases(res.f_set, p.cfg.n_tx);
  res.feasible = res.sinr_linear >= p.gamma * (1.0 - 1e-6);
  return res;
}

double detection_probability(double sinr_linear, double p_fa) {
  if (!(p_fa > 0.0 && p_fa < 1.0))
    throw std::invalid_argument("p_fa must lie in (0, 1)");
  if (sinr_linear < 0.0)
    throw std::invalid_argument("SINR must be nonnegative");
  return marcum_q1(std::sqrt(2.0 * sinr_linear),
                   std::sqrt(-2.0 * std::log(p_fa)));
}

}  // namespace dfrc
