#include "dfrc/solvers.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dfrc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

HermEig herm_eig(const Eigen::MatrixXcd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("Hermitian eigendecomposition failed");
  return HermEig{es.eigenvectors(), es.eigenvalues()};
}

Eigen::VectorXcd update_radar_filter(const SinrKernelsV& k, double sigma_r2) {
  if (!k.theta_t.allFinite() || !k.theta_c.allFinite())
    throw std::invalid_argument("non-finite SINR kernels");
  const int dim = static_cast<int>(k.theta_t.rows());
  const Eigen::MatrixXcd b =
      k.theta_c + sigma_r2 * Eigen::MatrixXcd::Identity(dim, dim);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> es(k.theta_t, b);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("generalized eigendecomposition failed");
  Eigen::VectorXcd v = es.eigenvectors().col(dim - 1);  // largest quotient
  return v / v.norm();
}

double energy_kkt_power(const std::vector<HermEig>& xi_eig,
                        const MatrixStack& psi, double mu) {
  double power = 0.0;
  for (size_t l = 0; l < psi.size(); ++l) {
    const Eigen::MatrixXcd psi_t = xi_eig[l].q.adjoint() * psi[l];
    for (int n = 0; n < psi_t.rows(); ++n) {
      const double d = xi_eig[l].lam(n) + mu;
      power += psi_t.row(n).squaredNorm() / (d * d);
    }
  }
  return power;
}

StackUpdate solve_energy_kkt(const std::vector<HermEig>& xi_eig,
                             const MatrixStack& psi, double energy) {
  const size_t n_sub = psi.size();
  std::vector<Eigen::MatrixXcd> psi_t(n_sub);
  double psi_norm2 = 0.0;
  for (size_t l = 0; l < n_sub; ++l) {
    psi_t[l] = xi_eig[l].q.adjoint() * psi[l];
    psi_norm2 += psi_t[l].squaredNorm();
  }
  auto power_at = [&](double mu) {
    double p = 0.0;
    for (size_t l = 0; l < n_sub; ++l)
      for (int n = 0; n < psi_t[l].rows(); ++n) {
        const double d = xi_eig[l].lam(n) + mu;
        p += psi_t[l].row(n).squaredNorm() / (d * d);
      }
    return p;
  };
  auto assemble = [&](double mu) {
    MatrixStack x(n_sub);
    for (size_t l = 0; l < n_sub; ++l) {
      Eigen::MatrixXcd scaled = psi_t[l];
      for (int n = 0; n < scaled.rows(); ++n)
        scaled.row(n) /= xi_eig[l].lam(n) + mu;
      x[l] = xi_eig[l].q * scaled;
    }
    return x;
  };

  double mu = 0.0;
  if (power_at(0.0) > energy) {
    // power(mu_hi) <= |Psi|^2 / mu_hi^2 = energy, so [0, mu_hi] brackets.
    double lo = 0.0, hi = std::sqrt(psi_norm2 / energy);
    while (power_at(hi) > energy) {  // paranoia against round-off at the cap
      lo = hi;
      hi *= 2.0;
    }
    for (int it = 0; it < 200; ++it) {
      mu = 0.5 * (lo + hi);
      const double p = power_at(mu);
      if (std::abs(p - energy) <= 1e-9 * energy && it > 40) break;
      (p > energy ? lo : hi) = mu;
      if (hi - lo <= 1e-16 * std::max(1.0, hi)) break;
    }
  }
  return StackUpdate{assemble(mu), mu};
}

StackUpdate update_x_su(const AdmmState& st, const Eigen::MatrixXcd& h,
                        double energy) {
  const size_t n_sub = st.x.size();
  const int n_tx = static_cast<int>(h.cols());
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n_tx, n_tx);
  const int n_rf = static_cast<int>(st.f_d.front().rows());
  const Eigen::MatrixXcd f_rf = st.f_set.materialize(n_rf);
  std::vector<HermEig> xi_eig(n_sub);
  MatrixStack psi(n_sub);
  for (size_t l = 0; l < n_sub; ++l) {
    const Eigen::MatrixXcd hu = h.adjoint() * st.u[l];  // N_Tx x N_s
    const Eigen::MatrixXcd xi =
        hu * st.w[l] * hu.adjoint() + 0.5 * (st.rho1 + st.rho2) * id;
    xi_eig[l] = herm_eig(0.5 * (xi + xi.adjoint()));
    psi[l] = hu * st.w[l] - 0.5 * (st.d1[l] + st.d2[l]) +
             0.5 * st.rho1 * f_rf * st.f_d[l] + 0.5 * st.rho2 * st.z[l];
  }
  return solve_energy_kkt(xi_eig, psi, energy);
}

StackUpdate update_x_mu_miso(const AdmmState& st,
                             const std::vector<Eigen::VectorXcd>& channels,
                             const Eigen::VectorXd& priorities,
                             const Eigen::VectorXd& noise_vars, double energy) {
  (void)noise_vars;
  const size_t n_sub = st.x.size();
  const int n_users = static_cast<int>(channels.size());
  const int n_tx = static_cast<int>(channels.front().size());
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n_tx, n_tx);
  const int n_rf = static_cast<int>(st.f_d.front().rows());
  const Eigen::MatrixXcd f_rf = st.f_set.materialize(n_rf);
  std::vector<HermEig> xi_eig(n_sub);
  MatrixStack psi(n_sub);
  for (size_t l = 0; l < n_sub; ++l) {
    Eigen::MatrixXcd xi = 0.5 * (st.rho1 + st.rho2) * id;
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n_tx, n_users);
    for (int n = 0; n < n_users; ++n) {
      const double bw = priorities(n) * st.w_mu[l][n];
      xi += bw * std::norm(st.u_mu[l][n]) * channels[n] * channels[n].adjoint();
      p.col(n) += bw * std::conj(st.u_mu[l][n]) * channels[n];
    }
    p += -0.5 * (st.d1[l] + st.d2[l]) + 0.5 * st.rho1 * f_rf * st.f_d[l] +
         0.5 * st.rho2 * st.z[l];
    xi_eig[l] = herm_eig(0.5 * (xi + xi.adjoint()));
    psi[l] = p;
  }
  return solve_energy_kkt(xi_eig, psi, energy);
}

StackUpdate update_x_fully_digital(const AdmmState& st,
                                   const Eigen::MatrixXcd& h, double energy) {
  const size_t n_sub = st.x.size();
  const int n_tx = static_cast<int>(h.cols());
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n_tx, n_tx);
  std::vector<HermEig> xi_eig(n_sub);
  MatrixStack psi(n_sub);
  for (size_t l = 0; l < n_sub; ++l) {
    const Eigen::MatrixXcd hu = h.adjoint() * st.u[l];
    const Eigen::MatrixXcd xi =
        hu * st.w[l] * hu.adjoint() + 0.5 * st.rho2 * id;
    xi_eig[l] = herm_eig(0.5 * (xi + xi.adjoint()));
    psi[l] = hu * st.w[l] - 0.5 * st.d2[l] + 0.5 * st.rho2 * st.z[l];
  }
  return solve_energy_kkt(xi_eig, psi, energy);
}

StackUpdate update_x_fully_digital_mu(
    const AdmmState& st, const std::vector<Eigen::VectorXcd>& channels,
    const Eigen::VectorXd& priorities, const Eigen::VectorXd& noise_vars,
    double energy) {
  (void)noise_vars;
  const size_t n_sub = st.x.size();
  const int n_users = static_cast<int>(channels.size());
  const int n_tx = static_cast<int>(channels.front().size());
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n_tx, n_tx);
  std::vector<HermEig> xi_eig(n_sub);
  MatrixStack psi(n_sub);
  for (size_t l = 0; l < n_sub; ++l) {
    Eigen::MatrixXcd xi = 0.5 * st.rho2 * id;
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n_tx, n_users);
    for (int n = 0; n < n_users; ++n) {
      const double bw = priorities(n) * st.w_mu[l][n];
      xi += bw * std::norm(st.u_mu[l][n]) * channels[n] * channels[n].adjoint();
      p.col(n) += bw * std::conj(st.u_mu[l][n]) * channels[n];
    }
    p += -0.5 * st.d2[l] + 0.5 * st.rho2 * st.z[l];
    xi_eig[l] = herm_eig(0.5 * (xi + xi.adjoint()));
    psi[l] = p;
  }
  return solve_energy_kkt(xi_eig, psi, energy);
}

double sinr_constraint_value(const MatrixStack& z,
                             const std::vector<HermEig>& m_eig) {
  double acc = 0.0;
  for (size_t l = 0; l < z.size(); ++l) {
    const Eigen::MatrixXcd zt = m_eig[l].q.adjoint() * z[l];
    for (int n = 0; n < zt.rows(); ++n)
      acc += m_eig[l].lam(n) * zt.row(n).squaredNorm();
  }
  return acc;
}

StackUpdate update_z(const MatrixStack& x, const MatrixStack& d2, double rho2,
                     const std::vector<HermEig>& m_eig, double alpha) {
  const size_t n_sub = x.size();
  MatrixStack unconstrained(n_sub);
  for (size_t l = 0; l < n_sub; ++l) unconstrained[l] = x[l] + d2[l] / rho2;
  if (sinr_constraint_value(unconstrained, m_eig) >= alpha)
    return StackUpdate{std::move(unconstrained), 0.0};

  // gamma_t holds Q^H (D2/2 + rho2 X / 2); Z(nu) scales its rows by
  // 1/(rho2/2 - nu lambda_n).
  std::vector<Eigen::MatrixXcd> gamma_t(n_sub);
  for (size_t l = 0; l < n_sub; ++l)
    gamma_t[l] = m_eig[l].q.adjoint() * (0.5 * d2[l] + 0.5 * rho2 * x[l]);

  double lam_max_pos = 0.0;
  for (const auto& e : m_eig)
    lam_max_pos = std::max(lam_max_pos, e.lam.maxCoeff());
  const double nu_max =
      lam_max_pos > 0.0 ? rho2 / (2.0 * lam_max_pos) : kInf;

  auto constraint_at = [&](double nu) {
    double g = 0.0;
    for (size_t l = 0; l < n_sub; ++l)
      for (int n = 0; n < gamma_t[l].rows(); ++n) {
        const double d = 0.5 * rho2 - nu * m_eig[l].lam(n);
        g += m_eig[l].lam(n) * gamma_t[l].row(n).squaredNorm() / (d * d);
      }
    return g - alpha;
  };
  auto slope_at = [&](double nu) {
    double s = 0.0;
    for (size_t l = 0; l < n_sub; ++l)
      for (int n = 0; n < gamma_t[l].rows(); ++n) {
        const double lam = m_eig[l].lam(n);
        const double d = 0.5 * rho2 - nu * lam;
        s += 2.0 * lam * lam * gamma_t[l].row(n).squaredNorm() / (d * d * d);
      }
    return s;
  };

  // bracket: g(0) < 0 here; expand hi toward nu_max until g(hi) > 0
  double lo = 0.0, hi;
  bool bracketed = false;
  if (std::isfinite(nu_max)) {
    double margin = 0.5;
    for (int it = 0; it < 200; ++it) {
      hi = nu_max * (1.0 - margin);
      if (hi > lo && constraint_at(hi) > 0.0) {
        bracketed = true;
        break;
      }
      if (hi > lo) lo = hi;
      margin *= 0.5;
    }
  } else {
    // all M[l,l] NSD: the constraint value is nonpositive for every Z
    bracketed = false;
  }
  if (!bracketed)
    throw InfeasibleError(
        "radar SINR constraint unreachable for current filter/kernels");

  // safeguarded Newton; g is increasing on (0, nu_max)
  double nu = 0.5 * (lo + hi);
  const double tol = 1e-8 * std::max(alpha, 1.0);
  for (int it = 0; it < 300; ++it) {
    const double g = constraint_at(nu);
    if (std::abs(g) <= tol) break;
    (g < 0.0 ? lo : hi) = nu;
    const double dg = slope_at(nu);
    double next = std::abs(dg) > 1e-14 ? nu - g / dg : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    nu = next;
    if (hi - lo <= 1e-16 * std::max(1.0, hi)) break;
  }

  MatrixStack z(n_sub);
  for (size_t l = 0; l < n_sub; ++l) {
    Eigen::MatrixXcd scaled = gamma_t[l];
    for (int n = 0; n < scaled.rows(); ++n)
      scaled.row(n) /= 0.5 * rho2 - nu * m_eig[l].lam(n);
    z[l] = m_eig[l].q * scaled;
  }
  return StackUpdate{std::move(z), nu};
}

MatrixStack update_fd(const DpsAnalogPrecoder& f_set, const MatrixStack& x,
                      const MatrixStack& d1, double rho1,
                      const SystemConfig& cfg) {
  const int m_sub = cfg.subarray_size();
  Eigen::VectorXd subarray_power = Eigen::VectorXd::Zero(cfg.n_rf);
  for (int m = 0; m < cfg.n_tx; ++m)
    subarray_power(m / m_sub) += f_set.amplitudes(m) * f_set.amplitudes(m);
  for (int r = 0; r < cfg.n_rf; ++r)
    if (subarray_power(r) <= 0.0)
      throw std::runtime_error("all-zero analog amplitudes in subarray " +
                               std::to_string(r));
  const Eigen::VectorXcd f = f_set.gains();
  MatrixStack out(x.size());
  for (size_t l = 0; l < x.size(); ++l) {
    const Eigen::MatrixXcd target = d1[l] / rho1 + x[l];
    Eigen::MatrixXcd fd =
        Eigen::MatrixXcd::Zero(cfg.n_rf, target.cols());
    for (int m = 0; m < cfg.n_tx; ++m)
      fd.row(m / m_sub) += std::conj(f(m)) * target.row(m);
    for (int r = 0; r < cfg.n_rf; ++r) fd.row(r) /= subarray_power(r);
    out[l] = std::move(fd);
  }
  return out;
}

DpsAnalogPrecoder update_fset(const MatrixStack& x, const MatrixStack& f_d,
                              const MatrixStack& d1, double rho1,
                              const SystemConfig& cfg) {
  const int m_sub = cfg.subarray_size();
  const double a_cap = 2.0 / std::sqrt(static_cast<double>(cfg.n_tx));
  DpsAnalogPrecoder out;
  out.amplitudes = Eigen::VectorXd::Zero(cfg.n_tx);
  out.phases = Eigen::VectorXd::Zero(cfg.n_tx);
  for (int m = 0; m < cfg.n_tx; ++m) {
    cplx corr(0.0);
    double power = 0.0;
    const int r = m / m_sub;
    for (size_t l = 0; l < x.size(); ++l) {
      const auto y_row = f_d[l].row(r);  // (P F_D)[m,:]
      const Eigen::MatrixXcd pi_row = x[l].row(m) + d1[l].row(m) / rho1;
      corr += (pi_row * y_row.adjoint()).value();
      power += y_row.squaredNorm();
    }
    if (power <= 0.0 || corr == cplx(0.0)) continue;  // A = 0, phi = 0
    out.phases(m) = std::arg(corr);
    if (out.phases(m) < 0.0) out.phases(m) += 2.0 * std::numbers::pi;
    out.amplitudes(m) = std::min(std::abs(corr) / power, a_cap);
  }
  return out;
}

std::pair<double, double> dps_phase_split(double amplitude, double phase,
                                          int n_tx) {
  const double a_cap = 2.0 / std::sqrt(static_cast<double>(n_tx));
  if (amplitude < 0.0 || amplitude > a_cap + 1e-12)
    throw std::invalid_argument("amplitude out of DPS range");
  const double arg = std::acos(std::min(1.0, amplitude / a_cap));
  return {phase + arg, phase - arg};
}

void materialize_split_phases(DpsAnalogPrecoder& f, int n_tx) {
  f.psi1.resize(n_tx);
  f.psi2.resize(n_tx);
  for (int m = 0; m < n_tx; ++m) {
    auto [p1, p2] = dps_phase_split(f.amplitudes(m), f.phases(m), n_tx);
    f.psi1(m) = p1;
    f.psi2(m) = p2;
  }
}

void update_duals(AdmmState& st, const SystemConfig& cfg, bool with_analog) {
  if (with_analog) {
    const Eigen::MatrixXcd f_rf = st.f_set.materialize(cfg.n_rf);
    for (size_t l = 0; l < st.x.size(); ++l)
      st.d1[l] += st.rho1 * (st.x[l] - f_rf * st.f_d[l]);
  }
  for (size_t l = 0; l < st.x.size(); ++l)
    st.d2[l] += st.rho2 * (st.x[l] - st.z[l]);
}

DpsAnalogPrecoder sps_project(const DpsAnalogPrecoder& f, int n_tx) {
  DpsAnalogPrecoder out = f;
  out.amplitudes.setConstant(n_tx, 1.0 / std::sqrt(static_cast<double>(n_tx)));
  out.psi1.resize(0);
  out.psi2.resize(0);
  return out;
}

}  // namespace dfrc
