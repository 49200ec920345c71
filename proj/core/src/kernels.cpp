#include "dfrc/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dfrc {

namespace {

void hermitianize(Eigen::MatrixXcd& a) {
  a = 0.5 * (a + a.adjoint()).eval();
}

void check_precoders(const PrecoderStack& precoders, const RadarScene& scene,
                     const SystemConfig& cfg) {
  if (static_cast<int>(precoders.size()) != scene.n_subpulses)
    throw std::invalid_argument("precoder stack length must equal n_subpulses");
  for (const auto& f : precoders)
    if (f.rows() != cfg.n_tx)
      throw std::invalid_argument("precoder row count must equal n_tx");
}

// Adds the Theta contribution of one scatterer. The Gamma_ij blocks are
// nonzero only at (i+l-1, j+l-1), so the build walks (i, j, l) and adds the
// small N_Rad x N_Rad outer products instead of forming dense intermediates.
void accumulate_theta(Eigen::MatrixXcd& out, const ExtendedScattererStats& s,
                      const PrecoderStack& precoders, const SystemConfig& cfg) {
  const int n_rad = cfg.n_rad;
  const int len = s.fir_length();
  const int n_sub = static_cast<int>(precoders.size());
  const Eigen::MatrixXcd h = spatial_steering_matrix(s.angle, cfg);
  std::vector<Eigen::MatrixXcd> a(n_sub);
  for (int l = 0; l < n_sub; ++l) {
    const Eigen::MatrixXcd g = h * precoders[l];
    a[l] = g * g.adjoint();
  }
  for (int i = 0; i < len; ++i) {
    for (int j = 0; j < len; ++j) {
      const cplx sig = s.covariance(i, j);
      if (sig == cplx(0.0)) continue;
      for (int l = 0; l < n_sub; ++l)
        out.block((i + l) * n_rad, (j + l) * n_rad, n_rad, n_rad) += sig * a[l];
    }
  }
}

// Diagonal Phi blocks of one scatterer: Phi[l,l] = H^H W_l Sigma^T W_l^H H
// with W_l the length-len window of filter columns starting at l. The
// transpose keeps Tr{F^H Phi F} equal to the filter-form quadratic; it is a
// no-op for the real-valued exponential tap covariances.
void accumulate_phi(MatrixStack& out, const ExtendedScattererStats& s,
                    const Eigen::MatrixXcd& filter, const SystemConfig& cfg,
                    int n_sub) {
  const int len = s.fir_length();
  const Eigen::MatrixXcd h = spatial_steering_matrix(s.angle, cfg);
  for (int l = 0; l < n_sub; ++l) {
    const Eigen::MatrixXcd w = filter.middleCols(l, len);
    const Eigen::MatrixXcd g = w.adjoint() * h;  // len x n_tx
    out[l] += g.adjoint() * s.covariance.transpose() * g;
  }
}

}  // namespace

RadarFilter RadarFilter::from_vector(const Eigen::VectorXcd& v, int n_rad,
                                     int l_obs) {
  if (v.size() != static_cast<Eigen::Index>(n_rad) * l_obs)
    throw std::invalid_argument("filter vector length mismatch");
  RadarFilter f;
  f.matrix = Eigen::Map<const Eigen::MatrixXcd>(v.data(), n_rad, l_obs);
  return f;
}

SinrKernelsV build_theta_kernels(const PrecoderStack& precoders,
                                 const RadarScene& scene,
                                 const SystemConfig& cfg) {
  check_precoders(precoders, scene, cfg);
  const int dim = cfg.n_rad * scene.l_obs();
  SinrKernelsV k;
  k.theta_t = Eigen::MatrixXcd::Zero(dim, dim);
  k.theta_c = Eigen::MatrixXcd::Zero(dim, dim);
  accumulate_theta(k.theta_t, scene.target, precoders, cfg);
  for (const auto& bin : scene.clutter)
    accumulate_theta(k.theta_c, bin, precoders, cfg);
  hermitianize(k.theta_t);
  hermitianize(k.theta_c);
  return k;
}

SinrKernelsF build_phi_kernels(const RadarFilter& filter,
                               const RadarScene& scene,
                               const SystemConfig& cfg) {
  if (filter.matrix.rows() != cfg.n_rad ||
      filter.matrix.cols() != scene.l_obs())
    throw std::invalid_argument("filter dimensions must be n_rad x l_obs");
  const int n_sub = scene.n_subpulses;
  SinrKernelsF k;
  k.phi_t.assign(n_sub, Eigen::MatrixXcd::Zero(cfg.n_tx, cfg.n_tx));
  k.phi_c.assign(n_sub, Eigen::MatrixXcd::Zero(cfg.n_tx, cfg.n_tx));
  accumulate_phi(k.phi_t, scene.target, filter.matrix, cfg, n_sub);
  for (const auto& bin : scene.clutter)
    accumulate_phi(k.phi_c, bin, filter.matrix, cfg, n_sub);
  for (auto& m : k.phi_t) hermitianize(m);
  for (auto& m : k.phi_c) hermitianize(m);
  return k;
}

double sinr_filter_form(const Eigen::VectorXcd& v, const SinrKernelsV& k,
                        double sigma_r2) {
  const double vv = v.squaredNorm();
  if (vv == 0.0) throw std::invalid_argument("filter vector must be nonzero");
  const double num = (v.adjoint() * k.theta_t * v).value().real();
  const double den = (v.adjoint() * k.theta_c * v).value().real() + sigma_r2 * vv;
  return num / den;
}

double sinr_precoder_form(const PrecoderStack& precoders,
                          const SinrKernelsF& k, double sigma_r2,
                          const Eigen::VectorXcd& v) {
  const double vv = v.squaredNorm();
  if (vv == 0.0) throw std::invalid_argument("filter vector must be nonzero");
  double num = 0.0, clut = 0.0;
  for (size_t l = 0; l < precoders.size(); ++l) {
    const Eigen::MatrixXcd& f = precoders[l];
    num += (f.adjoint() * k.phi_t[l] * f).trace().real();
    clut += (f.adjoint() * k.phi_c[l] * f).trace().real();
  }
  return num / (clut + sigma_r2 * vv);
}

McEstimate monte_carlo_sinr(const PrecoderStack& precoders,
                            const RadarFilter& filter, const RadarScene& scene,
                            const SystemConfig& cfg, int n_draws, Rng& rng,
                            const McOptions& opts) {
  check_precoders(precoders, scene, cfg);
  if (n_draws < 100) throw std::invalid_argument("n_draws must be >= 100");
  const int n_sub = scene.n_subpulses;
  const int l_obs = scene.l_obs();
  const int n_s = static_cast<int>(precoders.front().cols());

  // PSD square roots of the tap covariances (eigenvalues clamped at zero).
  auto cov_sqrt = [](const Eigen::MatrixXcd& sigma) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sigma);
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return Eigen::MatrixXcd(es.eigenvectors() * lam.asDiagonal());
  };
  const Eigen::MatrixXcd target_sqrt = cov_sqrt(scene.target.covariance);
  std::vector<Eigen::MatrixXcd> clutter_sqrt, clutter_h;
  for (const auto& bin : scene.clutter) {
    clutter_sqrt.push_back(cov_sqrt(bin.covariance));
    clutter_h.push_back(spatial_steering_matrix(bin.angle, cfg));
  }
  const Eigen::MatrixXcd target_h =
      spatial_steering_matrix(scene.target.angle, cfg);

  Eigen::VectorXcd doppler = Eigen::VectorXcd::Ones(l_obs);
  if (opts.include_doppler && scene.sample_rate_hz != 0.0) {
    const double step =
        2.0 * std::numbers::pi * scene.doppler_hz / scene.sample_rate_hz;
    for (int n = 0; n < l_obs; ++n) doppler(n) = std::polar(1.0, step * (n + 1));
  }

  // Tr{V^H A} for A with l_obs columns; fir builds the banded T/J product
  // column by column: col n of X*T is sum_k t(k) x[n-k].
  auto filtered_inner = [&](const Eigen::MatrixXcd& spatial,
                            const Eigen::MatrixXcd& x,
                            const Eigen::VectorXcd& fir,
                            bool apply_doppler) -> cplx {
    const Eigen::MatrixXcd y = spatial * x;  // n_rad x n_sub
    cplx acc(0.0);
    for (int n = 0; n < l_obs; ++n) {
      Eigen::VectorXcd col = Eigen::VectorXcd::Zero(cfg.n_rad);
      const int k_lo = std::max(0, n - n_sub + 1);
      const int k_hi = std::min<int>(fir.size() - 1, n);
      for (int k = k_lo; k <= k_hi; ++k) col += fir(k) * y.col(n - k);
      if (apply_doppler) col *= doppler(n);
      acc += filter.matrix.col(n).dot(col);  // v_n^H col
    }
    return acc;
  };

  const double sigma_r2 = cfg.noise_var_radar;
  const double noise_scale = std::sqrt(sigma_r2);
  double sum_num = 0.0, sum_num2 = 0.0;
  double sum_den = 0.0, sum_den2 = 0.0, sum_cross = 0.0;

  Eigen::MatrixXcd x(cfg.n_tx, n_sub);
  for (int d = 0; d < n_draws; ++d) {
    for (int l = 0; l < n_sub; ++l)
      x.col(l) = precoders[l] * rng.complex_normal_vector(n_s);
    const Eigen::VectorXcd t =
        target_sqrt * rng.complex_normal_vector(scene.target.fir_length());
    const double num =
        std::norm(filtered_inner(target_h, x, t, opts.include_doppler));
    sum_num += num;
    sum_num2 += num * num;
    if (opts.numerator_only) continue;

    double den = 0.0;
    for (size_t i = 0; i < scene.clutter.size(); ++i) {
      const Eigen::VectorXcd j =
          clutter_sqrt[i] *
          rng.complex_normal_vector(scene.clutter[i].fir_length());
      den += std::norm(filtered_inner(clutter_h[i], x, j, false));
    }
    cplx noise_inner(0.0);
    for (int n = 0; n < l_obs; ++n)
      noise_inner += filter.matrix.col(n).dot(
          noise_scale * rng.complex_normal_vector(cfg.n_rad));
    den += std::norm(noise_inner);
    sum_den += den;
    sum_den2 += den * den;
    sum_cross += num * den;
  }

  const double n = n_draws;
  McEstimate out;
  if (opts.numerator_only) {
    const double mean = sum_num / n;
    const double var = std::max(0.0, sum_num2 / n - mean * mean);
    out.estimate = mean;
    out.std_error = std::sqrt(var / n);
    return out;
  }
  const double mn = sum_num / n;
  const double md = sum_den / n;
  const double vn = std::max(0.0, sum_num2 / n - mn * mn);
  const double vd = std::max(0.0, sum_den2 / n - md * md);
  const double cv = sum_cross / n - mn * md;
  out.estimate = mn / md;
  // delta method for the variance of a ratio of means
  const double var_ratio =
      (vn / (md * md) + mn * mn * vd / (md * md * md * md) -
       2.0 * mn * cv / (md * md * md)) /
      n;
  out.std_error = std::sqrt(std::max(0.0, var_ratio));
  return out;
}

}  // namespace dfrc
