#include "dfrc/comm.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace dfrc {

namespace {

constexpr double kLog2e = 1.4426950408889634;  // 1/ln(2)

double log2_abs_det(const Eigen::MatrixXcd& a) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  double acc = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    acc += std::log(std::abs(lu.matrixLU()(i, i)));
  return acc * kLog2e;
}

}  // namespace

double spectral_efficiency_subpulse(const Eigen::MatrixXcd& h,
                                    const Eigen::MatrixXcd& x,
                                    const Eigen::MatrixXcd& u,
                                    double sigma_c2) {
  const int n_rx = static_cast<int>(h.rows());
  const Eigen::MatrixXcd c = sigma_c2 * u.adjoint() * u;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(c);
  if (!lu.isInvertible())
    throw std::invalid_argument(
        "rank-deficient combiner: C_l = sigma_c^2 U^H U is singular");
  const Eigen::MatrixXcd hx = h * x;
  const Eigen::MatrixXcd m =
      Eigen::MatrixXcd::Identity(n_rx, n_rx) +
      u * lu.solve(u.adjoint() * hx * hx.adjoint());
  return std::max(0.0, log2_abs_det(m));
}

std::vector<double> spectral_efficiency(const Eigen::MatrixXcd& h,
                                        const MatrixStack& x,
                                        const MatrixStack& u, double sigma_c2) {
  if (x.size() != u.size())
    throw std::invalid_argument("precoder/combiner stack lengths differ");
  std::vector<double> rates(x.size());
  for (size_t l = 0; l < x.size(); ++l)
    rates[l] = spectral_efficiency_subpulse(h, x[l], u[l], sigma_c2);
  return rates;
}

double sum_rate(const Eigen::MatrixXcd& h, const MatrixStack& x,
                const MatrixStack& u, double sigma_c2) {
  double acc = 0.0;
  for (double r : spectral_efficiency(h, x, u, sigma_c2)) acc += r;
  return acc;
}

double mmse_spectral_efficiency(const Eigen::MatrixXcd& h,
                                const Eigen::MatrixXcd& x, double sigma_c2) {
  const Eigen::MatrixXcd hx = h * x;
  const int n = static_cast<int>(hx.cols());
  const Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n) +
                             hx.adjoint() * hx / sigma_c2;
  return std::max(0.0, log2_abs_det(m));
}

Eigen::MatrixXcd mse_matrix(const Eigen::MatrixXcd& h,
                            const Eigen::MatrixXcd& x,
                            const Eigen::MatrixXcd& u, double sigma_c2) {
  const int n_s = static_cast<int>(x.cols());
  const Eigen::MatrixXcd d =
      Eigen::MatrixXcd::Identity(n_s, n_s) - u.adjoint() * h * x;
  return d * d.adjoint() + sigma_c2 * u.adjoint() * u;
}

Eigen::MatrixXcd update_combiner(const Eigen::MatrixXcd& h,
                                 const Eigen::MatrixXcd& x, double sigma_c2) {
  const int n_rx = static_cast<int>(h.rows());
  const Eigen::MatrixXcd hx = h * x;
  const Eigen::MatrixXcd a =
      hx * hx.adjoint() + sigma_c2 * Eigen::MatrixXcd::Identity(n_rx, n_rx);
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(a);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw std::runtime_error("combiner update: H X X^H H^H + sigma^2 I singular");
  return ldlt.solve(hx);
}

Eigen::MatrixXcd update_weight(const Eigen::MatrixXcd& h,
                               const Eigen::MatrixXcd& x,
                               const Eigen::MatrixXcd& u) {
  const int n_s = static_cast<int>(x.cols());
  Eigen::MatrixXcd a =
      Eigen::MatrixXcd::Identity(n_s, n_s) - x.adjoint() * h.adjoint() * u;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(n_s - 1);
  if (smin <= 0.0)
    throw std::runtime_error(
        "weight update: I - X^H H^H U singular (combiner is not MMSE)");
  if (smax / smin > 1e12) {
    std::cerr << "dfrc: ill-conditioned weight system, regularizing\n";
    a += 1e-12 * Eigen::MatrixXcd::Identity(n_s, n_s);
  }
  return a.inverse();
}

std::vector<double> mu_miso_rates(const std::vector<Eigen::VectorXcd>& channels,
                                  const Eigen::VectorXd& noise_vars,
                                  const Eigen::MatrixXcd& x) {
  const int n_users = static_cast<int>(channels.size());
  std::vector<double> rates(n_users);
  for (int n = 0; n < n_users; ++n) {
    const Eigen::VectorXcd g = x.adjoint() * channels[n];  // g(i) = x_i^H h_n
    double interference = 0.0;
    for (int i = 0; i < x.cols(); ++i)
      if (i != n) interference += std::norm(g(i));
    rates[n] = std::log2(1.0 + std::norm(g(n)) / (noise_vars(n) + interference));
  }
  return rates;
}

cplx mu_miso_update_u(const Eigen::VectorXcd& h, const Eigen::MatrixXcd& x,
                      int user, double sigma_n2) {
  const Eigen::VectorXcd g = x.adjoint() * h;
  return g(user) / (g.squaredNorm() + sigma_n2);
}

double mu_miso_mse(const Eigen::VectorXcd& h, const Eigen::MatrixXcd& x,
                   int user, cplx u, double sigma_n2) {
  const Eigen::VectorXcd g = x.adjoint() * h;  // g(i) = x_i^H h
  double e = std::norm(u * std::conj(g(user)) - 1.0);
  for (int i = 0; i < x.cols(); ++i)
    if (i != user) e += std::norm(u * std::conj(g(i)));
  return e + sigma_n2 * std::norm(u);
}

double mu_miso_update_w(const Eigen::VectorXcd& h, const Eigen::MatrixXcd& x,
                        int user, double sigma_n2) {
  const cplx u = mu_miso_update_u(h, x, user, sigma_n2);
  return 1.0 / mu_miso_mse(h, x, user, u, sigma_n2);
}

}  // namespace dfrc
