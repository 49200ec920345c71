#include <doctest.h>

#include "dfrc/kernels.hpp"
#include "helpers.hpp"

using namespace dfrc;
using testutil::random_precoders;
using testutil::random_scene;
using testutil::random_unit_vector;

namespace {

SystemConfig small_cfg(int n_tx = 4, int n_rad = 2, int l = 3) {
  SystemConfig cfg;
  cfg.n_tx = n_tx;
  cfg.n_rf = 2;
  cfg.n_rx = 2;
  cfg.n_rad = n_rad;
  cfg.n_streams = 2;
  cfg.n_subpulses = l;
  cfg.energy_budget = 4.0;
  return cfg;
}

}  // namespace

TEST_CASE("radar filter vectorization round-trips column-major") {
  Rng rng(1);
  RadarFilter f{rng.complex_normal_matrix(3, 5)};
  const RadarFilter back = RadarFilter::from_vector(f.vectorized(), 3, 5);
  CHECK((back.matrix - f.matrix).norm() == 0.0);
  CHECK(f.vectorized()(1) == f.matrix(1, 0));
  CHECK(f.vectorized()(3) == f.matrix(0, 1));
}

TEST_CASE("zero precoders give zero theta kernels") {
  Rng rng(2);
  const SystemConfig cfg = small_cfg();
  const RadarScene scene = random_scene(rng, cfg.n_subpulses, 2, 2, 2);
  PrecoderStack zeros(cfg.n_subpulses,
                      Eigen::MatrixXcd::Zero(cfg.n_tx, cfg.n_streams));
  const SinrKernelsV k = build_theta_kernels(zeros, scene, cfg);
  CHECK(k.theta_t.norm() == 0.0);
  CHECK(k.theta_c.norm() == 0.0);
  const int dim = cfg.n_rad * scene.l_obs();
  CHECK(k.theta_t.rows() == dim);
}

TEST_CASE("clutter-free scene gives exactly zero theta_c") {
  Rng rng(3);
  const SystemConfig cfg = small_cfg();
  const RadarScene scene = random_scene(rng, cfg.n_subpulses, 2, 0, 1);
  const SinrKernelsV k =
      build_theta_kernels(random_precoders(cfg, rng), scene, cfg);
  CHECK(k.theta_c.norm() == 0.0);
  CHECK(k.theta_t.norm() > 0.0);
}

TEST_CASE("theta kernels are Hermitian PSD") {
  Rng rng(4);
  const SystemConfig cfg = small_cfg();
  const RadarScene scene = random_scene(rng, cfg.n_subpulses, 2, 2, 2);
  const SinrKernelsV k =
      build_theta_kernels(random_precoders(cfg, rng), scene, cfg);
  CHECK((k.theta_t - k.theta_t.adjoint()).norm() <
        1e-10 * std::max(1.0, k.theta_t.norm()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k.theta_t);
  CHECK(es.eigenvalues().minCoeff() > -1e-8);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ec(k.theta_c);
  CHECK(ec.eigenvalues().minCoeff() > -1e-8);
}

TEST_CASE("zero filter gives zero phi kernels, single-tap window collapses") {
  Rng rng(5);
  const SystemConfig cfg = small_cfg();
  RadarScene scene = random_scene(rng, cfg.n_subpulses, 1, 0, 1);
  scene.target.covariance = Eigen::MatrixXcd::Identity(1, 1);

  const int l_obs = scene.l_obs();
  const RadarFilter zero{Eigen::MatrixXcd::Zero(cfg.n_rad, l_obs)};
  const SinrKernelsF kz = build_phi_kernels(zero, scene, cfg);
  for (const auto& m : kz.phi_t) CHECK(m.norm() == 0.0);

  const RadarFilter v{rng.complex_normal_matrix(cfg.n_rad, l_obs)};
  const SinrKernelsF k = build_phi_kernels(v, scene, cfg);
  const Eigen::MatrixXcd h_t = spatial_steering_matrix(scene.target.angle, cfg);
  for (int l = 0; l < cfg.n_subpulses; ++l) {
    const Eigen::MatrixXcd want =
        h_t.adjoint() * v.matrix.col(l) * v.matrix.col(l).adjoint() * h_t;
    CHECK((k.phi_t[l] - want).norm() < 1e-10 * want.norm());
  }
}

TEST_CASE("precoder-form quadratic matches filter-form quadratic") {
  Rng rng(6);
  for (int rep = 0; rep < 10; ++rep) {
    Rng sub = rng.substream(rep);
    const SystemConfig cfg = small_cfg();
    const RadarScene scene = random_scene(sub, cfg.n_subpulses, 2, 2, 3);
    const PrecoderStack f = random_precoders(cfg, sub);
    const Eigen::VectorXcd v =
        random_unit_vector(cfg.n_rad * scene.l_obs(), sub);
    const RadarFilter filt =
        RadarFilter::from_vector(v, cfg.n_rad, scene.l_obs());

    const SinrKernelsV kv = build_theta_kernels(f, scene, cfg);
    const SinrKernelsF kf = build_phi_kernels(filt, scene, cfg);

    const double num_v = (v.adjoint() * kv.theta_t * v).value().real();
    const double den_v = (v.adjoint() * kv.theta_c * v).value().real();
    double num_f = 0.0, den_f = 0.0;
    for (int l = 0; l < cfg.n_subpulses; ++l) {
      num_f += (f[l].adjoint() * kf.phi_t[l] * f[l]).trace().real();
      den_f += (f[l].adjoint() * kf.phi_c[l] * f[l]).trace().real();
    }
    CHECK(num_f == doctest::Approx(num_v).epsilon(1e-8));
    CHECK(den_f == doctest::Approx(den_v).epsilon(1e-8));
  }
}

TEST_CASE("sinr filter form trivial values") {
  Rng rng(7);
  const int dim = 6;
  const Eigen::VectorXcd v = random_unit_vector(dim, rng);
  SinrKernelsV k{Eigen::MatrixXcd::Identity(dim, dim),
                 Eigen::MatrixXcd::Identity(dim, dim)};
  CHECK(sinr_filter_form(v, k, 1.0) == doctest::Approx(0.5).epsilon(1e-12));

  SinrKernelsV k2{testutil::random_psd(dim, rng),
                  Eigen::MatrixXcd::Zero(dim, dim)};
  const double want = (v.adjoint() * k2.theta_t * v).value().real();
  CHECK(sinr_filter_form(v, k2, 1.0) == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("sinr precoder form trivial values") {
  Rng rng(8);
  SystemConfig cfg = small_cfg(3, 2, 1);
  SinrKernelsF k;
  k.phi_t = {Eigen::MatrixXcd::Identity(3, 3)};
  k.phi_c = {Eigen::MatrixXcd::Zero(3, 3)};
  const Eigen::VectorXcd v = random_unit_vector(4, rng);
  PrecoderStack zero = {Eigen::MatrixXcd::Zero(3, 2)};
  CHECK(sinr_precoder_form(zero, k, 1.0, v) == 0.0);
  PrecoderStack f = {rng.complex_normal_matrix(3, 2)};
  CHECK(sinr_precoder_form(f, k, 1.0, v) ==
        doctest::Approx(f[0].squaredNorm()).epsilon(1e-10));
}

TEST_CASE("the two SINR forms agree on random instances") {
  Rng rng(9);
  for (int rep = 0; rep < 10; ++rep) {
    Rng sub = rng.substream(rep);
    const SystemConfig cfg = small_cfg();
    const RadarScene scene = random_scene(sub, cfg.n_subpulses, 2, 2, 2);
    const PrecoderStack f = random_precoders(cfg, sub);
    const Eigen::VectorXcd v =
        random_unit_vector(cfg.n_rad * scene.l_obs(), sub);
    const RadarFilter filt =
        RadarFilter::from_vector(v, cfg.n_rad, scene.l_obs());
    const double a =
        sinr_filter_form(v, build_theta_kernels(f, scene, cfg), 0.1);
    const double b =
        sinr_precoder_form(f, build_phi_kernels(filt, scene, cfg), 0.1, v);
    CHECK(std::abs(a - b) <= 1e-8 * a);
  }
}

TEST_CASE("SINR grows with precoder scale in a cluttered scene") {
  Rng rng(10);
  const SystemConfig cfg = small_cfg();
  const RadarScene scene = random_scene(rng, cfg.n_subpulses, 2, 2, 2);
  const PrecoderStack f = random_precoders(cfg, rng);
  const Eigen::VectorXcd v = random_unit_vector(cfg.n_rad * scene.l_obs(), rng);
  double prev = 0.0;
  for (double c : {1.0, 2.0, 4.0}) {
    PrecoderStack scaled = f;
    for (auto& fl : scaled) fl *= c;
    const double s =
        sinr_filter_form(v, build_theta_kernels(scaled, scene, cfg), 0.1);
    CHECK(s > prev);
    prev = s;
  }
}

TEST_CASE("theta kernel is linear in the target covariance") {
  Rng rng(11);
  const SystemConfig cfg = small_cfg();
  RadarScene scene = random_scene(rng, cfg.n_subpulses, 2, 1, 2);
  const PrecoderStack f = random_precoders(cfg, rng);
  const Eigen::VectorXcd v = random_unit_vector(cfg.n_rad * scene.l_obs(), rng);
  const double base =
      (v.adjoint() * build_theta_kernels(f, scene, cfg).theta_t * v)
          .value()
          .real();
  scene.target.covariance *= 2.0;
  const double doubled =
      (v.adjoint() * build_theta_kernels(f, scene, cfg).theta_t * v)
          .value()
          .real();
  CHECK(doubled == doctest::Approx(2.0 * base).epsilon(1e-12));
}

TEST_CASE("monte carlo SINR vanishes when noise dominates") {
  Rng rng(12);
  const SystemConfig cfg = small_cfg();
  const RadarScene scene = random_scene(rng, cfg.n_subpulses, 2, 1, 2);
  const PrecoderStack f = random_precoders(cfg, rng);
  const RadarFilter filt = RadarFilter::from_vector(
      random_unit_vector(cfg.n_rad * scene.l_obs(), rng), cfg.n_rad,
      scene.l_obs());
  SystemConfig noisy = cfg;
  noisy.noise_var_radar = 1e6;
  const McEstimate est = monte_carlo_sinr(f, filt, scene, noisy, 2000, rng);
  CHECK(std::abs(est.estimate) < 1e-3);
}

TEST_CASE("monte carlo SINR matches the closed form without clutter") {
  Rng rng(13);
  const SystemConfig cfg = small_cfg();
  RadarScene scene = random_scene(rng, cfg.n_subpulses, 1, 0, 1);
  const PrecoderStack f = random_precoders(cfg, rng);
  const Eigen::VectorXcd v = random_unit_vector(cfg.n_rad * scene.l_obs(), rng);
  const RadarFilter filt =
      RadarFilter::from_vector(v, cfg.n_rad, scene.l_obs());
  const double want =
      sinr_filter_form(v, build_theta_kernels(f, scene, cfg),
                       cfg.noise_var_radar);
  const McEstimate est = monte_carlo_sinr(f, filt, scene, cfg, 40000, rng);
  CHECK(std::abs(est.estimate - want) <= 3.0 * est.std_error);
}

TEST_CASE("monte carlo SINR brackets the kernel value with clutter") {
  Rng rng(14);
  const SystemConfig cfg = small_cfg();
  const RadarScene scene = random_scene(rng, cfg.n_subpulses, 2, 2, 2);
  const PrecoderStack f = random_precoders(cfg, rng);
  const Eigen::VectorXcd v = random_unit_vector(cfg.n_rad * scene.l_obs(), rng);
  const RadarFilter filt =
      RadarFilter::from_vector(v, cfg.n_rad, scene.l_obs());
  const double want =
      sinr_filter_form(v, build_theta_kernels(f, scene, cfg),
                       cfg.noise_var_radar);
  const McEstimate est = monte_carlo_sinr(f, filt, scene, cfg, 40000, rng);
  CHECK(std::abs(est.estimate - want) <= 3.0 * est.std_error);
}

TEST_CASE("numerator-only monte carlo matches v^H Theta_t v") {
  Rng rng(15);
  SystemConfig cfg = small_cfg();
  cfg.n_subpulses = 3;
  const RadarScene scene = random_scene(rng, cfg.n_subpulses, 2, 0, 1);
  const PrecoderStack f = random_precoders(cfg, rng);
  const Eigen::VectorXcd v = random_unit_vector(cfg.n_rad * scene.l_obs(), rng);
  const RadarFilter filt =
      RadarFilter::from_vector(v, cfg.n_rad, scene.l_obs());
  const double want =
      (v.adjoint() * build_theta_kernels(f, scene, cfg).theta_t * v)
          .value()
          .real();
  McOptions opts;
  opts.numerator_only = true;
  const McEstimate est = monte_carlo_sinr(f, filt, scene, cfg, 40000, rng, opts);
  CHECK(std::abs(est.estimate - want) <= 3.0 * est.std_error);
}

TEST_CASE("monte carlo rejects tiny draw counts") {
  Rng rng(16);
  const SystemConfig cfg = small_cfg();
  const RadarScene scene = random_scene(rng, cfg.n_subpulses, 2, 0, 1);
  const PrecoderStack f = random_precoders(cfg, rng);
  const RadarFilter filt = RadarFilter::from_vector(
      random_unit_vector(cfg.n_rad * scene.l_obs(), rng), cfg.n_rad,
      scene.l_obs());
  CHECK_THROWS_AS(monte_carlo_sinr(f, filt, scene, cfg, 50, rng),
                  std::invalid_argument);
}
