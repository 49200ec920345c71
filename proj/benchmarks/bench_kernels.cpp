#include <benchmark/benchmark.h>

#include "dfrc/algorithms.hpp"
#include "dfrc/kernels.hpp"
#include "dfrc/model.hpp"

namespace {

using namespace dfrc;

struct Fixture {
  SystemConfig cfg;
  RadarScene scene;
  CommChannel channel;
  PrecoderStack precoders;
  Fixture() {
    Rng rng(7);
    scene = build_scene(SceneParams{}, cfg.n_subpulses);
    channel = generate_geometric_channel(cfg, 16, rng);
    precoders.resize(cfg.n_subpulses);
    double power = 0.0;
    for (auto& f : precoders) {
      f = rng.complex_normal_matrix(cfg.n_tx, cfg.n_streams);
      power += f.squaredNorm();
    }
    const double s = std::sqrt(cfg.energy_budget / power);
    for (auto& f : precoders) f *= s;
  }
};

void bm_theta_kernels(benchmark::State& state) {
  Fixture fx;
  for (auto _ : state) {
    auto k = build_theta_kernels(fx.precoders, fx.scene, fx.cfg);
    benchmark::DoNotOptimize(k.theta_t.data());
  }
}
BENCHMARK(bm_theta_kernels)->Unit(benchmark::kMillisecond);

void bm_phi_kernels(benchmark::State& state) {
  Fixture fx;
  const auto theta = build_theta_kernels(fx.precoders, fx.scene, fx.cfg);
  const auto v = update_radar_filter(theta, fx.cfg.noise_var_radar);
  const auto filt = RadarFilter::from_vector(v, fx.cfg.n_rad, fx.scene.l_obs());
  for (auto _ : state) {
    auto k = build_phi_kernels(filt, fx.scene, fx.cfg);
    benchmark::DoNotOptimize(k.phi_t.data());
  }
}
BENCHMARK(bm_phi_kernels)->Unit(benchmark::kMillisecond);

void bm_admm_iteration(benchmark::State& state) {
  Fixture fx;
  ProblemSU prob{fx.cfg, fx.channel, fx.scene, std::pow(10.0, 1.2)};
  Rng rng(11);
  AdmmState st = init_admm_state(fx.cfg, fx.cfg.n_streams, rng, 20.0, 20.0);
  const auto theta = build_theta_kernels(fx.precoders, fx.scene, fx.cfg);
  const auto v = update_radar_filter(theta, fx.cfg.noise_var_radar);
  const auto filt = RadarFilter::from_vector(v, fx.cfg.n_rad, fx.scene.l_obs());
  const auto phi = build_phi_kernels(filt, fx.scene, fx.cfg);
  std::vector<HermEig> m_eig(phi.phi_t.size());
  for (size_t l = 0; l < phi.phi_t.size(); ++l) {
    const Eigen::MatrixXcd m = phi.phi_t[l] - prob.gamma * phi.phi_c[l];
    m_eig[l] = herm_eig(0.5 * (m + m.adjoint()));
  }
  const double alpha = prob.gamma * fx.cfg.noise_var_radar;
  AdmmOptions opts;
  opts.max_iter = 1;
  for (auto _ : state) {
    consensus_admm_su(prob, m_eig, alpha, Architecture::dps, opts, st, nullptr,
                      0);
    benchmark::DoNotOptimize(st.x.front().data());
  }
}
BENCHMARK(bm_admm_iteration)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
