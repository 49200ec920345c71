#include "dfrc/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include "dfrc/model.hpp"

namespace dfrc {

namespace {

constexpr std::uint64_t kChannelStream = 1;
constexpr std::uint64_t kInitStream = 2;

std::string g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Architecture arch_of(const std::string& baseline) {
  if (baseline == "dps") return Architecture::dps;
  if (baseline == "sps") return Architecture::sps;
  return Architecture::fully_digital;
}

struct WorkItem {
  int sweep_idx = 0;
  int baseline_idx = 0;
  int trial = 0;
};

struct ItemResult {
  ResultRow row;
  ConvergenceTrace trace;
  std::string error;  // non-empty on unexpected failure
};

/// Config at one sweep point: overrides gamma / n_rf / n_users.
struct PointSetup {
  SystemConfig sys;
  double gamma_linear = 0.0;
  int n_users = 0;
};

PointSetup setup_point(const ExperimentConfig& cfg, int sweep_idx) {
  PointSetup p;
  p.sys = cfg.system;
  p.n_users = cfg.n_users;
  double gamma_db = cfg.gamma_db.front();
  switch (cfg.sweep_axis()) {
    case ExperimentConfig::SweepAxis::gamma:
      gamma_db = cfg.gamma_db[sweep_idx];
      break;
    case ExperimentConfig::SweepAxis::n_rf:
      p.sys.n_rf = cfg.n_rf_sweep[sweep_idx];
      p.sys.n_streams = std::min(p.sys.n_streams, p.sys.n_rf);
      break;
    case ExperimentConfig::SweepAxis::n_users:
      p.n_users = cfg.n_users_sweep[sweep_idx];
      break;
    case ExperimentConfig::SweepAxis::none:
      break;
  }
  p.gamma_linear = std::pow(10.0, gamma_db / 10.0);
  return p;
}

ItemResult solve_item(const ExperimentConfig& cfg, const WorkItem& it,
                      double sweep_value) {
  ItemResult out;
  out.row.sweep_value = sweep_value;
  out.row.baseline = cfg.baselines[it.baseline_idx];
  out.row.trial = it.trial;

  const PointSetup pt = setup_point(cfg, it.sweep_idx);
  const Architecture arch = arch_of(out.row.baseline);
  SolveOptions opts;
  opts.n_outer = cfg.outer_max_iter;
  opts.arch = arch;
  opts.admm.max_iter = cfg.admm_max_iter;
  opts.admm.rho1 = cfg.rho1;
  opts.admm.rho2 = cfg.rho2;

  const Rng base(cfg.seed);
  Rng init_rng = base.substream(kInitStream, static_cast<std::uint64_t>(it.trial));
  const auto t0 = std::chrono::steady_clock::now();
  try {
    SolveResult res;
    if (cfg.scenario == "su-mimo") {
      Rng ch_rng =
          base.substream(kChannelStream, static_cast<std::uint64_t>(it.trial));
      ProblemSU prob;
      prob.cfg = pt.sys;
      prob.channel = generate_geometric_channel(pt.sys, cfg.n_path, ch_rng);
      prob.scene = build_scene(cfg.scene, pt.sys.n_subpulses);
      prob.gamma = pt.gamma_linear;
      res = thereon(prob, init_rng, opts);
    } else {
      ProblemMU prob;
      prob.cfg = pt.sys;
      prob.channels.resize(pt.n_users);
      for (int n = 0; n < pt.n_users; ++n) {
        Rng user_rng =
            base.substream(kChannelStream, static_cast<std::uint64_t>(it.trial))
                .substream(static_cast<std::uint64_t>(n));
        SystemConfig miso = pt.sys;
        miso.n_rx = 1;
        prob.channels[n] = generate_geometric_channel(miso, cfg.n_path, user_rng)
                               .matrix.row(0)
                               .transpose()
                               .conjugate();
      }
      prob.priorities = Eigen::VectorXd::Ones(pt.n_users);
      prob.noise_vars =
          Eigen::VectorXd::Constant(pt.n_users, pt.sys.noise_var_comm);
      prob.scene = build_scene(cfg.scene, pt.sys.n_subpulses);
      prob.gamma = pt.gamma_linear;
      res = thereon_mu_miso(prob, init_rng, opts);
    }
    out.row.sum_se = res.sum_se;
    out.row.per_user_se = res.per_user_se;
    out.row.radar_sinr_db = res.sinr_db;
    out.row.inner_iters = res.inner_iters;
    out.row.outer_iters = res.outer_iters;
    out.row.feasible = res.feasible;
    out.trace = std::move(res.trace);
  } catch (const InfeasibleError&) {
    out.row.sum_se = std::numeric_limits<double>::quiet_NaN();
    out.row.radar_sinr_db = std::numeric_limits<double>::quiet_NaN();
    out.row.feasible = false;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  out.row.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

std::string join_semicolon(const std::vector<double>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += g17(v[i]);
  }
  return s;
}

}  // namespace

void emit_convergence_trace(const ConvergenceTrace& trace,
                            const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file '" + path + "'");
  out << "outer_iter,inner_iter,sum_se,aug_lagrangian,"
         "primal_residual_consensus,primal_residual_z\n";
  for (const auto& r : trace.inner)
    out << r.outer << ',' << r.inner << ',' << g17(r.sum_se) << ','
        << g17(r.aug_lagrangian) << ',' << g17(r.res_consensus) << ','
        << g17(r.res_z) << '\n';
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg, int jobs) {
  cfg.validate();
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);

  const std::vector<double> sweep = cfg.sweep_values();
  std::vector<WorkItem> items;
  for (int s = 0; s < static_cast<int>(sweep.size()); ++s)
    for (int b = 0; b < static_cast<int>(cfg.baselines.size()); ++b)
      for (int t = 0; t < cfg.trials; ++t) items.push_back({s, b, t});

  std::vector<ItemResult> results(items.size());
  auto worker = [&](int tid) {
    for (size_t i = tid; i < items.size(); i += jobs)
      results[i] = solve_item(cfg, items[i], sweep[items[i].sweep_idx]);
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  for (const auto& r : results)
    if (!r.error.empty())
      throw std::runtime_error("solve failed: " + r.error);

  ExperimentOutput out;
  out.rows.reserve(results.size());

  std::ofstream csv(fs::path(cfg.out_dir) / "results.csv");
  if (!csv) throw std::runtime_error("cannot write results.csv");
  csv << "sweep_value,baseline,trial,sum_se,per_user_se,radar_sinr_db,"
         "inner_iters,outer_iters,feasible\n";
  for (size_t i = 0; i < results.size(); ++i) {
    const ResultRow& row = results[i].row;
    csv << g17(row.sweep_value) << ',' << row.baseline << ',' << row.trial
        << ',' << g17(row.sum_se) << ',' << join_semicolon(row.per_user_se)
        << ',' << g17(row.radar_sinr_db) << ',' << row.inner_iters << ','
        << row.outer_iters << ',' << (row.feasible ? 1 : 0) << '\n';
    const std::string trace_name = "trace_" +
                                   std::to_string(items[i].sweep_idx) + "_" +
                                   row.baseline + "_" +
                                   std::to_string(row.trial) + ".csv";
    emit_convergence_trace(results[i].trace,
                           (fs::path(cfg.out_dir) / trace_name).string());
    if (row.feasible) ++out.n_feasible;
    out.rows.push_back(row);
  }
  csv.close();

  std::ofstream summary(fs::path(cfg.out_dir) / "summary.txt");
  if (!summary) throw std::runtime_error("cannot write summary.txt");
  for (size_t s = 0; s < sweep.size(); ++s)
    for (size_t b = 0; b < cfg.baselines.size(); ++b) {
      std::vector<double> se, sinr;
      for (const auto& r : results) {
        const ResultRow& row = r.row;
        if (row.baseline != cfg.baselines[b] ||
            row.sweep_value != sweep[s] || !row.feasible)
          continue;
        se.push_back(row.sum_se);
        sinr.push_back(row.radar_sinr_db);
      }
      double mean_se = 0.0, stderr_se = 0.0, mean_sinr = 0.0;
      const size_t n = se.size();
      if (n > 0) {
        for (size_t i = 0; i < n; ++i) {
          mean_se += se[i];
          mean_sinr += sinr[i];
        }
        mean_se /= n;
        mean_sinr /= n;
        if (n > 1) {
          double var = 0.0;
          for (double x : se) var += (x - mean_se) * (x - mean_se);
          stderr_se = std::sqrt(var / (n - 1)) / std::sqrt(double(n));
        }
      }
      summary << "sweep=" << g17(sweep[s]) << " baseline=" << cfg.baselines[b]
              << " trials=" << cfg.trials << " feasible=" << n
              << " mean_sum_se=" << g17(mean_se)
              << " stderr_sum_se=" << g17(stderr_se)
              << " mean_sinr_db=" << g17(mean_sinr) << '\n';
    }
  summary.close();

  std::ofstream timings(fs::path(cfg.out_dir) / "timings.txt");
  double total = 0.0;
  for (const auto& r : results) {
    timings << "sweep=" << g17(r.row.sweep_value)
            << " baseline=" << r.row.baseline << " trial=" << r.row.trial
            << " seconds=" << r.row.wall_seconds << '\n';
    total += r.row.wall_seconds;
  }
  timings << "total_seconds=" << total << '\n';
  return out;
}

}  // namespace dfrc
