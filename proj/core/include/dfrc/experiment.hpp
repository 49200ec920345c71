#ifndef DFRC_EXPERIMENT_HPP
#define DFRC_EXPERIMENT_HPP

#include <string>
#include <vector>

#include "dfrc/algorithms.hpp"
#include "dfrc/config.hpp"

namespace dfrc {

struct ResultRow {
  double sweep_value = 0.0;
  std::string baseline;
  int trial = 0;
  double sum_se = 0.0;
  std::vector<double> per_user_se;  // mu-miso only
  double radar_sinr_db = 0.0;
  int inner_iters = 0;
  int outer_iters = 0;
  bool feasible = false;
  double wall_seconds = 0.0;  // reported in timings.txt, not in the CSVs
};

struct ExperimentOutput {
  std::vector<ResultRow> rows;
  int n_feasible = 0;
};

/// Runs the sweep x baseline x trial grid and writes results.csv, one
/// trace_<sweep>_<baseline>_<trial>.csv per solve, summary.txt and
/// timings.txt into cfg.out_dir. Infeasible solves become rows with the
/// feasible flag false; the run continues. Deterministic in (config, seed)
/// for every file except timings.txt.
ExperimentOutput run_experiment(const ExperimentConfig& cfg, int jobs = 1);

/// Inner-iteration trace CSV with the documented fixed column order.
void emit_convergence_trace(const ConvergenceTrace& trace,
                            const std::string& path);

}  // namespace dfrc

#endif
