#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dimr2/metrics.hpp"
#include "dimr2/synth.hpp"

namespace dimr2 {

/// Grid sweep over noise-channel datasets. Every (y_var, yhat_var, ratio)
/// cell is evaluated for n_reps seeded repetitions of each metric.
struct SweepConfig {
  std::vector<double> y_var_grid = {0.01, 0.1, 0.5, 1.0};
  std::vector<double> yhat_var_grid = {0.01, 0.1, 0.5, 1.0};
  std::vector<double> ratio_grid = {0.0, 0.2, 0.4, 0.6, 0.8};
  std::size_t n_reps = 100;
  std::uint64_t base_seed = 42;
  std::vector<std::string> metric_set;  // empty selects default_sweep_metrics()
};

struct SweepCellStats {
  double mean = 0.0;
  double stddev = 0.0;  // population (1/n)
  std::size_t n_reps = 0;
};

struct SweepCell {
  double y_var = 0.0;
  double yhat_var = 0.0;
  double ratio = 0.0;
  std::uint64_t cell_seed = 0;
  std::map<std::string, SweepCellStats> stats;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepCell> cells;  // y_var-major, then yhat_var, then ratio
};

/// The metrics every sweep reports by default: mean-r2, dim-r2 (all axes
/// collapsed, normalized over time), var-weighted-r2, mean-d2, mean-ev,
/// var-weighted-ev, mean-corr.
const std::vector<std::string>& default_sweep_metrics();

/// Evaluate one sweep metric on a (time, chan) dataset. Throws ConfigError
/// for unknown names.
double evaluate_sweep_metric(const std::string& name, const Tensor& y, const Tensor& yhat);

/// Run the sweep. Repetitions are evaluated in parallel (n_threads = 0
/// picks the hardware default); each (cell, rep) is seeded independently
/// from base_seed and the cell's grid values, so results do not depend on
/// scheduling and adding grid points leaves existing cells unchanged.
SweepResult run_noise_sweep(const SweepConfig& cfg, std::size_t n_threads = 0);

nlohmann::json sweep_result_to_json(const SweepResult& result);

/// Long-format CSV: y_var,yhat_var,ratio,metric,mean,std,n_reps.
void write_sweep_csv(const SweepResult& result, std::ostream& out);

/// Score maps over (time, chan) for the time-varying dataset with
/// axis = {data}: the prediction and the per-sample time-mean baseline,
/// each normalized over the data axis and over the time axis. Keys:
/// yhat_norm_data, baseline_norm_data, yhat_norm_time, baseline_norm_time.
std::map<std::string, ScoreMap> run_dimensional_view(BiasMode bias_mode, std::uint64_t seed);

}  // namespace dimr2
