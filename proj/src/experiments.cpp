#include "dimr2/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "dimr2/detail/accumulate.hpp"
#include "dimr2/rng.hpp"

namespace dimr2 {

namespace {

void parallel_for(std::size_t n_jobs, std::size_t n_threads, const std::function<void(std::size_t)>& body) {
  if (n_threads == 0) n_threads = std::thread::hardware_concurrency();
  if (n_threads == 0) n_threads = 1;
  if (n_threads > n_jobs) n_threads = n_jobs;
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < n_jobs; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  for (std::size_t w = 0; w < n_threads; ++w) {
    workers.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= n_jobs) break;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

SweepCellStats aggregate(const std::vector<double>& values) {
  SweepCellStats stats;
  stats.n_reps = values.size();
  detail::NeumaierSum sum;
  for (double v : values) sum.add(v);
  stats.mean = sum.value() / static_cast<double>(values.size());
  detail::NeumaierSum sq;
  for (double v : values) sq.add((v - stats.mean) * (v - stats.mean));
  stats.stddev = std::sqrt(sq.value() / static_cast<double>(values.size()));
  return stats;
}

}  // namespace

const std::vector<std::string>& default_sweep_metrics() {
  static const std::vector<std::string> metrics = {
      "mean-r2", "dim-r2", "var-weighted-r2", "mean-d2", "mean-ev", "var-weighted-ev", "mean-corr",
  };
  return metrics;
}

double evaluate_sweep_metric(const std::string& name, const Tensor& y, const Tensor& yhat) {
  const std::size_t channel_axis = 1;
  if (name == "mean-r2") return mean_r2(y, yhat, channel_axis);
  if (name == "dim-r2") {
    AxisSpec spec;
    spec.axis = AxisSet::all(y.rank());
    spec.axis_norm = AxisSet({0});  // time
    return dim_r2(y, yhat, spec).scores.item();
  }
  if (name == "var-weighted-r2") return variance_weighted_mean_r2(y, yhat, channel_axis);
  if (name == "mean-d2") return mean_d2(y, yhat, channel_axis);
  if (name == "mean-ev") return mean_ev(y, yhat, channel_axis);
  if (name == "var-weighted-ev") return variance_weighted_ev(y, yhat, channel_axis);
  if (name == "mean-corr") return mean_corr(y, yhat, channel_axis);
  throw ConfigError("unknown sweep metric '" + name + "'");
}

SweepResult run_noise_sweep(const SweepConfig& cfg, std::size_t n_threads) {
  if (cfg.y_var_grid.empty() || cfg.yhat_var_grid.empty() || cfg.ratio_grid.empty()) {
    throw ConfigError("sweep grids must not be empty");
  }
  if (cfg.n_reps < 1) throw ConfigError("n_reps must be >= 1");
  const std::vector<std::string>& metrics =
      cfg.metric_set.empty() ? default_sweep_metrics() : cfg.metric_set;
  for (const auto& name : metrics) {
    bool known = true;
    try {
      // Validate names up front so a typo fails before any computation.
      Tensor probe({2, 2}, {0.0, 1.0, 1.0, 0.0}, {"time", "chan"});
      evaluate_sweep_metric(name, probe, probe);
    } catch (const ConfigError&) {
      known = false;
    }
    if (!known) throw ConfigError("unknown sweep metric '" + name + "'");
  }

  SweepResult result;
  result.config = cfg;
  result.config.metric_set = metrics;

  const std::size_t n_cells =
      cfg.y_var_grid.size() * cfg.yhat_var_grid.size() * cfg.ratio_grid.size();
  result.cells.resize(n_cells);
  std::size_t cell_index = 0;
  for (double y_var : cfg.y_var_grid) {
    for (double yhat_var : cfg.yhat_var_grid) {
      for (double ratio : cfg.ratio_grid) {
        SweepCell& cell = result.cells[cell_index++];
        cell.y_var = y_var;
        cell.yhat_var = yhat_var;
        cell.ratio = ratio;
        // Seeded by the grid values themselves, not the grid position.
        cell.cell_seed = mix_value(mix_value(mix_value(cfg.base_seed, y_var), yhat_var), ratio);
      }
    }
  }

  // values[cell][metric][rep]
  std::vector<std::vector<std::vector<double>>> values(
      n_cells, std::vector<std::vector<double>>(metrics.size(),
                                                std::vector<double>(cfg.n_reps, 0.0)));

  const std::size_t n_jobs = n_cells * cfg.n_reps;
  parallel_for(n_jobs, n_threads, [&](std::size_t job) {
    const std::size_t cell_i = job / cfg.n_reps;
    const std::size_t rep = job % cfg.n_reps;
    const SweepCell& cell = result.cells[cell_i];

    NoiseChannelConfig gen_cfg;
    gen_cfg.noise_ratio = cell.ratio;
    gen_cfg.y_noise_var = cell.y_var;
    gen_cfg.yhat_noise_var = cell.yhat_var;
    gen_cfg.seed = derive_stream(cell.cell_seed, rep);
    const DatasetBundle bundle = gen_noise_channels(gen_cfg);
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      values[cell_i][m][rep] = evaluate_sweep_metric(metrics[m], bundle.y, bundle.yhat);
    }
  });

  for (std::size_t c = 0; c < n_cells; ++c) {
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      result.cells[c].stats[metrics[m]] = aggregate(values[c][m]);
    }
  }
  return result;
}

nlohmann::json sweep_result_to_json(const SweepResult& result) {
  nlohmann::json j;
  j["config"] = {
      {"y_var_grid", result.config.y_var_grid},
      {"yhat_var_grid", result.config.yhat_var_grid},
      {"ratio_grid", result.config.ratio_grid},
      {"n_reps", result.config.n_reps},
      {"base_seed", result.config.base_seed},
      {"metric_set", result.config.metric_set},
      {"seed_scheme", "cell_seed = splitmix64 chain over (base_seed, y_var, yhat_var, ratio); "
                      "rep_seed = splitmix64(cell_seed, rep)"},
  };
  j["cells"] = nlohmann::json::array();
  for (const auto& cell : result.cells) {
    nlohmann::json stats;
    for (const auto& [name, s] : cell.stats) {
      stats[name] = {{"mean", s.mean}, {"std", s.stddev}, {"n_reps", s.n_reps}};
    }
    j["cells"].push_back({
        {"y_var", cell.y_var},
        {"yhat_var", cell.yhat_var},
        {"ratio", cell.ratio},
        {"cell_seed", cell.cell_seed},
        {"metrics", std::move(stats)},
    });
  }
  return j;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
  out << "y_var,yhat_var,ratio,metric,mean,std,n_reps\n";
  char buf[512];
  for (const auto& cell : result.cells) {
    for (const auto& [name, s] : cell.stats) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%s,%.17g,%.17g,%zu\n", cell.y_var,
                    cell.yhat_var, cell.ratio, name.c_str(), s.mean, s.stddev, s.n_reps);
      out << buf;
    }
  }
}

std::map<std::string, ScoreMap> run_dimensional_view(BiasMode bias_mode, std::uint64_t seed) {
  TimeVaryingConfig cfg;
  cfg.bias_mode = bias_mode;
  cfg.seed = seed;
  const DatasetBundle bundle = gen_time_varying(cfg);

  const std::size_t time_axis = bundle.y.axis_index("time");
  const Tensor time_mean = reduce_mean(bundle.y, AxisSet({time_axis}));
  const Tensor baseline =
      broadcast_combine(bundle.y, time_mean, [](double, double m) { return m; });

  const std::size_t data_axis = bundle.y.axis_index("data");
  auto spec_with_norm = [&](std::size_t norm_axis) {
    AxisSpec spec;
    spec.axis = AxisSet({data_axis});
    spec.axis_norm = AxisSet({norm_axis});
    return spec;
  };

  std::map<std::string, ScoreMap> panels;
  panels["yhat_norm_data"] = dim_r2(bundle.y, bundle.yhat, spec_with_norm(data_axis));
  panels["baseline_norm_data"] = dim_r2(bundle.y, baseline, spec_with_norm(data_axis));
  panels["yhat_norm_time"] = dim_r2(bundle.y, bundle.yhat, spec_with_norm(time_axis));
  panels["baseline_norm_time"] = dim_r2(bundle.y, baseline, spec_with_norm(time_axis));
  return panels;
}

}  // namespace dimr2
