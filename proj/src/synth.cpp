#include "dimr2/synth.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "dimr2/detail/accumulate.hpp"
#include "dimr2/rng.hpp"

namespace dimr2 {

namespace {

// Sub-stream tags, fixed for reproducibility.
constexpr std::uint64_t kStreamBase = 1;
constexpr std::uint64_t kStreamYNoise = 2;
constexpr std::uint64_t kStreamYhatNoise = 3;
constexpr std::uint64_t kStreamBias = 4;
constexpr std::uint64_t kStreamMask = 5;

std::vector<double> full_period_sine(std::size_t n_time) {
  std::vector<double> s(n_time);
  for (std::size_t t = 0; t < n_time; ++t) {
    s[t] = std::sin(2.0 * std::numbers::pi * static_cast<double>(t) /
                    static_cast<double>(n_time));
  }
  return s;
}

double population_variance(const std::vector<double>& v) {
  detail::NeumaierSum sum;
  for (double x : v) sum.add(x);
  const double mean = sum.value() / static_cast<double>(v.size());
  detail::NeumaierSum sq;
  for (double x : v) sq.add((x - mean) * (x - mean));
  return sq.value() / static_cast<double>(v.size());
}

}  // namespace

DatasetBundle gen_time_varying(const TimeVaryingConfig& cfg) {
  if (cfg.n_data < 1 || cfg.n_time < 1) throw ConfigError("counts must be >= 1");
  if (cfg.n_channels != 5) {
    throw ConfigError("time-varying dataset defines its channel schedule for exactly 5 channels");
  }
  const std::size_t D = cfg.n_data;
  const std::size_t T = cfg.n_time;
  const std::size_t C = cfg.n_channels;

  // Base pattern shared by every sample: C0-C3 one sine, C4 a Gaussian
  // trace centered per series and rescaled to C0's empirical variance.
  const std::vector<double> sine = full_period_sine(T);
  std::vector<double> gauss(T);
  {
    Rng base_rng(derive_stream(cfg.seed, kStreamBase));
    detail::NeumaierSum mean_acc;
    for (std::size_t t = 0; t < T; ++t) {
      gauss[t] = base_rng.normal();
      mean_acc.add(gauss[t]);
    }
    const double mean = mean_acc.value() / static_cast<double>(T);
    for (double& g : gauss) g -= mean;
    const double var_g = population_variance(gauss);
    const double var_c0 = population_variance(sine);
    const double scale = var_g > 0.0 ? std::sqrt(var_c0 / var_g) : 0.0;
    for (double& g : gauss) g *= scale;
  }

  // Noise envelope per channel and time step.
  const double ramp_den = T > 1 ? static_cast<double>(T - 1) : 1.0;
  auto envelope = [&](std::size_t c, std::size_t t) -> double {
    switch (c) {
      case 1: return static_cast<double>(t) / ramp_den;
      case 2: return 1.0 - static_cast<double>(t) / ramp_den;
      case 3: return 1.0;
      default: return 0.0;  // C0, C4
    }
  };

  // Per-sample channel biases (zero in NoBias mode).
  std::vector<double> bias(D * C, 0.0);
  if (cfg.bias_mode == BiasMode::VaryingChannelBias) {
    Rng bias_rng(derive_stream(cfg.seed, kStreamBias));
    if (cfg.bias_assignment == BiasAssignment::PermutedLevels) {
      std::vector<std::size_t> perm(C);
      for (std::size_t d = 0; d < D; ++d) {
        for (std::size_t c = 0; c < C; ++c) perm[c] = c;
        for (std::size_t c = C; c-- > 1;) {
          std::swap(perm[c], perm[bias_rng.uniform_index(c + 1)]);
        }
        for (std::size_t c = 0; c < C; ++c) bias[d * C + c] = static_cast<double>(perm[c]);
      }
    } else {
      for (std::size_t d = 0; d < D; ++d) {
        for (std::size_t c = 0; c < C; ++c) bias[d * C + c] = 4.0 * bias_rng.uniform01();
      }
    }
  }

  Rng y_rng(derive_stream(cfg.seed, kStreamYNoise));
  Rng yhat_rng(derive_stream(cfg.seed, kStreamYhatNoise));
  std::vector<double> y(D * T * C);
  std::vector<double> yhat(D * T * C);
  std::size_t i = 0;
  for (std::size_t d = 0; d < D; ++d) {
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t c = 0; c < C; ++c, ++i) {
        const double base = c == 4 ? gauss[t] : sine[t];
        const double offset = base + bias[d * C + c];
        const double env = envelope(c, t);
        // Draw unconditionally so the stream layout does not depend on the
        // envelope schedule.
        const double uy = y_rng.uniform_pm1();
        const double uh = yhat_rng.uniform_pm1();
        y[i] = offset + env * uy;
        yhat[i] = offset + env * uh;
      }
    }
  }

  DatasetBundle bundle;
  const Tensor::Names names = {"data", "time", "chan"};
  bundle.y = Tensor({D, T, C}, std::move(y), names);
  bundle.yhat = Tensor({D, T, C}, std::move(yhat), names);
  bundle.config = {
      {"dataset", "time-varying"},
      {"n_data", D},
      {"n_time", T},
      {"n_channels", C},
      {"bias_mode", cfg.bias_mode == BiasMode::NoBias ? "no-bias" : "varying"},
      {"bias_assignment",
       cfg.bias_assignment == BiasAssignment::PermutedLevels ? "permuted" : "iid"},
      {"seed", cfg.seed},
  };
  return bundle;
}

DatasetBundle gen_noise_channels(const NoiseChannelConfig& cfg) {
  if (cfg.n_time < 1 || cfg.n_channels < 1) throw ConfigError("counts must be >= 1");
  if (!(cfg.noise_ratio >= 0.0 && cfg.noise_ratio <= 1.0)) {
    throw ConfigError("noise ratio must lie in [0, 1]");
  }
  if (!(cfg.y_noise_var > 0.0) || !(cfg.yhat_noise_var > 0.0)) {
    throw ConfigError("noise variances must be > 0");
  }
  const std::size_t T = cfg.n_time;
  const std::size_t C = cfg.n_channels;
  const auto n_noise = static_cast<std::size_t>(
      std::llround(cfg.noise_ratio * static_cast<double>(C)));

  // Choose the noise channels by partial Fisher-Yates.
  std::vector<bool> mask(C, false);
  {
    Rng mask_rng(derive_stream(cfg.seed, kStreamMask));
    std::vector<std::size_t> pool(C);
    for (std::size_t c = 0; c < C; ++c) pool[c] = c;
    for (std::size_t k = 0; k < n_noise; ++k) {
      const std::size_t j = k + mask_rng.uniform_index(C - k);
      std::swap(pool[k], pool[j]);
      mask[pool[k]] = true;
    }
  }

  const std::vector<double> sine = full_period_sine(T);
  std::vector<double> y(T * C);
  std::vector<double> yhat(T * C);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t c = 0; c < C; ++c) {
      y[t * C + c] = sine[t];
      yhat[t * C + c] = sine[t];
    }
  }
  Rng y_rng(derive_stream(cfg.seed, kStreamYNoise));
  Rng yhat_rng(derive_stream(cfg.seed, kStreamYhatNoise));
  const double y_sd = std::sqrt(cfg.y_noise_var);
  const double yhat_sd = std::sqrt(cfg.yhat_noise_var);
  for (std::size_t c = 0; c < C; ++c) {
    if (!mask[c]) continue;
    for (std::size_t t = 0; t < T; ++t) y[t * C + c] = y_sd * y_rng.normal();
    for (std::size_t t = 0; t < T; ++t) yhat[t * C + c] = yhat_sd * yhat_rng.normal();
  }

  DatasetBundle bundle;
  const Tensor::Names names = {"time", "chan"};
  bundle.y = Tensor({T, C}, std::move(y), names);
  bundle.yhat = Tensor({T, C}, std::move(yhat), names);
  bundle.noise_channel_mask = std::move(mask);
  bundle.config = {
      {"dataset", "noise-channels"},
      {"n_time", T},
      {"n_channels", C},
      {"noise_ratio", cfg.noise_ratio},
      {"y_noise_var", cfg.y_noise_var},
      {"yhat_noise_var", cfg.yhat_noise_var},
      {"seed", cfg.seed},
  };
  return bundle;
}

DatasetBundle gen_table2_example() {
  const std::size_t T = 100;
  const std::size_t C = 5;
  std::vector<double> y(T * C);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t c = 0; c < C; ++c) {
      y[t * C + c] = std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 100.0 +
                              2.0 * std::numbers::pi * static_cast<double>(c) / 5.0) +
                     static_cast<double>(c);
    }
  }
  DatasetBundle bundle;
  const Tensor::Names names = {"time", "chan"};
  bundle.y = Tensor({T, C}, y, names);
  bundle.yhat = Tensor({T, C}, std::move(y), names);
  bundle.config = {{"dataset", "table2"}, {"n_time", T}, {"n_channels", C}};
  return bundle;
}

}  // namespace dimr2
