#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "dimr2/tensor.hpp"

namespace dimr2 {

enum class BiasMode { NoBias, VaryingChannelBias };

/// How per-sample channel biases are drawn in the VaryingChannelBias mode:
/// the five levels {0,1,2,3,4} permuted uniformly per sample, or an
/// independent uniform draw in [0,4] per (sample, channel).
enum class BiasAssignment { PermutedLevels, IidUniform };

/// Five-channel sinusoidal benchmark with channel-specific time-varying
/// noise envelopes. The channel schedule is fixed at 5 channels:
///   C0 sine, noise-free; C1 sine, noise ramping 0 to 1 over time;
///   C2 sine, noise ramping 1 to 0; C3 sine, constant noise;
///   C4 shared Gaussian trace matched to C0's variance, noise-free.
struct TimeVaryingConfig {
  std::size_t n_data = 1000;
  std::size_t n_time = 100;
  std::size_t n_channels = 5;
  BiasMode bias_mode = BiasMode::NoBias;
  BiasAssignment bias_assignment = BiasAssignment::PermutedLevels;
  std::uint64_t seed = 0;
};

/// (time, channel) benchmark where a fixed fraction of channels is replaced
/// by Gaussian noise, independently in target and prediction.
struct NoiseChannelConfig {
  std::size_t n_time = 100;
  std::size_t n_channels = 100;
  double noise_ratio = 0.4;
  double y_noise_var = 0.01;
  double yhat_noise_var = 0.01;
  std::uint64_t seed = 0;
};

struct DatasetBundle {
  Tensor y;
  Tensor yhat;
  nlohmann::json config;
  std::vector<bool> noise_channel_mask;  // per channel; empty unless noise-channels
};

/// Axes (data, time, chan), default shape (1000, 100, 5). Target and
/// prediction share the base signal and any bias; each gets independent
/// uniform [-1,1) noise under the per-channel envelope. Equal seeds give
/// bit-identical bundles; the base, target-noise, prediction-noise, and
/// bias draws come from independent sub-streams of the seed.
DatasetBundle gen_time_varying(const TimeVaryingConfig& cfg);

/// Axes (time, chan). Signal channels carry one identical unit-amplitude
/// sine (a full period over n_time, variance 0.5) in both y and yhat; noise
/// channels are zero-mean Gaussian, variance y_noise_var in y and
/// yhat_noise_var in yhat. round(noise_ratio * n_channels) channels are
/// masked, chosen by a seeded draw.
DatasetBundle gen_noise_channels(const NoiseChannelConfig& cfg);

/// Deterministic (time=100, chan=5) illustration dataset:
/// y[t,c] = sin(2*pi*t/100 + 2*pi*c/5) + c, yhat = y.
DatasetBundle gen_table2_example();

}  // namespace dimr2
