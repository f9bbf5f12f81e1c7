#pragma once

#include <string>

#include "dimr2/axes.hpp"
#include "dimr2/tensor.hpp"

namespace dimr2 {

/// What to score a cell whose total sum of squares is (numerically) zero
/// while the residual is not. A cell with zero TSS and zero RSS always
/// scores 1.
enum class DegeneratePolicy { Zero, NegativeInfinity };

struct MetricOptions {
  DegeneratePolicy degenerate = DegeneratePolicy::Zero;
};

/// Intermediate tensors of the dimensional score pipeline.
/// rss has shape D \ axis, ybar has shape D \ axis_norm, and tss has shape
/// D \ (axis_pool ∪ axis). All three carry axis names (the target's own
/// names, or synthesized "ax<i>" labels for unnamed input) so later
/// broadcasts align by axis identity.
struct Decomposition {
  Tensor rss;
  Tensor ybar;
  Tensor tss;
};

/// A metric evaluated over retained axes: scores of shape D \ axis plus a
/// 0/1 mask of the cells whose normalizer was numerically zero.
struct ScoreMap {
  Tensor scores;
  std::string metric_name;
  ResolvedSpec spec;
  Tensor degenerate_mask;
};

/// Relative zero threshold used for degenerate-normalizer detection in the
/// squared-units metrics: 1e-12 * (mean |y|)^2.
double zero_threshold(const Tensor& y);

/// Residual sum of squares over `axis`, mean of y over `axis_norm`, and the
/// total sum of squares summed over axis ∪ axis_pool and averaged over
/// axis_pool \ axis (averaging factor 1 when that set is empty).
Decomposition decompose(const Tensor& y, const Tensor& yhat, const ResolvedSpec& spec);

/// Dimensional R2: 1 - RSS/TSS per retained cell, TSS broadcast against RSS
/// by axis identity. Scores lie in (-inf, 1]; cells with zero TSS follow the
/// degenerate policy and are flagged in the mask.
ScoreMap dim_r2(const Tensor& y, const Tensor& yhat, const AxisSpec& spec,
                const MetricOptions& options = {});

/// Conventional coefficient of determination on rank-1 data.
double r2_1d(const Tensor& y, const Tensor& yhat, const MetricOptions& options = {});

/// Unweighted average of per-channel R2. Defined for rank-2 data only;
/// throws RankError otherwise.
double mean_r2(const Tensor& y, const Tensor& yhat, std::size_t channel_axis,
               const MetricOptions& options = {});

/// Per-channel R2 averaged with weights proportional to each channel's
/// target variance. Channels with zero variance carry zero weight; throws
/// DegenerateInputError when every channel is constant.
double variance_weighted_mean_r2(const Tensor& y, const Tensor& yhat, std::size_t channel_axis,
                                 const MetricOptions& options = {});

double mse(const Tensor& y, const Tensor& yhat);
double mae(const Tensor& y, const Tensor& yhat);

/// D2 score with absolute error: 1 - sum|y - yhat| / sum|y - mean(y)|.
double d2_absolute_error(const Tensor& y, const Tensor& yhat);
double mean_d2(const Tensor& y, const Tensor& yhat, std::size_t channel_axis);

/// Explained variance: 1 - Var(y - yhat)/Var(y). Blind to additive bias.
double explained_variance(const Tensor& y, const Tensor& yhat, const MetricOptions& options = {});
double mean_ev(const Tensor& y, const Tensor& yhat, std::size_t channel_axis,
               const MetricOptions& options = {});
double variance_weighted_ev(const Tensor& y, const Tensor& yhat, std::size_t channel_axis,
                            const MetricOptions& options = {});

/// Pearson correlation; throws DegenerateInputError on constant input.
double pearson_corr(const Tensor& y, const Tensor& yhat);
double mean_corr(const Tensor& y, const Tensor& yhat, std::size_t channel_axis);

// Per-channel variants over rank-2 data, for score distributions.
ScoreMap per_channel_r2(const Tensor& y, const Tensor& yhat, std::size_t channel_axis,
                        const MetricOptions& options = {});
ScoreMap per_channel_d2(const Tensor& y, const Tensor& yhat, std::size_t channel_axis);
ScoreMap per_channel_ev(const Tensor& y, const Tensor& yhat, std::size_t channel_axis,
                        const MetricOptions& options = {});
ScoreMap per_channel_corr(const Tensor& y, const Tensor& yhat, std::size_t channel_axis);
Tensor per_channel_mse(const Tensor& y, const Tensor& yhat, std::size_t channel_axis);
Tensor per_channel_mae(const Tensor& y, const Tensor& yhat, std::size_t channel_axis);

}  // namespace dimr2
