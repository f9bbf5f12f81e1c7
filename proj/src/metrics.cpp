#include "dimr2/metrics.hpp"

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "dimr2/detail/accumulate.hpp"

namespace dimr2 {

namespace {

constexpr double kRelativeZero = 1e-12;

double degenerate_value(DegeneratePolicy policy) {
  return policy == DegeneratePolicy::Zero ? 0.0 : -std::numeric_limits<double>::infinity();
}

Tensor::Names synthetic_names(std::size_t rank) {
  Tensor::Names names;
  names.reserve(rank);
  for (std::size_t d = 0; d < rank; ++d) names.push_back("ax" + std::to_string(d));
  return names;
}

void require_same_shape(const Tensor& y, const Tensor& yhat) {
  if (!y.same_shape(yhat)) throw ShapeError("y and yhat must have identical shapes");
}

void require_rank2(const Tensor& y, std::size_t channel_axis) {
  if (y.rank() != 2) {
    throw RankError("metric is defined for 2D data only (got rank " + std::to_string(y.rank()) +
                    "); collapse extra axes explicitly or use dim-r2");
  }
  if (channel_axis >= 2) throw AxisError("channel axis must be 0 or 1 for rank-2 data");
}

std::vector<double> channel_values(const Tensor& t, std::size_t channel_axis, std::size_t c) {
  const std::size_t n = t.shape()[1 - channel_axis];
  const auto strides = t.strides();
  const std::size_t step = strides[1 - channel_axis];
  std::size_t off = c * strides[channel_axis];
  std::vector<double> out(n);
  const auto data = t.data();
  for (std::size_t i = 0; i < n; ++i, off += step) out[i] = data[off];
  return out;
}

double sum_of(std::span<const double> v) { return detail::compensated_sum(v); }

double sum_sq_dev(std::span<const double> v, double center) {
  detail::NeumaierSum acc;
  for (double x : v) acc.add((x - center) * (x - center));
  return acc.value();
}

double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
  detail::NeumaierSum acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc.add((a[i] - b[i]) * (a[i] - b[i]));
  return acc.value();
}

double series_threshold(std::span<const double> y) {
  detail::NeumaierSum acc;
  for (double v : y) acc.add(std::abs(v));
  const double mean_abs = acc.value() / static_cast<double>(y.size());
  return kRelativeZero * mean_abs * mean_abs;
}

double r2_series(std::span<const double> y, std::span<const double> yhat,
                 const MetricOptions& options) {
  const double n = static_cast<double>(y.size());
  const double rss = sum_sq_diff(y, yhat);
  const double mean = sum_of(y) / n;
  const double tss = sum_sq_dev(y, mean);
  const double tau = series_threshold(y);
  if (tss <= tau) return rss <= tau ? 1.0 : degenerate_value(options.degenerate);
  return 1.0 - rss / tss;
}

double ev_series(std::span<const double> y, std::span<const double> yhat,
                 const MetricOptions& options) {
  const double n = static_cast<double>(y.size());
  std::vector<double> resid(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) resid[i] = y[i] - yhat[i];
  const double resid_var = sum_sq_dev(resid, sum_of(resid) / n);
  const double y_var = sum_sq_dev(y, sum_of(y) / n);
  const double tau = series_threshold(y);
  if (y_var <= tau) return resid_var <= tau ? 1.0 : degenerate_value(options.degenerate);
  return 1.0 - resid_var / y_var;
}

double d2_series(std::span<const double> y, std::span<const double> yhat) {
  detail::NeumaierSum num;
  for (std::size_t i = 0; i < y.size(); ++i) num.add(std::abs(y[i] - yhat[i]));
  const double mean = sum_of(y) / static_cast<double>(y.size());
  detail::NeumaierSum den;
  detail::NeumaierSum abs_sum;
  for (double v : y) {
    den.add(std::abs(v - mean));
    abs_sum.add(std::abs(v));
  }
  const double tau = kRelativeZero * abs_sum.value();
  if (den.value() <= tau) {
    if (num.value() <= tau) return 1.0;
    throw DegenerateInputError("constant target: absolute-deviation normalizer is zero");
  }
  return 1.0 - num.value() / den.value();
}

double corr_series(std::span<const double> y, std::span<const double> yhat) {
  const double n = static_cast<double>(y.size());
  const double my = sum_of(y) / n;
  const double mh = sum_of(yhat) / n;
  detail::NeumaierSum cov, vy, vh;
  for (std::size_t i = 0; i < y.size(); ++i) {
    cov.add((y[i] - my) * (yhat[i] - mh));
    vy.add((y[i] - my) * (y[i] - my));
    vh.add((yhat[i] - mh) * (yhat[i] - mh));
  }
  if (vy.value() <= series_threshold(y) || vh.value() <= series_threshold(yhat)) {
    throw DegenerateInputError("correlation undefined for constant input");
  }
  return cov.value() / std::sqrt(vy.value() * vh.value());
}

ResolvedSpec per_channel_spec(const Tensor& y, std::size_t channel_axis) {
  AxisSpec spec;
  spec.axis = AxisSet({1 - channel_axis});
  return resolve(spec, 2, y.names());
}

template <typename ScoreFn>
ScoreMap per_channel_map(const Tensor& y, const Tensor& yhat, std::size_t channel_axis,
                         std::string metric_name, ScoreFn&& score) {
  require_same_shape(y, yhat);
  require_rank2(y, channel_axis);
  const std::size_t n_channels = y.shape()[channel_axis];
  std::vector<double> scores(n_channels);
  std::vector<double> mask(n_channels, 0.0);
  for (std::size_t c = 0; c < n_channels; ++c) {
    const auto yc = channel_values(y, channel_axis, c);
    const auto hc = channel_values(yhat, channel_axis, c);
    scores[c] = score(yc, hc, mask[c]);
  }
  Tensor::Names names;
  if (y.has_names()) names.push_back(y.names()[channel_axis]);
  ScoreMap map;
  map.scores = Tensor({n_channels}, std::move(scores), names);
  map.degenerate_mask = Tensor({n_channels}, std::move(mask), std::move(names));
  map.metric_name = std::move(metric_name);
  map.spec = per_channel_spec(y, channel_axis);
  return map;
}

}  // namespace

double zero_threshold(const Tensor& y) {
  detail::NeumaierSum acc;
  for (double v : y.data()) acc.add(std::abs(v));
  const double mean_abs = acc.value() / static_cast<double>(y.size());
  return kRelativeZero * mean_abs * mean_abs;
}

Decomposition decompose(const Tensor& y, const Tensor& yhat, const ResolvedSpec& spec) {
  require_same_shape(y, yhat);
  if (spec.rank != y.rank()) throw ShapeError("spec was resolved for a different rank");

  const Tensor::Names names = y.has_names() ? y.names() : synthetic_names(y.rank());
  const Tensor named_y = y.has_names() ? y : y.with_names(names);

  // Squared residuals, reduced over the collapsed axes.
  std::vector<double> sq(y.size());
  const auto yd = y.data();
  const auto hd = yhat.data();
  for (std::size_t i = 0; i < sq.size(); ++i) {
    const double r = yd[i] - hd[i];
    sq[i] = r * r;
  }
  Tensor rss = reduce_sum(Tensor(y.shape(), std::move(sq), names), spec.axis);

  Tensor ybar = reduce_mean(named_y, spec.axis_norm);

  Tensor dev = broadcast_combine(named_y, ybar, ElemOp::Sub);
  Tensor dev_sq = transform(dev, [](double v) { return v * v; });
  Tensor tss = reduce_sum(dev_sq, spec.axis.unite(spec.axis_pool));
  double pool_count = 1.0;
  for (std::size_t d : spec.pool_minus_axis.indices()) {
    pool_count *= static_cast<double>(y.shape()[d]);
  }
  if (pool_count != 1.0) {
    tss = transform(tss, [pool_count](double v) { return v / pool_count; });
  }
  return Decomposition{std::move(rss), std::move(ybar), std::move(tss)};
}

ScoreMap dim_r2(const Tensor& y, const Tensor& yhat, const AxisSpec& spec,
                const MetricOptions& options) {
  require_same_shape(y, yhat);
  const ResolvedSpec resolved = resolve(spec, y.rank(), y.names());
  Decomposition parts = decompose(y, yhat, resolved);

  // Stretch the pooled TSS over the retained pool axes; alignment is by
  // axis identity through the names decompose attached.
  Tensor tss_b = broadcast_combine(parts.rss, parts.tss, [](double, double t) { return t; });

  const double tau = zero_threshold(y);
  const double fallback = degenerate_value(options.degenerate);
  const std::size_t n = parts.rss.size();
  std::vector<double> scores(n);
  std::vector<double> mask(n, 0.0);
  const auto rss_d = parts.rss.data();
  const auto tss_d = tss_b.data();
  for (std::size_t i = 0; i < n; ++i) {
    if (tss_d[i] <= tau) {
      mask[i] = 1.0;
      scores[i] = rss_d[i] <= tau ? 1.0 : fallback;
    } else {
      scores[i] = 1.0 - rss_d[i] / tss_d[i];
    }
  }

  const Tensor::Names out_names = y.has_names() ? parts.rss.names() : Tensor::Names{};
  ScoreMap map;
  map.scores = Tensor(parts.rss.shape(), std::move(scores), out_names);
  map.degenerate_mask = Tensor(parts.rss.shape(), std::move(mask), out_names);
  map.metric_name = "dim-r2";
  map.spec = resolved;
  return map;
}

double r2_1d(const Tensor& y, const Tensor& yhat, const MetricOptions& options) {
  if (y.rank() != 1 || yhat.rank() != 1) throw ShapeError("r2 requires rank-1 input");
  require_same_shape(y, yhat);
  if (y.size() < 2) throw DegenerateInputError("r2 requires at least 2 observations");
  return r2_series(y.data(), yhat.data(), options);
}

double mean_r2(const Tensor& y, const Tensor& yhat, std::size_t channel_axis,
               const MetricOptions& options) {
  require_same_shape(y, yhat);
  require_rank2(y, channel_axis);
  if (y.shape()[1 - channel_axis] < 2) {
    throw DegenerateInputError("r2 requires at least 2 observations per channel");
  }
  const std::size_t n_channels = y.shape()[channel_axis];
  detail::NeumaierSum total;
  for (std::size_t c = 0; c < n_channels; ++c) {
    total.add(r2_series(channel_values(y, channel_axis, c), channel_values(yhat, channel_axis, c),
                        options));
  }
  return total.value() / static_cast<double>(n_channels);
}

double variance_weighted_mean_r2(const Tensor& y, const Tensor& yhat, std::size_t channel_axis,
                                 const MetricOptions& options) {
  (void)options;
  require_same_shape(y, yhat);
  require_rank2(y, channel_axis);
  const std::size_t n_channels = y.shape()[channel_axis];
  detail::NeumaierSum weighted;
  detail::NeumaierSum weights;
  bool any = false;
  for (std::size_t c = 0; c < n_channels; ++c) {
    const auto yc = channel_values(y, channel_axis, c);
    const auto hc = channel_values(yhat, channel_axis, c);
    const double mean = sum_of(yc) / static_cast<double>(yc.size());
    const double var = sum_sq_dev(yc, mean);
    if (var <= series_threshold(yc)) continue;  // constant channel, zero weight
    const double rss = sum_sq_diff(yc, hc);
    weighted.add(var * (1.0 - rss / var));
    weights.add(var);
    any = true;
  }
  if (!any) throw DegenerateInputError("all channels constant: no variance to weight by");
  return weighted.value() / weights.value();
}

double mse(const Tensor& y, const Tensor& yhat) {
  require_same_shape(y, yhat);
  return sum_sq_diff(y.data(), yhat.data()) / static_cast<double>(y.size());
}

double mae(const Tensor& y, const Tensor& yhat) {
  require_same_shape(y, yhat);
  const auto yd = y.data();
  const auto hd = yhat.data();
  detail::NeumaierSum acc;
  for (std::size_t i = 0; i < yd.size(); ++i) acc.add(std::abs(yd[i] - hd[i]));
  return acc.value() / static_cast<double>(yd.size());
}

double d2_absolute_error(const Tensor& y, const Tensor& yhat) {
  if (y.rank() != 1 || yhat.rank() != 1) throw ShapeError("d2 requires rank-1 input");
  require_same_shape(y, yhat);
  if (y.size() < 2) throw DegenerateInputError("d2 requires at least 2 observations");
  return d2_series(y.data(), yhat.data());
}

double mean_d2(const Tensor& y, const Tensor& yhat, std::size_t channel_axis) {
  require_same_shape(y, yhat);
  require_rank2(y, channel_axis);
  const std::size_t n_channels = y.shape()[channel_axis];
  detail::NeumaierSum total;
  for (std::size_t c = 0; c < n_channels; ++c) {
    total.add(d2_series(channel_values(y, channel_axis, c), channel_values(yhat, channel_axis, c)));
  }
  return total.value() / static_cast<double>(n_channels);
}

double explained_variance(const Tensor& y, const Tensor& yhat, const MetricOptions& options) {
  if (y.rank() != 1 || yhat.rank() != 1) throw ShapeError("ev requires rank-1 input");
  require_same_shape(y, yhat);
  if (y.size() < 2) throw DegenerateInputError("ev requires at least 2 observations");
  return ev_series(y.data(), yhat.data(), options);
}

double mean_ev(const Tensor& y, const Tensor& yhat, std::size_t channel_axis,
               const MetricOptions& options) {
  require_same_shape(y, yhat);
  require_rank2(y, channel_axis);
  const std::size_t n_channels = y.shape()[channel_axis];
  detail::NeumaierSum total;
  for (std::size_t c = 0; c < n_channels; ++c) {
    total.add(ev_series(channel_values(y, channel_axis, c), channel_values(yhat, channel_axis, c),
                        options));
  }
  return total.value() / static_cast<double>(n_channels);
}

double variance_weighted_ev(const Tensor& y, const Tensor& yhat, std::size_t channel_axis,
                            const MetricOptions& options) {
  require_same_shape(y, yhat);
  require_rank2(y, channel_axis);
  const std::size_t n_channels = y.shape()[channel_axis];
  detail::NeumaierSum weighted;
  detail::NeumaierSum weights;
  bool any = false;
  for (std::size_t c = 0; c < n_channels; ++c) {
    const auto yc = channel_values(y, channel_axis, c);
    const auto hc = channel_values(yhat, channel_axis, c);
    const double mean = sum_of(yc) / static_cast<double>(yc.size());
    const double var = sum_sq_dev(yc, mean);
    if (var <= series_threshold(yc)) continue;
    weighted.add(var * ev_series(yc, hc, options));
    weights.add(var);
    any = true;
  }
  if (!any) throw DegenerateInputError("all channels constant: no variance to weight by");
  return weighted.value() / weights.value();
}

double pearson_corr(const Tensor& y, const Tensor& yhat) {
  if (y.rank() != 1 || yhat.rank() != 1) throw ShapeError("corr requires rank-1 input");
  require_same_shape(y, yhat);
  if (y.size() < 2) throw DegenerateInputError("corr requires at least 2 observations");
  return corr_series(y.data(), yhat.data());
}

double mean_corr(const Tensor& y, const Tensor& yhat, std::size_t channel_axis) {
  require_same_shape(y, yhat);
  require_rank2(y, channel_axis);
  const std::size_t n_channels = y.shape()[channel_axis];
  detail::NeumaierSum total;
  for (std::size_t c = 0; c < n_channels; ++c) {
    total.add(
        corr_series(channel_values(y, channel_axis, c), channel_values(yhat, channel_axis, c)));
  }
  return total.value() / static_cast<double>(n_channels);
}

ScoreMap per_channel_r2(const Tensor& y, const Tensor& yhat, std::size_t channel_axis,
                        const MetricOptions& options) {
  return per_channel_map(y, yhat, channel_axis, "r2-per-channel",
                         [&](std::span<const double> yc, std::span<const double> hc,
                             double& mask) {
                           const double mean = sum_of(yc) / static_cast<double>(yc.size());
                           if (sum_sq_dev(yc, mean) <= series_threshold(yc)) mask = 1.0;
                           return r2_series(yc, hc, options);
                         });
}

ScoreMap per_channel_d2(const Tensor& y, const Tensor& yhat, std::size_t channel_axis) {
  return per_channel_map(y, yhat, channel_axis, "d2-per-channel",
                         [](std::span<const double> yc, std::span<const double> hc, double& mask) {
                           const double mean = sum_of(yc) / static_cast<double>(yc.size());
                           detail::NeumaierSum den;
                           for (double v : yc) den.add(std::abs(v - mean));
                           detail::NeumaierSum abs_sum;
                           for (double v : yc) abs_sum.add(std::abs(v));
                           if (den.value() <= kRelativeZero * abs_sum.value()) mask = 1.0;
                           return d2_series(yc, hc);
                         });
}

ScoreMap per_channel_ev(const Tensor& y, const Tensor& yhat, std::size_t channel_axis,
                        const MetricOptions& options) {
  return per_channel_map(y, yhat, channel_axis, "ev-per-channel",
                         [&](std::span<const double> yc, std::span<const double> hc,
                             double& mask) {
                           const double mean = sum_of(yc) / static_cast<double>(yc.size());
                           if (sum_sq_dev(yc, mean) <= series_threshold(yc)) mask = 1.0;
                           return ev_series(yc, hc, options);
                         });
}

ScoreMap per_channel_corr(const Tensor& y, const Tensor& yhat, std::size_t channel_axis) {
  return per_channel_map(y, yhat, channel_axis, "corr-per-channel",
                         [](std::span<const double> yc, std::span<const double> hc, double&) {
                           return corr_series(yc, hc);
                         });
}

Tensor per_channel_mse(const Tensor& y, const Tensor& yhat, std::size_t channel_axis) {
  require_same_shape(y, yhat);
  require_rank2(y, channel_axis);
  const std::size_t n_channels = y.shape()[channel_axis];
  std::vector<double> out(n_channels);
  for (std::size_t c = 0; c < n_channels; ++c) {
    const auto yc = channel_values(y, channel_axis, c);
    const auto hc = channel_values(yhat, channel_axis, c);
    out[c] = sum_sq_diff(yc, hc) / static_cast<double>(yc.size());
  }
  Tensor::Names names;
  if (y.has_names()) names.push_back(y.names()[channel_axis]);
  return Tensor({n_channels}, std::move(out), std::move(names));
}

Tensor per_channel_mae(const Tensor& y, const Tensor& yhat, std::size_t channel_axis) {
  require_same_shape(y, yhat);
  require_rank2(y, channel_axis);
  const std::size_t n_channels = y.shape()[channel_axis];
  std::vector<double> out(n_channels);
  for (std::size_t c = 0; c < n_channels; ++c) {
    const auto yc = channel_values(y, channel_axis, c);
    const auto hc = channel_values(yhat, channel_axis, c);
    detail::NeumaierSum acc;
    for (std::size_t i = 0; i < yc.size(); ++i) acc.add(std::abs(yc[i] - hc[i]));
    out[c] = acc.value() / static_cast<double>(yc.size());
  }
  Tensor::Names names;
  if (y.has_names()) names.push_back(y.names()[channel_axis]);
  return Tensor({n_channels}, std::move(out), std::move(names));
}

}  // namespace dimr2
