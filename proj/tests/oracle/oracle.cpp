#include "oracle/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dimr2::oracle {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double degenerate_value(DegeneratePolicy policy) {
  return policy == DegeneratePolicy::Zero ? 0.0 : -std::numeric_limits<double>::infinity();
}

double zero_tau(const std::vector<double>& y) {
  double abs_sum = 0.0;
  for (double v : y) abs_sum += std::abs(v);
  const double mean_abs = abs_sum / static_cast<double>(y.size());
  return 1e-12 * mean_abs * mean_abs;
}

// Visit every index tuple of the given axes (ascending axis order, last
// axis fastest). With no axes the body runs once on an empty tuple.
template <typename F>
void for_each_tuple(const std::vector<std::size_t>& axes, const Tensor::Shape& shape, F&& body) {
  std::vector<std::size_t> tuple(axes.size(), 0);
  while (true) {
    body(tuple);
    if (axes.empty()) return;
    std::size_t d = axes.size();
    while (true) {
      --d;
      if (++tuple[d] < shape[axes[d]]) break;
      tuple[d] = 0;
      if (d == 0) return;
    }
  }
}

std::size_t tuple_count(const std::vector<std::size_t>& axes, const Tensor::Shape& shape) {
  std::size_t n = 1;
  for (std::size_t a : axes) n *= shape[a];
  return n;
}

// Mixed-radix flat index of the full-index values restricted to `axes`.
std::size_t restricted_flat(const std::vector<std::size_t>& full,
                            const std::vector<std::size_t>& axes, const Tensor::Shape& shape) {
  std::size_t flat = 0;
  for (std::size_t a : axes) flat = flat * shape[a] + full[a];
  return flat;
}

void scatter(std::vector<std::size_t>& full, const std::vector<std::size_t>& axes,
             const std::vector<std::size_t>& tuple) {
  for (std::size_t k = 0; k < axes.size(); ++k) full[axes[k]] = tuple[k];
}

std::vector<std::size_t> axes_not_in(std::size_t rank, const std::vector<std::size_t>& a,
                                     const std::vector<std::size_t>& b = {}) {
  std::vector<std::size_t> out;
  for (std::size_t d = 0; d < rank; ++d) {
    if (std::find(a.begin(), a.end(), d) == a.end() &&
        std::find(b.begin(), b.end(), d) == b.end()) {
      out.push_back(d);
    }
  }
  return out;
}

std::vector<double> channel(const Tensor& t, std::size_t c) {
  std::vector<double> out(t.shape()[0]);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = t.at({i, c});
  return out;
}

}  // namespace

ScoreMap naive_dim_r2(const Tensor& y, const Tensor& yhat, const AxisSpec& spec,
                      DegeneratePolicy policy) {
  if (!y.same_shape(yhat)) throw ShapeError("y and yhat must have identical shapes");
  const std::size_t rank = y.rank();
  const Tensor::Shape& shape = y.shape();

  // Defaulting and validation, transcribed rather than shared.
  if (spec.axis.empty()) throw SpecError("axis must not be empty");
  spec.axis.validate_for_rank(rank);
  const AxisSet norm_set = spec.axis_norm.value_or(spec.axis);
  norm_set.validate_for_rank(rank);
  const AxisSet pool_set = spec.axis_pool.value_or(norm_set);
  pool_set.validate_for_rank(rank);
  if (!norm_set.is_subset_of(pool_set)) {
    throw SpecError("axis-norm must be a subset of axis-pool");
  }

  const std::vector<std::size_t> A = spec.axis.indices();
  const std::vector<std::size_t> An = norm_set.indices();
  const std::vector<std::size_t> pool_minus_a = pool_set.subtract(spec.axis).indices();
  const std::vector<std::size_t> out_axes = axes_not_in(rank, A);
  const std::vector<std::size_t> ybar_axes = axes_not_in(rank, An);
  const std::vector<std::size_t> tss_axes = axes_not_in(rank, A, pool_minus_a);

  double abs_sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) abs_sum += std::abs(y.at_flat(i));
  const double mean_abs = abs_sum / static_cast<double>(y.size());
  const double tau = 1e-12 * mean_abs * mean_abs;

  // Mean of y over the normalization axes.
  std::vector<double> ybar(tuple_count(ybar_axes, shape), 0.0);
  const double norm_count = static_cast<double>(tuple_count(An, shape));
  {
    std::vector<std::size_t> full(rank, 0);
    for_each_tuple(ybar_axes, shape, [&](const std::vector<std::size_t>& outer) {
      scatter(full, ybar_axes, outer);
      double sum = 0.0;
      for_each_tuple(An, shape, [&](const std::vector<std::size_t>& inner) {
        scatter(full, An, inner);
        sum += y.at(full);
      });
      ybar[restricted_flat(full, ybar_axes, shape)] = sum / norm_count;
    });
  }

  // Pooled total sum of squares: summed over axis and pool-minus-axis,
  // averaged over the latter.
  std::vector<double> tss(tuple_count(tss_axes, shape), 0.0);
  {
    const double pool_count =
        pool_minus_a.empty() ? 1.0 : static_cast<double>(tuple_count(pool_minus_a, shape));
    std::vector<std::size_t> full(rank, 0);
    for_each_tuple(tss_axes, shape, [&](const std::vector<std::size_t>& outer) {
      scatter(full, tss_axes, outer);
      double sum = 0.0;
      for_each_tuple(pool_minus_a, shape, [&](const std::vector<std::size_t>& pool_tuple) {
        scatter(full, pool_minus_a, pool_tuple);
        for_each_tuple(A, shape, [&](const std::vector<std::size_t>& inner) {
          scatter(full, A, inner);
          const double dev = y.at(full) - ybar[restricted_flat(full, ybar_axes, shape)];
          sum += dev * dev;
        });
      });
      tss[restricted_flat(full, tss_axes, shape)] = sum / pool_count;
    });
  }

  // Residual sum of squares and the final scores.
  Tensor::Shape out_shape;
  Tensor::Names out_names;
  for (std::size_t a : out_axes) {
    out_shape.push_back(shape[a]);
    if (y.has_names()) out_names.push_back(y.names()[a]);
  }
  std::vector<double> scores(tuple_count(out_axes, shape), 0.0);
  std::vector<double> mask(scores.size(), 0.0);
  {
    std::vector<std::size_t> full(rank, 0);
    for_each_tuple(out_axes, shape, [&](const std::vector<std::size_t>& outer) {
      scatter(full, out_axes, outer);
      double rss = 0.0;
      for_each_tuple(A, shape, [&](const std::vector<std::size_t>& inner) {
        scatter(full, A, inner);
        const double r = y.at(full) - yhat.at(full);
        rss += r * r;
      });
      const std::size_t out_flat = restricted_flat(full, out_axes, shape);
      const double t = tss[restricted_flat(full, tss_axes, shape)];
      if (t <= tau) {
        mask[out_flat] = 1.0;
        scores[out_flat] = rss <= tau ? 1.0 : degenerate_value(policy);
      } else {
        scores[out_flat] = 1.0 - rss / t;
      }
    });
  }

  ScoreMap map;
  map.scores = Tensor(out_shape, std::move(scores), out_names);
  map.degenerate_mask = Tensor(out_shape, std::move(mask), out_names);
  map.metric_name = "naive-dim-r2";
  map.spec = resolve(spec, rank, y.names());
  return map;
}

double naive_r2(const std::vector<double>& y, const std::vector<double>& yhat,
                DegeneratePolicy policy) {
  double rss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) rss += (y[i] - yhat[i]) * (y[i] - yhat[i]);
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double tss = 0.0;
  for (double v : y) tss += (v - mean) * (v - mean);
  const double tau = zero_tau(y);
  if (tss <= tau) return rss <= tau ? 1.0 : degenerate_value(policy);
  return 1.0 - rss / tss;
}

double naive_d2(const std::vector<double>& y, const std::vector<double>& yhat) {
  double num = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) num += std::abs(y[i] - yhat[i]);
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double den = 0.0;
  double abs_sum = 0.0;
  for (double v : y) {
    den += std::abs(v - mean);
    abs_sum += std::abs(v);
  }
  const double tau = 1e-12 * abs_sum;
  if (den <= tau) {
    if (num <= tau) return 1.0;
    throw DegenerateInputError("constant target");
  }
  return 1.0 - num / den;
}

double naive_ev(const std::vector<double>& y, const std::vector<double>& yhat,
                DegeneratePolicy policy) {
  const double n = static_cast<double>(y.size());
  double resid_mean = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) resid_mean += y[i] - yhat[i];
  resid_mean /= n;
  double resid_var = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - yhat[i] - resid_mean;
    resid_var += r * r;
  }
  double y_mean = 0.0;
  for (double v : y) y_mean += v;
  y_mean /= n;
  double y_var = 0.0;
  for (double v : y) y_var += (v - y_mean) * (v - y_mean);
  const double tau = zero_tau(y);
  if (y_var <= tau) return resid_var <= tau ? 1.0 : degenerate_value(policy);
  return 1.0 - resid_var / y_var;
}

double naive_corr(const std::vector<double>& y, const std::vector<double>& yhat) {
  const double n = static_cast<double>(y.size());
  double my = 0.0;
  double mh = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    my += y[i];
    mh += yhat[i];
  }
  my /= n;
  mh /= n;
  double cov = 0.0;
  double vy = 0.0;
  double vh = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    cov += (y[i] - my) * (yhat[i] - mh);
    vy += (y[i] - my) * (y[i] - my);
    vh += (yhat[i] - mh) * (yhat[i] - mh);
  }
  if (vy <= zero_tau(y) || vh <= zero_tau(yhat)) {
    throw DegenerateInputError("correlation undefined for constant input");
  }
  return cov / std::sqrt(vy * vh);
}

double naive_mse(const Tensor& y, const Tensor& yhat) {
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y.at_flat(i) - yhat.at_flat(i);
    sum += r * r;
  }
  return sum / static_cast<double>(y.size());
}

double naive_mae(const Tensor& y, const Tensor& yhat) {
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) sum += std::abs(y.at_flat(i) - yhat.at_flat(i));
  return sum / static_cast<double>(y.size());
}

double naive_mean_r2(const Tensor& y, const Tensor& yhat) {
  const std::size_t C = y.shape()[1];
  double sum = 0.0;
  for (std::size_t c = 0; c < C; ++c) sum += naive_r2(channel(y, c), channel(yhat, c));
  return sum / static_cast<double>(C);
}

double naive_varw_r2(const Tensor& y, const Tensor& yhat) {
  const std::size_t C = y.shape()[1];
  double weighted = 0.0;
  double total = 0.0;
  bool any = false;
  for (std::size_t c = 0; c < C; ++c) {
    const auto yc = channel(y, c);
    const auto hc = channel(yhat, c);
    double mean = 0.0;
    for (double v : yc) mean += v;
    mean /= static_cast<double>(yc.size());
    double var = 0.0;
    for (double v : yc) var += (v - mean) * (v - mean);
    if (var <= zero_tau(yc)) continue;
    double rss = 0.0;
    for (std::size_t i = 0; i < yc.size(); ++i) rss += (yc[i] - hc[i]) * (yc[i] - hc[i]);
    weighted += var * (1.0 - rss / var);
    total += var;
    any = true;
  }
  if (!any) throw DegenerateInputError("all channels constant");
  return weighted / total;
}

double naive_mean_d2(const Tensor& y, const Tensor& yhat) {
  const std::size_t C = y.shape()[1];
  double sum = 0.0;
  for (std::size_t c = 0; c < C; ++c) sum += naive_d2(channel(y, c), channel(yhat, c));
  return sum / static_cast<double>(C);
}

double naive_mean_ev(const Tensor& y, const Tensor& yhat) {
  const std::size_t C = y.shape()[1];
  double sum = 0.0;
  for (std::size_t c = 0; c < C; ++c) sum += naive_ev(channel(y, c), channel(yhat, c));
  return sum / static_cast<double>(C);
}

double naive_varw_ev(const Tensor& y, const Tensor& yhat) {
  const std::size_t C = y.shape()[1];
  double weighted = 0.0;
  double total = 0.0;
  bool any = false;
  for (std::size_t c = 0; c < C; ++c) {
    const auto yc = channel(y, c);
    const auto hc = channel(yhat, c);
    double mean = 0.0;
    for (double v : yc) mean += v;
    mean /= static_cast<double>(yc.size());
    double var = 0.0;
    for (double v : yc) var += (v - mean) * (v - mean);
    if (var <= zero_tau(yc)) continue;
    weighted += var * naive_ev(yc, hc);
    total += var;
    any = true;
  }
  if (!any) throw DegenerateInputError("all channels constant");
  return weighted / total;
}

double naive_mean_corr(const Tensor& y, const Tensor& yhat) {
  const std::size_t C = y.shape()[1];
  double sum = 0.0;
  for (std::size_t c = 0; c < C; ++c) sum += naive_corr(channel(y, c), channel(yhat, c));
  return sum / static_cast<double>(C);
}

NaiveBaselines naive_baselines(const Tensor& y, const Tensor& yhat) {
  if (!y.same_shape(yhat)) throw ShapeError("y and yhat must have identical shapes");
  NaiveBaselines out{kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN};
  out.mse = naive_mse(y, yhat);
  out.mae = naive_mae(y, yhat);
  if (y.rank() == 1) {
    std::vector<double> yv(y.data().begin(), y.data().end());
    std::vector<double> hv(yhat.data().begin(), yhat.data().end());
    out.r2 = naive_r2(yv, hv);
    out.d2 = naive_d2(yv, hv);
    out.ev = naive_ev(yv, hv);
    out.corr = naive_corr(yv, hv);
  } else if (y.rank() == 2) {
    out.mean_r2 = naive_mean_r2(y, yhat);
    out.varw_r2 = naive_varw_r2(y, yhat);
    out.mean_d2 = naive_mean_d2(y, yhat);
    out.mean_ev = naive_mean_ev(y, yhat);
    out.varw_ev = naive_varw_ev(y, yhat);
    out.mean_corr = naive_mean_corr(y, yhat);
  }
  return out;
}

}  // namespace dimr2::oracle
