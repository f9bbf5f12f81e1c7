#pragma once

// Naive, loop-based reference implementations used only by the test suites
// to certify the vectorized engine. These share the Tensor/AxisSpec/ScoreMap
// types with the library but none of its reduction, broadcasting, or
// accumulation code: every sum here is a plain nested loop over explicit
// index tuples.

#include <vector>

#include "dimr2/axes.hpp"
#include "dimr2/metrics.hpp"
#include "dimr2/tensor.hpp"

namespace dimr2::oracle {

ScoreMap naive_dim_r2(const Tensor& y, const Tensor& yhat, const AxisSpec& spec,
                      DegeneratePolicy policy = DegeneratePolicy::Zero);

double naive_r2(const std::vector<double>& y, const std::vector<double>& yhat,
                DegeneratePolicy policy = DegeneratePolicy::Zero);
double naive_d2(const std::vector<double>& y, const std::vector<double>& yhat);
double naive_ev(const std::vector<double>& y, const std::vector<double>& yhat,
                DegeneratePolicy policy = DegeneratePolicy::Zero);
double naive_corr(const std::vector<double>& y, const std::vector<double>& yhat);

double naive_mse(const Tensor& y, const Tensor& yhat);
double naive_mae(const Tensor& y, const Tensor& yhat);

// Rank-2 forms; channels along the second axis, as in the 2D conventions.
double naive_mean_r2(const Tensor& y, const Tensor& yhat);
double naive_varw_r2(const Tensor& y, const Tensor& yhat);
double naive_mean_d2(const Tensor& y, const Tensor& yhat);
double naive_mean_ev(const Tensor& y, const Tensor& yhat);
double naive_varw_ev(const Tensor& y, const Tensor& yhat);
double naive_mean_corr(const Tensor& y, const Tensor& yhat);

/// Scalar record over all baselines applicable to the input rank; fields
/// that do not apply are NaN.
struct NaiveBaselines {
  double r2, d2, ev, corr;                                      // rank-1
  double mean_r2, varw_r2, mean_d2, mean_ev, varw_ev, mean_corr;  // rank-2
  double mse, mae;                                              // any rank
};

NaiveBaselines naive_baselines(const Tensor& y, const Tensor& yhat);

}  // namespace dimr2::oracle
