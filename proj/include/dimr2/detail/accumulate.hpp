#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace dimr2::detail {

/// Neumaier-compensated accumulator. Sequential and deterministic; the
/// compensation term keeps long sums accurate to a few ulps regardless of
/// cancellation in the inputs.
struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + comp; }
};

inline double compensated_sum(std::span<const double> values) {
  NeumaierSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

}  // namespace dimr2::detail
