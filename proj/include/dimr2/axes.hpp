#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dimr2/tensor.hpp"

namespace dimr2 {

/// The (axis, axis_norm, axis_pool) argument triple before defaulting.
///
/// `axis` selects the dimensions collapsed into observations and fixes the
/// output shape. `axis_norm` selects the dimensions the normalizing mean is
/// measured along (defaults to `axis`); `axis_pool` selects the dimensions
/// the total sum of squares is averaged over for a more stable normalizer
/// (defaults to `axis_norm`, and must contain it).
struct AxisSpec {
  AxisSet axis;
  std::optional<AxisSet> axis_norm;
  std::optional<AxisSet> axis_pool;
};

/// Fully defaulted and validated spec plus the derived sets every scoring
/// shape is built from.
struct ResolvedSpec {
  AxisSet axis;
  AxisSet axis_norm;
  AxisSet axis_pool;
  AxisSet pool_minus_axis;  // axis_pool \ axis
  AxisSet output_axes;      // D \ axis
  AxisSet tss_axes;         // D \ (axis_pool ∪ axis)
  std::size_t rank = 0;
  Tensor::Names names;      // target tensor axis names, when it has any

  std::vector<std::string> axis_labels(const AxisSet& set) const;
};

/// Apply defaults, validate, and derive the output/pool/tss axis sets for a
/// tensor of the given rank (and axis names, when available).
///
/// Throws SpecError for an empty `axis` or when axis_norm is not a subset of
/// axis_pool; AxisError for out-of-range indices.
ResolvedSpec resolve(const AxisSpec& spec, std::size_t rank, const Tensor::Names& names = {});

/// Parse a comma-separated axis list into indices. Each token is matched
/// against the axis names first (when present), then read as a zero-based
/// index. Throws AxisError for unknown tokens.
AxisSet parse_axis_list(const std::string& csv, std::size_t rank, const Tensor::Names& names = {});

}  // namespace dimr2
