#include "dimr2/axes.hpp"

#include <charconv>

namespace dimr2 {

std::vector<std::string> ResolvedSpec::axis_labels(const AxisSet& set) const {
  std::vector<std::string> out;
  out.reserve(set.size());
  for (std::size_t a : set.indices()) {
    out.push_back(names.empty() ? std::to_string(a) : names[a]);
  }
  return out;
}

ResolvedSpec resolve(const AxisSpec& spec, std::size_t rank, const Tensor::Names& names) {
  if (!names.empty() && names.size() != rank) {
    throw AxisError("axis name count does not match rank");
  }
  if (spec.axis.empty()) throw SpecError("axis must not be empty");
  spec.axis.validate_for_rank(rank);

  ResolvedSpec rs;
  rs.rank = rank;
  rs.names = names;
  rs.axis = spec.axis;
  rs.axis_norm = spec.axis_norm.value_or(rs.axis);
  rs.axis_norm.validate_for_rank(rank);
  rs.axis_pool = spec.axis_pool.value_or(rs.axis_norm);
  rs.axis_pool.validate_for_rank(rank);

  if (!rs.axis_norm.is_subset_of(rs.axis_pool)) {
    throw SpecError("axis-norm must be a subset of axis-pool");
  }

  rs.pool_minus_axis = rs.axis_pool.subtract(rs.axis);
  rs.output_axes = rs.axis.complement(rank);
  rs.tss_axes = rs.axis_pool.unite(rs.axis).complement(rank);
  return rs;
}

AxisSet parse_axis_list(const std::string& csv, std::size_t rank, const Tensor::Names& names) {
  std::vector<std::size_t> indices;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t comma = csv.find(',', pos);
    if (comma == std::string::npos) comma = csv.size();
    std::string token = csv.substr(pos, comma - pos);
    // Trim surrounding whitespace.
    while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.erase(0, 1);
    while (!token.empty() && (token.back() == ' ' || token.back() == '\t')) token.pop_back();
    pos = comma + 1;
    if (token.empty()) {
      if (csv.empty()) break;
      throw AxisError("empty token in axis list '" + csv + "'");
    }

    bool matched = false;
    for (std::size_t d = 0; d < names.size(); ++d) {
      if (names[d] == token) {
        indices.push_back(d);
        matched = true;
        break;
      }
    }
    if (!matched) {
      std::size_t value = 0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw AxisError("unknown axis '" + token + "'");
      }
      if (value >= rank) {
        throw AxisError("axis " + std::to_string(value) + " out of range for rank " +
                        std::to_string(rank));
      }
      indices.push_back(value);
    }
    if (comma == csv.size()) break;
  }
  return AxisSet(std::move(indices));
}

}  // namespace dimr2
