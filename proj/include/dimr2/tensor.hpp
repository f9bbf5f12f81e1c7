#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "dimr2/errors.hpp"

namespace dimr2 {

/// Dense n-dimensional array of 64-bit reals in row-major order, with
/// optional per-axis names. Immutable after construction; all operations
/// on tensors are pure functions and safe to call concurrently.
///
/// Rank 0 is a scalar (empty shape, one data element). Zero extents and
/// duplicate axis names are rejected at construction.
class Tensor {
 public:
  using Shape = std::vector<std::size_t>;
  using Names = std::vector<std::string>;

  /// Rank-0 zero scalar.
  Tensor();

  /// General constructor. `names` must be empty or have one distinct,
  /// non-empty label per axis.
  Tensor(Shape shape, std::vector<double> data, Names names = {});

  /// Rank-1 tensor from values.
  Tensor(std::initializer_list<double> values);

  /// Rank-2 tensor from rows.
  Tensor(std::initializer_list<std::initializer_list<double>> rows);

  static Tensor scalar(double value);
  static Tensor zeros(Shape shape, Names names = {});
  static Tensor full(Shape shape, double value, Names names = {});

  std::size_t rank() const noexcept { return shape_.size(); }
  const Shape& shape() const noexcept { return shape_; }
  std::size_t extent(std::size_t axis) const;
  std::size_t size() const noexcept { return data_.size(); }

  std::span<const double> data() const noexcept { return data_; }
  double at_flat(std::size_t flat) const;
  double at(std::initializer_list<std::size_t> index) const;
  double at(std::span<const std::size_t> index) const;

  bool has_names() const noexcept { return !names_.empty(); }
  const Names& names() const noexcept { return names_; }
  const std::string& name_of(std::size_t axis) const;
  /// Index of the axis with the given name. Throws AxisError if unknown.
  std::size_t axis_index(const std::string& name) const;

  /// Copy of this tensor carrying the given axis names (or none).
  Tensor with_names(Names names) const;
  Tensor without_names() const;

  /// Row-major strides, in elements.
  Shape strides() const;

  /// Value of the single element; throws ShapeError unless rank 0.
  double item() const;

  bool same_shape(const Tensor& other) const noexcept { return shape_ == other.shape_; }

 private:
  Shape shape_;
  std::vector<double> data_;
  Names names_;
};

/// Ordered set of distinct axis indices, kept sorted ascending.
class AxisSet {
 public:
  AxisSet() = default;
  /// Throws AxisError on duplicate indices.
  explicit AxisSet(std::vector<std::size_t> indices);
  AxisSet(std::initializer_list<std::size_t> indices);

  /// {0, 1, ..., rank-1}.
  static AxisSet all(std::size_t rank);

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  bool contains(std::size_t axis) const;

  /// Throws AxisError if any index is >= rank.
  void validate_for_rank(std::size_t rank) const;

  AxisSet unite(const AxisSet& other) const;
  AxisSet subtract(const AxisSet& other) const;
  AxisSet intersect(const AxisSet& other) const;
  bool is_subset_of(const AxisSet& other) const;
  /// All axes in [0, rank) not contained in this set.
  AxisSet complement(std::size_t rank) const;

  bool operator==(const AxisSet& other) const noexcept { return indices_ == other.indices_; }

 private:
  std::vector<std::size_t> indices_;
};

/// Sum over the given axes; the result has shape D \ axes (reduced axes
/// removed, remaining order preserved, names carried along).
///
/// Each output cell accumulates its inputs in row-major order of the
/// removed axes using Neumaier-compensated summation, so results are
/// bit-reproducible run to run.
Tensor reduce_sum(const Tensor& t, const AxisSet& axes);

/// reduce_sum divided by the number of elements removed per cell.
Tensor reduce_mean(const Tensor& t, const AxisSet& axes);

enum class ElemOp { Add, Sub, Mul, Div };

namespace detail {

struct BroadcastPlan {
  Tensor::Shape shape;
  Tensor::Names names;
  // Per result axis: element stride into each operand, 0 where the operand
  // lacks the axis.
  std::vector<std::size_t> a_strides;
  std::vector<std::size_t> b_strides;
};

BroadcastPlan plan_broadcast(const Tensor& a, const Tensor& b);

}  // namespace detail

/// Combine two tensors elementwise under broadcasting.
///
/// Alignment is by axis name when both operands carry names (a rank-0
/// operand always qualifies), by trailing position otherwise. An axis
/// present in both operands must have matching extents (BroadcastError
/// otherwise); an axis missing from one operand is stretched. The result
/// holds a's axes in order followed by b's remaining axes.
template <typename F>
Tensor broadcast_combine(const Tensor& a, const Tensor& b, F&& op) {
  const auto plan = detail::plan_broadcast(a, b);
  std::size_t total = 1;
  for (std::size_t e : plan.shape) total *= e;

  std::vector<double> out(total);
  const std::size_t rank = plan.shape.size();
  std::vector<std::size_t> index(rank, 0);
  std::size_t a_off = 0;
  std::size_t b_off = 0;
  const auto a_data = a.data();
  const auto b_data = b.data();
  for (std::size_t flat = 0; flat < total; ++flat) {
    out[flat] = op(a_data[a_off], b_data[b_off]);
    for (std::size_t d = rank; d-- > 0;) {
      ++index[d];
      a_off += plan.a_strides[d];
      b_off += plan.b_strides[d];
      if (index[d] < plan.shape[d]) break;
      index[d] = 0;
      a_off -= plan.a_strides[d] * plan.shape[d];
      b_off -= plan.b_strides[d] * plan.shape[d];
    }
  }
  return Tensor(plan.shape, std::move(out), plan.names);
}

Tensor broadcast_combine(const Tensor& a, const Tensor& b, ElemOp op);

/// Elementwise unary map; shape and names preserved.
template <typename F>
Tensor transform(const Tensor& t, F&& f) {
  std::vector<double> out(t.size());
  const auto in = t.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(in[i]);
  return Tensor(t.shape(), std::move(out), t.names());
}

}  // namespace dimr2
