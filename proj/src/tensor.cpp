#include "dimr2/tensor.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "dimr2/detail/accumulate.hpp"

namespace dimr2 {

namespace {

std::size_t shape_product(const Tensor::Shape& shape) {
  std::size_t n = 1;
  for (std::size_t e : shape) n *= e;
  return n;
}

std::string shape_string(const Tensor::Shape& shape) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ",";
    os << shape[i];
  }
  os << ")";
  return os.str();
}

}  // namespace

Tensor::Tensor() : shape_{}, data_{0.0} {}

Tensor::Tensor(Shape shape, std::vector<double> data, Names names)
    : shape_(std::move(shape)), data_(std::move(data)), names_(std::move(names)) {
  for (std::size_t e : shape_) {
    if (e == 0) throw ShapeError("tensor extents must be >= 1, got shape " + shape_string(shape_));
  }
  if (shape_product(shape_) != data_.size()) {
    throw ShapeError("data length " + std::to_string(data_.size()) +
                     " does not match shape " + shape_string(shape_));
  }
  if (!names_.empty()) {
    if (names_.size() != shape_.size()) {
      throw AxisError("axis name count " + std::to_string(names_.size()) +
                      " does not match rank " + std::to_string(shape_.size()));
    }
    std::unordered_set<std::string> seen;
    for (const auto& n : names_) {
      if (n.empty()) throw AxisError("axis names must be non-empty");
      if (!seen.insert(n).second) throw AxisError("duplicate axis name '" + n + "'");
    }
  }
}

Tensor::Tensor(std::initializer_list<double> values)
    : Tensor(Shape{values.size()}, std::vector<double>(values)) {}

Tensor::Tensor(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n_rows = rows.size();
  const std::size_t n_cols = n_rows ? rows.begin()->size() : 0;
  std::vector<double> data;
  data.reserve(n_rows * n_cols);
  for (const auto& row : rows) {
    if (row.size() != n_cols) throw ShapeError("ragged initializer rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  *this = Tensor(Shape{n_rows, n_cols}, std::move(data));
}

Tensor Tensor::scalar(double value) { return Tensor({}, {value}); }

Tensor Tensor::zeros(Shape shape, Names names) {
  std::size_t n = shape_product(shape);
  return Tensor(std::move(shape), std::vector<double>(n, 0.0), std::move(names));
}

Tensor Tensor::full(Shape shape, double value, Names names) {
  std::size_t n = shape_product(shape);
  return Tensor(std::move(shape), std::vector<double>(n, value), std::move(names));
}

std::size_t Tensor::extent(std::size_t axis) const {
  if (axis >= shape_.size()) {
    throw AxisError("axis " + std::to_string(axis) + " out of range for rank " +
                    std::to_string(shape_.size()));
  }
  return shape_[axis];
}

double Tensor::at_flat(std::size_t flat) const {
  if (flat >= data_.size()) throw ShapeError("flat index out of range");
  return data_[flat];
}

double Tensor::at(std::initializer_list<std::size_t> index) const {
  return at(std::span<const std::size_t>(index.begin(), index.size()));
}

double Tensor::at(std::span<const std::size_t> index) const {
  if (index.size() != shape_.size()) throw ShapeError("index rank mismatch");
  std::size_t flat = 0;
  for (std::size_t d = 0; d < shape_.size(); ++d) {
    if (index[d] >= shape_[d]) throw ShapeError("index out of range on axis " + std::to_string(d));
    flat = flat * shape_[d] + index[d];
  }
  return data_[flat];
}

const std::string& Tensor::name_of(std::size_t axis) const {
  if (!has_names()) throw AxisError("tensor has no axis names");
  if (axis >= names_.size()) throw AxisError("axis out of range");
  return names_[axis];
}

std::size_t Tensor::axis_index(const std::string& name) const {
  for (std::size_t d = 0; d < names_.size(); ++d) {
    if (names_[d] == name) return d;
  }
  throw AxisError("unknown axis name '" + name + "'");
}

Tensor Tensor::with_names(Names names) const {
  return Tensor(shape_, data_, std::move(names));
}

Tensor Tensor::without_names() const { return Tensor(shape_, data_); }

Tensor::Shape Tensor::strides() const {
  Shape s(shape_.size(), 1);
  for (std::size_t d = shape_.size(); d-- > 1;) s[d - 1] = s[d] * shape_[d];
  return s;
}

double Tensor::item() const {
  if (!shape_.empty()) throw ShapeError("item() requires a rank-0 tensor");
  return data_[0];
}

AxisSet::AxisSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw AxisError("duplicate axis index in axis set");
  }
}

AxisSet::AxisSet(std::initializer_list<std::size_t> indices)
    : AxisSet(std::vector<std::size_t>(indices)) {}

AxisSet AxisSet::all(std::size_t rank) {
  std::vector<std::size_t> idx(rank);
  for (std::size_t d = 0; d < rank; ++d) idx[d] = d;
  return AxisSet(std::move(idx));
}

bool AxisSet::contains(std::size_t axis) const {
  return std::binary_search(indices_.begin(), indices_.end(), axis);
}

void AxisSet::validate_for_rank(std::size_t rank) const {
  for (std::size_t a : indices_) {
    if (a >= rank) {
      throw AxisError("axis " + std::to_string(a) + " out of range for rank " +
                      std::to_string(rank));
    }
  }
}

AxisSet AxisSet::unite(const AxisSet& other) const {
  std::vector<std::size_t> out;
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                 std::back_inserter(out));
  AxisSet result;
  result.indices_ = std::move(out);
  return result;
}

AxisSet AxisSet::subtract(const AxisSet& other) const {
  std::vector<std::size_t> out;
  std::set_difference(indices_.begin(), indices_.end(), other.indices_.begin(),
                      other.indices_.end(), std::back_inserter(out));
  AxisSet result;
  result.indices_ = std::move(out);
  return result;
}

AxisSet AxisSet::intersect(const AxisSet& other) const {
  std::vector<std::size_t> out;
  std::set_intersection(indices_.begin(), indices_.end(), other.indices_.begin(),
                        other.indices_.end(), std::back_inserter(out));
  AxisSet result;
  result.indices_ = std::move(out);
  return result;
}

bool AxisSet::is_subset_of(const AxisSet& other) const {
  return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(),
                       indices_.end());
}

AxisSet AxisSet::complement(std::size_t rank) const {
  validate_for_rank(rank);
  std::vector<std::size_t> out;
  out.reserve(rank - indices_.size());
  for (std::size_t d = 0; d < rank; ++d) {
    if (!contains(d)) out.push_back(d);
  }
  AxisSet result;
  result.indices_ = std::move(out);
  return result;
}

Tensor reduce_sum(const Tensor& t, const AxisSet& axes) {
  axes.validate_for_rank(t.rank());
  if (axes.empty()) return t;

  const AxisSet kept = axes.complement(t.rank());
  Tensor::Shape out_shape;
  Tensor::Names out_names;
  for (std::size_t d : kept.indices()) {
    out_shape.push_back(t.shape()[d]);
    if (t.has_names()) out_names.push_back(t.names()[d]);
  }
  std::size_t out_size = 1;
  for (std::size_t e : out_shape) out_size *= e;

  // Per input axis: the stride this axis contributes in the output
  // (0 for reduced axes).
  std::vector<std::size_t> out_stride(t.rank(), 0);
  {
    std::size_t stride = 1;
    for (std::size_t k = kept.size(); k-- > 0;) {
      out_stride[kept.indices()[k]] = stride;
      stride *= out_shape[k];
    }
  }

  std::vector<detail::NeumaierSum> acc(out_size);
  const auto data = t.data();
  std::vector<std::size_t> index(t.rank(), 0);
  std::size_t out_off = 0;
  for (std::size_t flat = 0; flat < data.size(); ++flat) {
    acc[out_off].add(data[flat]);
    for (std::size_t d = t.rank(); d-- > 0;) {
      ++index[d];
      out_off += out_stride[d];
      if (index[d] < t.shape()[d]) break;
      index[d] = 0;
      out_off -= out_stride[d] * t.shape()[d];
    }
  }

  std::vector<double> out(out_size);
  for (std::size_t i = 0; i < out_size; ++i) out[i] = acc[i].value();
  return Tensor(std::move(out_shape), std::move(out), std::move(out_names));
}

Tensor reduce_mean(const Tensor& t, const AxisSet& axes) {
  axes.validate_for_rank(t.rank());
  double count = 1.0;
  for (std::size_t d : axes.indices()) count *= static_cast<double>(t.shape()[d]);
  Tensor sums = reduce_sum(t, axes);
  return transform(sums, [count](double v) { return v / count; });
}

namespace detail {

namespace {

// A rank-0 operand aligns trivially under either scheme.
bool effectively_named(const Tensor& t) { return t.rank() == 0 || t.has_names(); }

BroadcastPlan plan_by_name(const Tensor& a, const Tensor& b) {
  BroadcastPlan plan;
  const auto a_strides = a.strides();
  const auto b_strides = b.strides();

  for (std::size_t d = 0; d < a.rank(); ++d) {
    plan.shape.push_back(a.shape()[d]);
    plan.names.push_back(a.names()[d]);
    plan.a_strides.push_back(a_strides[d]);
    std::size_t b_stride = 0;
    for (std::size_t e = 0; e < b.rank(); ++e) {
      if (b.names()[e] == a.names()[d]) {
        if (b.shape()[e] != a.shape()[d]) {
          throw BroadcastError("extent mismatch on axis '" + a.names()[d] + "': " +
                               std::to_string(a.shape()[d]) + " vs " +
                               std::to_string(b.shape()[e]));
        }
        b_stride = b_strides[e];
        break;
      }
    }
    plan.b_strides.push_back(b_stride);
  }
  for (std::size_t e = 0; e < b.rank(); ++e) {
    bool in_a = false;
    for (std::size_t d = 0; d < a.rank(); ++d) {
      if (a.names()[d] == b.names()[e]) {
        in_a = true;
        break;
      }
    }
    if (in_a) continue;
    plan.shape.push_back(b.shape()[e]);
    plan.names.push_back(b.names()[e]);
    plan.a_strides.push_back(0);
    plan.b_strides.push_back(b_strides[e]);
  }
  if (plan.shape.empty()) plan.names.clear();
  return plan;
}

BroadcastPlan plan_by_position(const Tensor& a, const Tensor& b) {
  BroadcastPlan plan;
  const std::size_t rank = std::max(a.rank(), b.rank());
  const auto a_strides = a.strides();
  const auto b_strides = b.strides();

  for (std::size_t d = 0; d < rank; ++d) {
    const bool a_has = d + a.rank() >= rank;
    const bool b_has = d + b.rank() >= rank;
    const std::size_t a_axis = a_has ? d + a.rank() - rank : 0;
    const std::size_t b_axis = b_has ? d + b.rank() - rank : 0;
    std::size_t extent = a_has ? a.shape()[a_axis] : b.shape()[b_axis];
    if (a_has && b_has && a.shape()[a_axis] != b.shape()[b_axis]) {
      throw BroadcastError("extent mismatch at trailing position " + std::to_string(d) + ": " +
                           std::to_string(a.shape()[a_axis]) + " vs " +
                           std::to_string(b.shape()[b_axis]));
    }
    plan.shape.push_back(extent);
    plan.a_strides.push_back(a_has ? a_strides[a_axis] : 0);
    plan.b_strides.push_back(b_has ? b_strides[b_axis] : 0);
  }
  if (a.has_names() && a.rank() == rank) {
    plan.names = a.names();
  } else if (b.has_names() && b.rank() == rank) {
    plan.names = b.names();
  }
  return plan;
}

}  // namespace

BroadcastPlan plan_broadcast(const Tensor& a, const Tensor& b) {
  if (effectively_named(a) && effectively_named(b)) return plan_by_name(a, b);
  return plan_by_position(a, b);
}

}  // namespace detail

Tensor broadcast_combine(const Tensor& a, const Tensor& b, ElemOp op) {
  switch (op) {
    case ElemOp::Add:
      return broadcast_combine(a, b, [](double x, double y) { return x + y; });
    case ElemOp::Sub:
      return broadcast_combine(a, b, [](double x, double y) { return x - y; });
    case ElemOp::Mul:
      return broadcast_combine(a, b, [](double x, double y) { return x * y; });
    case ElemOp::Div:
      return broadcast_combine(a, b, [](double x, double y) { return x / y; });
  }
  throw Error("unreachable elementwise op");
}

}  // namespace dimr2
