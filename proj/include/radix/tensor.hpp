#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "radix/error.hpp"

namespace radix {

using Shape = std::vector<std::size_t>;

std::size_t element_count(const Shape& shape);
std::string shape_string(const Shape& shape);

/// Flat row-major storage with an explicit shape.
template <typename Scalar>
struct Tensor {
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Shape shape;
  Values values;

  Tensor() = default;
  Tensor(Shape s, Values v) : shape(std::move(s)), values(std::move(v)) {
    if (static_cast<std::size_t>(values.size()) != element_count(shape)) {
      throw Error(Errc::ShapeMismatch, "tensor payload has " + std::to_string(values.size()) +
                                           " values for shape " + shape_string(shape));
    }
  }

  template <typename Derived>
  static Tensor from_matrix(const Eigen::MatrixBase<Derived>& m) {
    Matrix rm = m.template cast<Scalar>();
    Values v = Eigen::Map<const Values>(rm.data(), rm.size());
    return Tensor({static_cast<std::size_t>(rm.rows()), static_cast<std::size_t>(rm.cols())},
                  std::move(v));
  }

  std::size_t rank() const noexcept { return shape.size(); }
  Eigen::Index size() const noexcept { return values.size(); }

  /// Row-major 2-D view; rank-1 tensors are viewed as a single column.
  Eigen::Map<const Matrix> matrix() const {
    if (rank() == 2) {
      return {values.data(), static_cast<Eigen::Index>(shape[0]),
              static_cast<Eigen::Index>(shape[1])};
    }
    if (rank() == 1) return {values.data(), static_cast<Eigen::Index>(shape[0]), 1};
    throw Error(Errc::ShapeMismatch, "expected a rank-1 or rank-2 tensor, got shape " +
                                         shape_string(shape));
  }

  bool operator==(const Tensor& o) const {
    return shape == o.shape && values.size() == o.values.size() && (values == o.values).all();
  }
};

using RealTensor = Tensor<double>;
using IntTensor = Tensor<std::int32_t>;

/// Integer tensor whose values are known to lie in [lo, hi].
struct QuantizedTensor : IntTensor {
  int lo = 0;
  int hi = 0;

  QuantizedTensor() = default;
  QuantizedTensor(IntTensor t, int lo_, int hi_);
};

/// Throws NonFinite if any value is NaN or infinite.
void require_finite(const RealTensor& t);

// RXT1: "RXT1", u8 dtype (0 = f64, 1 = i32), u8 rank, rank x u32 dims, payload.
// All fields little-endian, payload row-major.
using AnyTensor = std::variant<RealTensor, IntTensor>;

void write_rxt(std::ostream& out, const RealTensor& t);
void write_rxt(std::ostream& out, const IntTensor& t);
AnyTensor read_rxt(std::istream& in);

void save_rxt(const std::string& path, const AnyTensor& t);
AnyTensor load_rxt(const std::string& path);

}  // namespace radix
