#include "radix/tensor.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "byte_io.hpp"

namespace radix {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::ConstantTensor: return "constant tensor";
    case Errc::NonFinite: return "non-finite value";
    case Errc::BadMax: return "bad pre-activation max";
    case Errc::OutOfAlphabet: return "value outside alphabet";
    case Errc::ReadVoltageExceedsThreshold: return "read voltage exceeds switching threshold";
    case Errc::DimensionMismatch: return "dimension mismatch";
    case Errc::KernelTooLarge: return "kernel too large";
    case Errc::ShapeMismatch: return "shape mismatch";
    case Errc::StaleCache: return "stale cache";
    case Errc::EmptyDataset: return "empty dataset";
    case Errc::InvalidArgument: return "invalid argument";
    case Errc::Parse: return "parse error";
    case Errc::Io: return "i/o error";
  }
  return "unknown error";
}

std::size_t element_count(const Shape& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::string shape_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "x" : "") << shape[i];
  os << ']';
  return os.str();
}

QuantizedTensor::QuantizedTensor(IntTensor t, int lo_, int hi_)
    : IntTensor(std::move(t)), lo(lo_), hi(hi_) {
  if (lo > hi) throw Error(Errc::InvalidArgument, "quantized bounds are inverted");
  if (size() > 0 && (values.minCoeff() < lo || values.maxCoeff() > hi)) {
    throw Error(Errc::OutOfAlphabet, "quantized tensor has values outside [" +
                                         std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

void require_finite(const RealTensor& t) {
  if (!t.values.isFinite().all()) throw Error(Errc::NonFinite, "tensor contains NaN or inf");
}

namespace {

constexpr std::uint8_t kDtypeF64 = 0;
constexpr std::uint8_t kDtypeI32 = 1;

void write_header(std::ostream& out, std::uint8_t dtype, const Shape& shape) {
  if (shape.size() > 255) throw Error(Errc::InvalidArgument, "RXT1 rank is limited to 255");
  out.write("RXT1", 4);
  detail::put_u8(out, dtype);
  detail::put_u8(out, static_cast<std::uint8_t>(shape.size()));
  for (auto d : shape) {
    if (d > 0xffffffffu) throw Error(Errc::InvalidArgument, "RXT1 dimension exceeds u32");
    detail::put_u32(out, static_cast<std::uint32_t>(d));
  }
}

}  // namespace

void write_rxt(std::ostream& out, const RealTensor& t) {
  write_header(out, kDtypeF64, t.shape);
  for (double v : t.values) detail::put_f64(out, v);
}

void write_rxt(std::ostream& out, const IntTensor& t) {
  write_header(out, kDtypeI32, t.shape);
  for (std::int32_t v : t.values) detail::put_u32(out, static_cast<std::uint32_t>(v));
}

AnyTensor read_rxt(std::istream& in) {
  detail::expect_magic(in, "RXT1");
  const auto dtype = detail::get_u8(in, "RXT1 dtype");
  const auto rank = detail::get_u8(in, "RXT1 rank");
  Shape shape(rank);
  for (auto& d : shape) d = detail::get_u32(in, "RXT1 dims");
  const auto n = static_cast<Eigen::Index>(element_count(shape));
  if (dtype == kDtypeF64) {
    RealTensor::Values v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = detail::get_f64(in, "RXT1 payload");
    return RealTensor(std::move(shape), std::move(v));
  }
  if (dtype == kDtypeI32) {
    IntTensor::Values v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      v[i] = static_cast<std::int32_t>(detail::get_u32(in, "RXT1 payload"));
    }
    return IntTensor(std::move(shape), std::move(v));
  }
  throw Error(Errc::Parse, "unknown RXT1 dtype tag " + std::to_string(dtype));
}

void save_rxt(const std::string& path, const AnyTensor& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot open " + path + " for writing");
  std::visit([&](const auto& x) { write_rxt(out, x); }, t);
  if (!out) throw Error(Errc::Io, "write failed for " + path);
}

AnyTensor load_rxt(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  return read_rxt(in);
}

}  // namespace radix
