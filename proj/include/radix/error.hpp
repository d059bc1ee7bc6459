#pragma once

#include <stdexcept>
#include <string>

namespace radix {

enum class Errc {
  ConstantTensor,
  NonFinite,
  BadMax,
  OutOfAlphabet,
  ReadVoltageExceedsThreshold,
  DimensionMismatch,
  KernelTooLarge,
  ShapeMismatch,
  StaleCache,
  EmptyDataset,
  InvalidArgument,
  Parse,
  Io,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

  // I/O and parse failures map to exit code 1, everything else is a domain error.
  bool is_io() const noexcept { return code_ == Errc::Io || code_ == Errc::Parse; }

 private:
  Errc code_;
};

}  // namespace radix
