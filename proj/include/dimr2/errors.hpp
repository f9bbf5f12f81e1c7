#pragma once

#include <stdexcept>
#include <string>

namespace dimr2 {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid axis index or unknown axis name.
class AxisError : public Error {
 public:
  using Error::Error;
};

/// Incompatible extents on a shared axis during broadcasting.
class BroadcastError : public Error {
 public:
  using Error::Error;
};

/// Operand shapes do not satisfy an operation's contract.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Input rank outside the range an operation supports.
class RankError : public Error {
 public:
  using Error::Error;
};

/// Invalid axis-specification triple (axis / axis-norm / axis-pool).
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Input too degenerate for the metric (constant series, single sample, ...).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Invalid generator or sweep configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unsupported file content.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Filesystem-level failure (missing file, unwritable destination, ...).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dimr2
