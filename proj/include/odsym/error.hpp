#pragma once

#include <stdexcept>
#include <string>

namespace odsym {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File could not be opened, read or written.
struct IoError : Error {
  using Error::Error;
};

// File was read but its content is not acceptable (bad header, negative or
// asymmetric entries, ragged CSV rows, ...).
struct FormatError : IoError {
  using IoError::IoError;
};

// A caller violated an operation's precondition (shapes, ranges, sizes).
struct PreconditionError : Error {
  using Error::Error;
};

}  // namespace odsym
