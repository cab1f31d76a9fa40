#pragma once

#include <stdexcept>
#include <string>

namespace fbk {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different rings.
class DescriptorMismatch : public Error {
 public:
  using Error::Error;
};

/// Matrix dimensions do not fit the operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// The operation is not decidable (or not implemented) over this ring family.
class Unsupported : public Error {
 public:
  using Error::Error;
};

class NotLocallyBrunovsky : public Error {
 public:
  using Error::Error;
};

class NotReachable : public Error {
 public:
  using Error::Error;
};

/// Malformed text: element literal, polynomial or system file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace fbk
