#ifndef CZEST_ERRORS_HPP_
#define CZEST_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace czest {

/// Operation left its mathematical domain (division by an interval
/// containing zero, logarithm of a non-positive interval, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Dimension mismatch between operands.
class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

/// A traced function used an operation outside the supported library.
class UnsupportedOpError : public std::invalid_argument {
 public:
  explicit UnsupportedOpError(const std::string& what)
      : std::invalid_argument(what) {}
};

/// Query on an empty set that has no meaningful answer (interval hull).
class EmptySetError : public std::runtime_error {
 public:
  explicit EmptySetError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed numerical input (NaN cost vector, inverted interval bounds).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Bad run configuration (unknown system, nonsensical limits).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace czest

#endif
