#ifndef IFACE_ERRORS_HPP_
#define IFACE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace iface {

/// Invalid arguments, malformed ids, out-of-range parameters.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Unreadable or semantically inconsistent data files.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failures (singular blocks, non-finite values).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace iface

#endif  // IFACE_ERRORS_HPP_
