#pragma once

#include <stdexcept>
#include <string>

namespace pictk {

// Malformed user input: bad files, bad flags, violated preconditions on
// parameters supplied from outside the library.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Dimension or shape mismatch between library objects.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what)
      : std::invalid_argument(what) {}
};

}  // namespace pictk
