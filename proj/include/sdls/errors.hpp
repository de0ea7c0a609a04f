#pragma once

#include <stdexcept>
#include <string>

namespace sdls {

// Numerical breakdown: eigensolver non-convergence, non-finite intermediates.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Cone layout does not match the vector it is applied to.
class ConeDimensionError : public std::invalid_argument {
 public:
  explicit ConeDimensionError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace sdls
