#pragma once

#include <stdexcept>
#include <string>

namespace sequil {

// Malformed input: bad dimensions, invalid files, infeasible requests.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical procedure did not reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sequil
