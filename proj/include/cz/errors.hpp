#pragma once

#include <stdexcept>
#include <string>

namespace cz {

// Bad arguments: arity mismatch, gcd(a,q) != 1, index out of range.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured budget (points, table entries, modulus size) would be exceeded.
// The message names the limiting resource.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computed quantity contradicts a proven property, e.g. a nonpositive local
// factor or a nonpositive singular integral.
class AnomalyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cz
