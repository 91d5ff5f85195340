#pragma once

// The degree-d forms in 2d+1 variables:
//
//   f(x) = f_d(x_1..x_d) + f_d(x_{d+1}..x_{2d}) - x_{2d+1}^d
//
// with f_1(x) = x, f_2(x,y) = x^2 + y^2 and
//   f_d(x_1..x_d) = (x_{d-1}^2 + x_d^2) * f_{d-2}(x_1..x_{d-2}),
// so an even-degree f_d is a product of k = d/2 sums of two squares, and an
// odd-degree f_d is x_1 times a product of k = (d-1)/2 of them.

#include "cz/arith.hpp"
#include "cz/errors.hpp"

#include <span>
#include <string>
#include <vector>

namespace cz {

enum class Parity { even, odd };

class FormSpec {
 public:
  explicit FormSpec(int degree);

  int d() const { return d_; }
  int k() const { return d_ / 2; }
  Parity parity() const { return d_ % 2 == 0 ? Parity::even : Parity::odd; }
  int n_vars() const { return 2 * d_ + 1; }
  bool odd() const { return d_ % 2 == 1; }

  // Largest value of f_d on [1,P]^d: 2^k P^d.
  BigInt fd_max(std::int64_t P) const;

 private:
  int d_;
};

using Point = std::vector<BigInt>;

// f_d evaluated over any integer type with the usual operators (BigInt for
// exact work, std::int64_t inside bounded counting kernels).
template <class T>
T eval_fd(const FormSpec& spec, std::span<const T> x) {
  const int d = spec.d();
  if (static_cast<int>(x.size()) != d) {
    throw InputError("eval_fd: expected " + std::to_string(d) + " coordinates, got " +
                     std::to_string(x.size()));
  }
  T value = spec.odd() ? T(x[0]) : T(1);
  for (int i = spec.odd() ? 1 : 0; i + 1 < d; i += 2) {
    T a = x[static_cast<std::size_t>(i)];
    T b = x[static_cast<std::size_t>(i + 1)];
    T pair = a * a + b * b;
    value = value * pair;
  }
  return value;
}

BigInt eval_fd(const FormSpec& spec, const Point& x);
BigInt eval_f(const FormSpec& spec, const Point& x);
Point gradient_f(const FormSpec& spec, const Point& x);

// Zero of f with nonvanishing gradient: x_1 = x_3 = ... = x_{2*floor((d-1)/2)+1}
// = x_{2d+1} = 1, all other coordinates 0.
Point nonsingular_witness(const FormSpec& spec);

}  // namespace cz
