#pragma once

// Exact representation counts a(n) of f_d over the box [1,P]^d and the zero
// count R(0;P) of f over [1,P]^{2d+1}.
//
// a(n) is built as a k-fold Dirichlet convolution of the two-squares count
// r2_box with itself (times the indicator of {1..P} for the x_1 factor when d
// is odd). The zero count is the pointwise additive convolution
//
//   R(0;P) = sum_{t=1}^{P} sum_n a(n) a(t^d - n)
//
// evaluated only at the P targets t^d. Brute-force enumeration is kept as an
// independent oracle.

#include "cz/arith.hpp"
#include "cz/forms.hpp"

#include <cstdint>
#include <vector>

namespace cz {

struct Budget {
  std::uint64_t bruteforce_points = 1'000'000'000ULL;
  std::uint64_t table_entries = 200'000'000ULL;
};

// Sorted keys with their multiplicities.
struct SparseCounts {
  std::vector<std::uint64_t> keys;
  std::vector<std::uint64_t> counts;

  std::uint64_t at(std::uint64_t key) const;
  u128 total() const;
};

// values[n] = #{x in [1,P]^d : f_d(x) = n} for 0 <= n <= limit.
struct CountTable {
  int d = 0;
  std::int64_t P = 0;
  std::uint64_t limit = 0;
  std::vector<std::uint64_t> values;

  // True when limit reaches the maximum 2^k P^d, so every representation is present.
  bool complete() const;
  u128 total() const;
};

using ExactCount = BigInt;

enum class CountMethod { bruteforce, convolution };

// #{(s,t) in [1,P]^2 : s^2 + t^2 = m}.
SparseCounts r2_box(std::int64_t P);

CountTable rep_counts(const FormSpec& spec, std::int64_t P, const Budget& budget = {});
// Same table truncated at `limit` (entries above are never needed for the zero count).
CountTable rep_counts_upto(const FormSpec& spec, std::int64_t P, std::uint64_t limit,
                           const Budget& budget = {});
// Nonzero a(n) only, built by sorting products; suited to large, sparse ranges.
SparseCounts rep_counts_sparse(const FormSpec& spec, std::int64_t P, const Budget& budget = {});

ExactCount count_zeros_exact(const FormSpec& spec, std::int64_t P, CountMethod method,
                             const Budget& budget = {});
ExactCount count_zeros_bruteforce(const FormSpec& spec, std::int64_t P, const Budget& budget = {});
ExactCount count_zeros_convolution(const FormSpec& spec, std::int64_t P, const Budget& budget = {});
ExactCount count_zeros_from_table(const FormSpec& spec, const CountTable& table);

// sum_n a(n)^2, which equals the mean square of F_1 over [0,1].
ExactCount second_moment_F1(const FormSpec& spec, std::int64_t P, const Budget& budget = {});

// #{y in [-P,P]^d : f_d(y) = 0} by inclusion-exclusion over the vanishing factors.
ExactCount fd_zero_count_signed(const FormSpec& spec, std::int64_t P);
// Points of [-P,P]^{2d+1} with f_d(first) = f_d(second) = x_{2d+1} = 0.
ExactCount count_degenerate_zeros(const FormSpec& spec, std::int64_t P);

// Single-threaded reference kernels, kept for equivalence tests and benchmarks.
namespace serial {
CountTable rep_counts_upto(const FormSpec& spec, std::int64_t P, std::uint64_t limit,
                           const Budget& budget = {});
ExactCount count_zeros_from_table(const FormSpec& spec, const CountTable& table);
}  // namespace serial

// Shared by the serial and parallel kernels.
namespace detail {
std::uint64_t checked_table_limit(const FormSpec& spec, std::int64_t P, std::uint64_t limit,
                                  const Budget& budget);
std::vector<std::uint64_t> power_targets(const FormSpec& spec, std::int64_t P);
}  // namespace detail

}  // namespace cz
