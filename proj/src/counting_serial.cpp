// Single-threaded reference versions of the counting kernels. They share no
// loop code with counting.cpp so that equivalence tests compare two
// independent implementations.

#include "cz/counting.hpp"

#include "cz/errors.hpp"

namespace cz::serial {

CountTable rep_counts_upto(const FormSpec& spec, std::int64_t P, std::uint64_t limit,
                           const Budget& budget) {
  limit = detail::checked_table_limit(spec, P, limit, budget);
  const SparseCounts r2 = r2_box(P);
  const auto n = static_cast<std::uint64_t>(P);

  // Factor list: the x_1 indicator (odd d) then k copies of r2.
  std::vector<std::uint64_t> cur(limit + 1, 0);
  cur[1] = 1;
  if (spec.odd()) {
    std::vector<std::uint64_t> next(limit + 1, 0);
    for (std::uint64_t x = 1; x <= n && x <= limit; ++x) next[x] = 1;
    cur.swap(next);
  }
  for (int factor = 0; factor < spec.k(); ++factor) {
    std::vector<std::uint64_t> next(limit + 1, 0);
    for (std::uint64_t m = 1; m <= limit; ++m) {
      if (cur[m] == 0) continue;
      for (std::size_t i = 0; i < r2.keys.size(); ++i) {
        const std::uint64_t key = r2.keys[i];
        if (key > limit / m) break;
        std::uint64_t add = 0;
        if (__builtin_mul_overflow(cur[m], r2.counts[i], &add) ||
            __builtin_add_overflow(next[m * key], add, &next[m * key])) {
          throw CapacityError("representation count exceeds 64 bits");
        }
      }
    }
    cur.swap(next);
  }
  return CountTable{spec.d(), P, limit, std::move(cur)};
}

ExactCount count_zeros_from_table(const FormSpec& spec, const CountTable& table) {
  const auto targets = detail::power_targets(spec, table.P);
  if (targets.back() > table.limit) throw InputError("count table truncated below P^d");
  BigInt total = 0;
  for (std::int64_t t = 1; t <= table.P; ++t) {
    const std::uint64_t T = targets[static_cast<std::size_t>(t)];
    u128 s = 0;
    for (std::uint64_t n = 1; n < T; ++n) {
      s += static_cast<u128>(table.values[n]) * table.values[T - n];
    }
    total += big_from_u128(s);
  }
  return total;
}

}  // namespace cz::serial
