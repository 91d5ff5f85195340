#include "cz/counting.hpp"

#include <doctest.h>

#include <map>

using namespace cz;

namespace {

// Every tuple of [lo,hi]^m, as int64 vectors.
template <class Fn>
void for_each_tuple(int m, std::int64_t lo, std::int64_t hi, Fn fn) {
  std::vector<std::int64_t> x(static_cast<std::size_t>(m), lo);
  while (true) {
    fn(x);
    int c = m - 1;
    while (c >= 0 && x[static_cast<std::size_t>(c)] == hi) x[static_cast<std::size_t>(c--)] = lo;
    if (c < 0) return;
    ++x[static_cast<std::size_t>(c)];
  }
}

std::map<std::uint64_t, std::uint64_t> enumerate_fd(const FormSpec& spec, std::int64_t P) {
  std::map<std::uint64_t, std::uint64_t> m;
  for_each_tuple(spec.d(), 1, P, [&](const std::vector<std::int64_t>& x) {
    ++m[static_cast<std::uint64_t>(eval_fd<std::int64_t>(spec, x))];
  });
  return m;
}

}  // namespace

TEST_CASE("r2_box against enumeration") {
  for (std::int64_t P : {1, 2, 7, 20}) {
    std::map<std::uint64_t, std::uint64_t> m;
    for (std::int64_t s = 1; s <= P; ++s)
      for (std::int64_t t = 1; t <= P; ++t) ++m[static_cast<std::uint64_t>(s * s + t * t)];
    const SparseCounts r = r2_box(P);
    CHECK(r.keys.size() == m.size());
    for (auto [k, v] : m) CHECK(r.at(k) == v);
    CHECK(r.at(3) == 0);
    CHECK(to_string(r.total()) == std::to_string(P * P));
  }
  CHECK_THROWS_AS(r2_box(0), InputError);
}

TEST_CASE("representation counts against enumeration") {
  for (int d = 1; d <= 6; ++d) {
    for (std::int64_t P : {1, 2, 3, 4}) {
      const FormSpec spec(d);
      const CountTable t = rep_counts(spec, P);
      CHECK(t.complete());
      const auto m = enumerate_fd(spec, P);
      std::uint64_t nonzero = 0;
      for (std::size_t n = 0; n < t.values.size(); ++n) {
        if (t.values[n] == 0) continue;
        ++nonzero;
        CHECK(m.at(n) == t.values[n]);
      }
      CHECK(nonzero == m.size());
      CHECK(to_string(t.total()) == big_pow(P, d).get_str());
    }
  }
}

TEST_CASE("truncated tables and the serial kernels") {
  for (int d = 1; d <= 5; ++d) {
    const FormSpec spec(d);
    const std::int64_t P = 6;
    const auto limit = static_cast<std::uint64_t>(big_pow(P, d).get_ui());
    const CountTable full = rep_counts(spec, P);
    const CountTable par = rep_counts_upto(spec, P, limit);
    const CountTable ser = serial::rep_counts_upto(spec, P, limit);
    CHECK(par.values == ser.values);
    for (std::size_t n = 0; n < par.values.size(); ++n) CHECK(par.values[n] == full.values[n]);
    CHECK(count_zeros_from_table(spec, par) == serial::count_zeros_from_table(spec, ser));
    CHECK(count_zeros_from_table(spec, full) == count_zeros_from_table(spec, par));
  }
}

TEST_CASE("zero counts: brute force, convolution, closed form") {
  for (int d = 1; d <= 3; ++d) {
    for (std::int64_t P = 1; P <= 5; ++P) {
      const FormSpec spec(d);
      CHECK(count_zeros_bruteforce(spec, P) == count_zeros_convolution(spec, P));
    }
  }
  // d = 1: x + y = z has P(P-1)/2 solutions.
  for (std::int64_t P : {1, 10, 1000}) {
    CHECK(count_zeros_exact(FormSpec(1), P, CountMethod::convolution) == P * (P - 1) / 2);
  }
  // d = 2, P = 2: 1 + 1 + 1 + 1 = 2^2 is the only zero.
  CHECK(count_zeros_bruteforce(FormSpec(2), 2) == 1);
}

TEST_CASE("second moment of F_1") {
  for (int d = 1; d <= 4; ++d) {
    const FormSpec spec(d);
    const auto m = enumerate_fd(spec, 4);
    BigInt s = 0;
    for (auto [k, v] : m) s += BigInt(static_cast<unsigned long>(v)) * static_cast<unsigned long>(v);
    CHECK(second_moment_F1(spec, 4) == s);
  }
}

TEST_CASE("capacity errors") {
  Budget tiny{1000, 1000};
  CHECK_THROWS_AS(count_zeros_bruteforce(FormSpec(3), 5, tiny), CapacityError);
  CHECK_THROWS_AS(rep_counts(FormSpec(4), 10, tiny), CapacityError);
  CHECK_THROWS_AS(count_zeros_convolution(FormSpec(4), 10, tiny), CapacityError);
  CHECK_THROWS_AS(count_zeros_exact(FormSpec(2), 0, CountMethod::convolution), InputError);
}

TEST_CASE("degenerate zeros against enumeration") {
  for (int d = 1; d <= 4; ++d) {
    const FormSpec spec(d);
    for (std::int64_t P : {1, 2}) {
      std::int64_t zf = 0;
      for_each_tuple(d, -P, P, [&](const std::vector<std::int64_t>& x) {
        zf += eval_fd<std::int64_t>(spec, x) == 0;
      });
      CHECK(fd_zero_count_signed(spec, P) == zf);
      CHECK(count_degenerate_zeros(spec, P) == BigInt(zf) * zf);
    }
  }
  // Spot values of the inclusion-exclusion formulas.
  CHECK(count_degenerate_zeros(FormSpec(3), 2) == 841);
  CHECK(fd_zero_count_signed(FormSpec(3), 50) == 10301);
  CHECK(fd_zero_count_signed(FormSpec(4), 50) == 20401);
}

TEST_CASE("sparse representation counts") {
  for (int d = 1; d <= 6; ++d) {
    const FormSpec spec(d);
    for (std::int64_t P : {1, 3, 5}) {
      const SparseCounts s = rep_counts_sparse(spec, P);
      const CountTable t = rep_counts(spec, P);
      std::size_t nonzero = 0;
      for (std::size_t n = 0; n < t.values.size(); ++n) {
        if (t.values[n] == 0) continue;
        ++nonzero;
        CHECK(s.at(n) == t.values[n]);
      }
      CHECK(s.keys.size() == nonzero);
    }
  }
  CHECK_THROWS_AS(rep_counts_sparse(FormSpec(6), 20, Budget{1000, 1000}), CapacityError);
}
