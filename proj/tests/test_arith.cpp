#include "cz/arith.hpp"

#include <doctest.h>

#include <numeric>

using namespace cz;

namespace {
bool trial_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t i = 2; i * i <= n; ++i) {
    if (n % i == 0) return false;
  }
  return true;
}
}  // namespace

TEST_CASE("primality and sieve agree with trial division") {
  const auto ps = primes_up_to(2000);
  std::size_t idx = 0;
  for (std::int64_t n = 0; n <= 2000; ++n) {
    CHECK(is_prime(n) == trial_prime(n));
    if (trial_prime(n)) {
      REQUIRE(idx < ps.size());
      CHECK(ps[idx++] == n);
    }
  }
  CHECK(idx == ps.size());
  CHECK(primes_up_to(1000).size() == 168);
  CHECK(is_prime(1'000'000'007));
  CHECK_FALSE(is_prime(1'000'000'007LL * 3));
}

TEST_CASE("factorisation, divisors, mobius") {
  for (std::int64_t n = 1; n <= 500; ++n) {
    std::int64_t prod = 1;
    int squarefree = 1, omega = 0;
    for (auto [p, e] : factorize(n)) {
      CHECK(is_prime(p));
      for (int i = 0; i < e; ++i) prod *= p;
      if (e > 1) squarefree = 0;
      ++omega;
    }
    CHECK(prod == n);
    const auto divs = divisors(n);
    std::int64_t count = 0;
    for (std::int64_t k = 1; k <= n; ++k) count += n % k == 0;
    CHECK(static_cast<std::int64_t>(divs.size()) == count);
    CHECK(divisor_count(n) == count);
    CHECK(mobius(n) == (squarefree ? (omega % 2 ? -1 : 1) : 0));
    // sum_{e | n} mu(e) = [n == 1]
    int s = 0;
    for (auto e : divs) s += mobius(e);
    CHECK(s == (n == 1 ? 1 : 0));
  }
}

TEST_CASE("modular helpers") {
  CHECK(gcd64(12, 18) == 6);
  CHECK(gcd64(0, 7) == 7);
  CHECK(pow_mod(3, 200, 1000003) == static_cast<std::uint64_t>(mpz_class(big_pow(3, 200) % 1000003).get_ui()));
  for (std::int64_t m : {7, 12, 97, 1024}) {
    for (std::int64_t a = 1; a < m; ++a) {
      if (std::gcd(a, m) != 1) continue;
      CHECK((a * inverse_mod(a, m)) % m == 1);
    }
  }
}

TEST_CASE("checked powers and big integers") {
  i128 out = 0;
  CHECK(checked_pow(2, 100, out));
  CHECK(to_string(big_from_i128(out)) == big_pow(2, 100).get_str());
  CHECK_FALSE(checked_pow(2, 127, out));
  CHECK_FALSE(checked_pow(10, 40, out));
  CHECK(checked_pow(-3, 3, out));
  CHECK(static_cast<long long>(out) == -27);
  const u128 big = static_cast<u128>(1) << 100;
  CHECK(to_string(big) == big_pow(2, 100).get_str());
  CHECK(to_string(big_from_u128(big)) == big_pow(2, 100).get_str());
  CHECK(to_double(BigRational(1, 3)) == doctest::Approx(1.0 / 3));
}
