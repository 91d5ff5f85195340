#include "cz/arith.hpp"

#include "cz/errors.hpp"

#include <algorithm>
#include <limits>

namespace cz {

BigInt big_pow(std::int64_t base, std::int64_t exp) {
  if (exp < 0) throw InputError("big_pow: negative exponent");
  BigInt b(static_cast<long>(base));
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(exp));
  return r;
}

BigInt big_from_u128(u128 v) {
  BigInt hi(static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64)));
  BigInt lo(static_cast<unsigned long>(static_cast<std::uint64_t>(v)));
  BigInt r = hi;
  mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), 64);
  r += lo;
  return r;
}

BigInt big_from_i128(i128 v) {
  if (v >= 0) return big_from_u128(static_cast<u128>(v));
  BigInt r = big_from_u128(static_cast<u128>(-(v + 1)));
  r += 1;
  return -r;
}

std::string to_string(const BigInt& v) { return v.get_str(10); }

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

double to_double(const BigRational& v) { return mpq_get_d(v.get_mpq_t()); }

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  if (mod == 1) return 0;
  u128 result = 1;
  u128 b = base % mod;
  while (exp > 0) {
    if (exp & 1U) result = (result * b) % mod;
    b = (b * b) % mod;
    exp >>= 1U;
  }
  return static_cast<std::uint64_t>(result);
}

bool checked_pow(std::int64_t base, int exp, i128& out) {
  i128 r = 1;
  const i128 limit = std::numeric_limits<i128>::max();
  const i128 b = base < 0 ? -static_cast<i128>(base) : static_cast<i128>(base);
  for (int i = 0; i < exp; ++i) {
    if (b != 0 && r > limit / b) return false;
    r *= b;
  }
  out = (base < 0 && (exp % 2 == 1)) ? -r : r;
  return true;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0 || n % 3 == 0) return false;
  for (std::int64_t f = 5; f * f <= n; f += 6) {
    if (n % f == 0 || n % (f + 2) == 0) return false;
  }
  return true;
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
  std::vector<std::int64_t> out;
  if (n < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
  for (std::int64_t i = 2; i <= n; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    out.push_back(i);
    for (std::int64_t j = i * i; j <= n; j += i) composite[static_cast<std::size_t>(j)] = true;
  }
  return out;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  if (n < 1) throw InputError("factorize: n must be positive");
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> out{1};
  for (auto [p, e] : factorize(n)) {
    const std::size_t base = out.size();
    std::int64_t pk = 1;
    for (int i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int mobius(std::int64_t n) {
  int sign = 1;
  for (auto [p, e] : factorize(n)) {
    (void)p;
    if (e > 1) return 0;
    sign = -sign;
  }
  return sign;
}

std::int64_t divisor_count(std::int64_t n) {
  std::int64_t c = 1;
  for (auto [p, e] : factorize(n)) {
    (void)p;
    c *= (e + 1);
  }
  return c;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t old_r = ((a % m) + m) % m, r = m;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw InputError("inverse_mod: arguments not coprime");
  return ((old_s % m) + m) % m;
}

}  // namespace cz
