#pragma once

// Small exact-arithmetic helpers shared by every module.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace cz {

using BigInt = mpz_class;
using BigRational = mpq_class;
using i128 = __int128;
using u128 = unsigned __int128;

BigInt big_pow(std::int64_t base, std::int64_t exp);
BigInt big_from_u128(u128 v);
BigInt big_from_i128(i128 v);
std::string to_string(const BigInt& v);
std::string to_string(u128 v);
double to_double(const BigRational& v);

std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);

// Checked integer power; returns false on overflow of the 127-bit range.
bool checked_pow(std::int64_t base, int exp, i128& out);

bool is_prime(std::int64_t n);
std::vector<std::int64_t> primes_up_to(std::int64_t n);

// Prime factorisation as (p, exponent) pairs in increasing p.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);
std::vector<std::int64_t> divisors(std::int64_t n);
int mobius(std::int64_t n);
std::int64_t divisor_count(std::int64_t n);

// Modular inverse of a mod m, requires gcd(a, m) = 1.
std::int64_t inverse_mod(std::int64_t a, std::int64_t m);

}  // namespace cz
