#pragma once

// Generating functions F, F_1, F_2, the complete exponential sums S_1, S_2, S
// modulo q, the squared quadratic Gauss sum table G(p,l,j), and the major/minor
// arc machinery.

#include "cz/arith.hpp"
#include "cz/counting.hpp"
#include "cz/forms.hpp"

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

namespace cz {

using Complex = std::complex<double>;

struct ExpsumBudget {
  // Largest modulus for residue-count tables and direct sums.
  std::int64_t max_modulus = 20'000;
};

// ---------------------------------------------------------------------------
// Generating functions over the box [1,P]
// ---------------------------------------------------------------------------

// e(theta) for theta given as a long double, reduced mod 1 first.
Complex unit_phase(long double theta);

Complex F1_from_table(const CountTable& table, double alpha);
Complex F1(const FormSpec& spec, std::int64_t P, double alpha, const Budget& budget = {});
Complex F2(const FormSpec& spec, std::int64_t P, double alpha);
// F_1(alpha)^2 F_2(alpha).
Complex F(const FormSpec& spec, std::int64_t P, double alpha, const Budget& budget = {});
// sum over every point of [1,P]^{2d+1}; bounded by the brute-force budget.
Complex F_direct(const FormSpec& spec, std::int64_t P, double alpha, const Budget& budget = {});

// ---------------------------------------------------------------------------
// Residue distributions
// ---------------------------------------------------------------------------

// counts[u] = #{x mod q : f_m(x) = u mod q} for the m-variable form f_m
// (m = 0 is the constant 1, m = 1 is x_1).
struct ResidueCounts {
  int m = 0;
  std::int64_t q = 1;
  std::vector<i128> counts;
};

ResidueCounts fd_residue_counts(int m, std::int64_t q, const ExpsumBudget& budget = {});
// Memoised variant; safe for concurrent callers.
std::shared_ptr<const ResidueCounts> cached_residue_counts(int m, std::int64_t q,
                                                           const ExpsumBudget& budget = {});

// ---------------------------------------------------------------------------
// Complete sums modulo q
// ---------------------------------------------------------------------------

class PhaseTable {
 public:
  explicit PhaseTable(std::int64_t q);
  const Complex& operator[](std::int64_t r) const { return table_[static_cast<std::size_t>(r)]; }
  std::int64_t modulus() const { return q_; }

 private:
  std::int64_t q_;
  std::vector<Complex> table_;
};

Complex S1(std::int64_t q, std::int64_t a, const FormSpec& spec, const ExpsumBudget& budget = {});
Complex S2(std::int64_t q, std::int64_t a, const FormSpec& spec, const ExpsumBudget& budget = {});
// Unnormalised S(q,a) = S_1(q,a)^2 S_2(q,a).
Complex S(std::int64_t q, std::int64_t a, const FormSpec& spec, const ExpsumBudget& budget = {});

// S_1(q,a) for every a in [0,q); entries with gcd(a,q) > 1 are filled too.
std::vector<Complex> S1_all(std::int64_t q, const FormSpec& spec, const ExpsumBudget& budget = {});
std::vector<Complex> S2_all(std::int64_t q, const FormSpec& spec, const ExpsumBudget& budget = {});

// q^{-2d-1} sum_{(a,q)=1} S_1^2 S_2, evaluated straight from the definitions.
Complex S_normalized_definitional(std::int64_t q, const FormSpec& spec,
                                  const ExpsumBudget& budget = {});

// sum_{(a,q)=1} S_2(q,a) = sum_{x mod q} c_q(x^d), an exact integer.
BigInt T(std::int64_t q, const FormSpec& spec);

// (sum_y e(a u y^2 / p^l))^2 for p^j || u, per the case table.
Complex gauss_product(std::int64_t p, int l, int j);

// ---------------------------------------------------------------------------
// Arcs
// ---------------------------------------------------------------------------

struct RationalApprox {
  std::int64_t a = 0;
  std::int64_t q = 1;
  double err = 0.0;
};

// Last continued-fraction convergent a/q with q <= Q; |alpha - a/q| <= 1/(qQ).
RationalApprox dirichlet_approx(double alpha, std::int64_t Q);

struct ArcClass {
  bool major = false;
  std::int64_t q = 0;
  std::int64_t a = 0;
};

double default_delta(int d);
// alpha must lie in (P^{delta-d}, 1 + P^{delta-d}].
ArcClass classify_arc(const FormSpec& spec, double alpha, std::int64_t P, double delta);

// P^{1 - delta / 2^{d-1}}, implicit constant and P^eps dropped. Diagnostic only.
double weyl_envelope(double P, int d, double delta);

}  // namespace cz
