#pragma once

// The singular integral
//
//   J = (1/d) * int_{s < 1} s^{1/d - 1},   s = f_d(alpha_1) + f_d(alpha_2),
//
// over (alpha_1, alpha_2) in [0,1]^{2d}, its truncation
//
//   J(mu) = int_{|gamma| < mu} I(gamma) d gamma,
//   I(gamma) = int_{[0,1]^{2d+1}} e(gamma f(xi)) d xi,
//
// and the decay of I.
//
// I(gamma) factors as A(gamma)^2 * conj(K_d(gamma)) with A the integral of
// e(gamma f_d) over [0,1]^d and K_d(gamma) = int_0^1 e(gamma u^d) du. Writing
// f_d = f_{d-2}(alpha') (x^2 + y^2), A is the mean over alpha' of
// g(gamma f_{d-2}(alpha'))^2 with g(c) = int_0^1 e(c x^2) dx a Fresnel
// integral, so only d-2 coordinates per factor are sampled.

#include "cz/forms.hpp"

#include <complex>
#include <cstdint>
#include <string>

namespace cz {

using Complex = std::complex<double>;

enum class IntegralMethod { region_mc, cdf_reduction, oscillatory_truncated };

std::string to_string(IntegralMethod m);
IntegralMethod integral_method_from_string(const std::string& s);

struct IntegralEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;  // grid resolution for cdf_reduction
  IntegralMethod method = IntegralMethod::region_mc;
  std::uint64_t seed = 0;
};

struct ComplexEstimate {
  Complex value;
  double std_error = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

// C(x) + i S(x) with C(x) = int_0^x cos(pi t^2 / 2) dt and S likewise.
Complex fresnel(double x);
// int_0^1 e(c x^2) dx.
Complex quadratic_phase_integral(double c);
// int_0^1 e(gamma u^d) du.
Complex power_phase_integral(int d, double gamma);

// I(gamma). Exact for d <= 2 (std_error 0).
ComplexEstimate inner_integral(const FormSpec& spec, double gamma, std::int64_t samples,
                               std::uint64_t seed);

IntegralEstimate J_region(const FormSpec& spec, std::int64_t samples, std::uint64_t seed);
// std_error is the change against the half-resolution grid.
IntegralEstimate J_cdf(const FormSpec& spec, std::int64_t grid_resolution);
// Adaptive Simpson in gamma over common random numbers; std_error combines
// the batch spread with the quadrature error estimate.
IntegralEstimate J_truncated(const FormSpec& spec, double mu, std::int64_t samples,
                             std::uint64_t seed, double rel_tol = 1e-4);

// Per-sample estimator E[sin(2 pi mu f) / (pi f)] of J(mu). High variance;
// kept as an independent check of J_truncated.
IntegralEstimate J_truncated_direct(const FormSpec& spec, double mu, std::int64_t samples,
                                    std::uint64_t seed);

namespace detail {
// Deterministic sub-seed for shard i.
std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t shard);
inline constexpr int kShards = 64;
}  // namespace detail

}  // namespace cz
