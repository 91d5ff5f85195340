#include "cz/integral.hpp"

#include "cz/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace cz {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Uniform01 {
 public:
  explicit Uniform01(std::uint64_t seed) : eng_(seed) {}
  double operator()() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 eng_;
};

// f_m at a uniform point of [0,1]^m (m = 0 gives 1).
double sample_fm(int m, Uniform01& u) {
  double v = m % 2 == 1 ? u() : 1.0;
  for (int i = 0; i < m / 2; ++i) {
    const double a = u();
    const double b = u();
    v *= a * a + b * b;
  }
  return v;
}

std::int64_t shard_count(std::int64_t samples, int shard) {
  const std::int64_t base = samples / detail::kShards;
  return base + (shard < samples % detail::kShards ? 1 : 0);
}

void require_samples(std::int64_t samples, std::int64_t min, const char* what) {
  if (samples < min) {
    throw InputError(std::string(what) + ": need at least " + std::to_string(min) + " samples");
  }
}

void require_positive(const IntegralEstimate& e, const char* what) {
  if (!(e.value > 0.0) || !std::isfinite(e.value)) {
    throw AnomalyError(std::string(what) + ": singular integral estimate " + std::to_string(e.value) +
                       " is not positive");
  }
}

// A(gamma) = int_{[0,1]^d} e(gamma f_d) for d <= 2.
Complex fd_phase_integral_exact(int d, double gamma) {
  if (d == 1) return power_phase_integral(1, gamma);
  const Complex g = quadratic_phase_integral(gamma);
  return g * g;
}

// Per-sample conditional factor g(gamma c)^2 (d >= 3).
Complex conditional_factor(double gamma, double c) {
  const Complex g = quadratic_phase_integral(gamma * c);
  return g * g;
}

// Samples of f_{d-2} for the two halves, laid out shard by shard.
struct ConditionalSamples {
  std::vector<double> c1, c2;
};

ConditionalSamples draw_conditional(const FormSpec& spec, std::int64_t samples, std::uint64_t seed) {
  ConditionalSamples s;
  s.c1.resize(static_cast<std::size_t>(samples));
  s.c2.resize(static_cast<std::size_t>(samples));
  std::vector<std::int64_t> offset(detail::kShards + 1, 0);
  for (int i = 0; i < detail::kShards; ++i) offset[i + 1] = offset[i] + shard_count(samples, i);
  const int m = spec.d() - 2;
#pragma omp parallel for schedule(static)
  for (int shard = 0; shard < detail::kShards; ++shard) {
    Uniform01 u(detail::shard_seed(seed, static_cast<std::uint64_t>(shard)));
    for (std::int64_t i = offset[shard]; i < offset[shard + 1]; ++i) {
      s.c1[static_cast<std::size_t>(i)] = sample_fm(m, u);
      s.c2[static_cast<std::size_t>(i)] = sample_fm(m, u);
    }
  }
  return s;
}

}  // namespace

namespace detail {

std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t shard) {
  std::uint64_t state = seed ^ (0xD1B54A32D192ED03ULL * (shard + 1));
  splitmix64(state);
  return splitmix64(state);
}

}  // namespace detail

std::string to_string(IntegralMethod m) {
  switch (m) {
    case IntegralMethod::region_mc: return "region_mc";
    case IntegralMethod::cdf_reduction: return "cdf_reduction";
    case IntegralMethod::oscillatory_truncated: return "oscillatory_truncated";
  }
  return "region_mc";
}

IntegralMethod integral_method_from_string(const std::string& s) {
  if (s == "region_mc" || s == "region") return IntegralMethod::region_mc;
  if (s == "cdf_reduction" || s == "cdf") return IntegralMethod::cdf_reduction;
  if (s == "oscillatory_truncated" || s == "truncated") return IntegralMethod::oscillatory_truncated;
  throw InputError("unknown integral method '" + s + "'");
}

// ---------------------------------------------------------------------------
// I(gamma)
// ---------------------------------------------------------------------------

ComplexEstimate inner_integral(const FormSpec& spec, double gamma, std::int64_t samples,
                               std::uint64_t seed) {
  require_samples(samples, 1000, "inner_integral");
  if (!std::isfinite(gamma)) throw InputError("inner_integral: gamma must be finite");
  const int d = spec.d();
  ComplexEstimate out;
  out.samples = samples;
  out.seed = seed;
  const Complex k = std::conj(power_phase_integral(d, gamma));
  if (d <= 2) {
    const Complex a = fd_phase_integral_exact(d, gamma);
    out.value = a * a * k;
    return out;
  }

  std::array<double, detail::kShards> sr{}, si{}, sr2{}, si2{};
  const int m = d - 2;
#pragma omp parallel for schedule(static)
  for (int shard = 0; shard < detail::kShards; ++shard) {
    Uniform01 u(detail::shard_seed(seed, static_cast<std::uint64_t>(shard)));
    const std::int64_t n = shard_count(samples, shard);
    double r = 0, i = 0, r2 = 0, i2 = 0;
    for (std::int64_t t = 0; t < n; ++t) {
      const double c1 = sample_fm(m, u);
      const double c2 = sample_fm(m, u);
      const Complex h = conditional_factor(gamma, c1) * conditional_factor(gamma, c2);
      r += h.real();
      i += h.imag();
      r2 += h.real() * h.real();
      i2 += h.imag() * h.imag();
    }
    sr[shard] = r;
    si[shard] = i;
    sr2[shard] = r2;
    si2[shard] = i2;
  }
  double r = 0, i = 0, r2 = 0, i2 = 0;
  for (int s = 0; s < detail::kShards; ++s) {
    r += sr[s];
    i += si[s];
    r2 += sr2[s];
    i2 += si2[s];
  }
  const double n = static_cast<double>(samples);
  const Complex mean(r / n, i / n);
  const double var = std::max(0.0, r2 / n - mean.real() * mean.real()) +
                     std::max(0.0, i2 / n - mean.imag() * mean.imag());
  out.value = mean * k;
  out.std_error = std::sqrt(var / (n - 1)) * std::abs(k);
  return out;
}

// ---------------------------------------------------------------------------
// J by Monte Carlo over the region {s < 1}
// ---------------------------------------------------------------------------

namespace {

// E_R[(1/d) (b + cR)^{1/d-1} 1{b + cR < 1}] for the two-squares variable R,
// exact on R <= 1 and by Gauss-Legendre in tau = sqrt(R - 1) beyond, where
// the density pi/4 - arctan(tau) is smooth.
double region_weight_given(int d, double b, double c) {
  if (b >= 1.0) return 0.0;
  const double inv_d = 1.0 / d;
  const double r_max = std::min(2.0, (1.0 - b) / c);
  const double ra = std::min(1.0, r_max);
  double part_a = 0.0;
  if (b > 0.0) {
    part_a = std::pow(b, inv_d) * std::expm1(std::log1p(c * ra / b) * inv_d);
  } else {
    part_a = std::pow(c * ra, inv_d);
  }
  part_a *= kPi / 4 / c;
  if (r_max <= 1.0) return part_a;
  using Gauss = boost::math::quadrature::gauss<double, 10>;
  const double part_b = Gauss::integrate(
      [&](double tau) {
        const double s = b + c * (1.0 + tau * tau);
        return inv_d * std::pow(s, inv_d - 1.0) * (kPi / 4 - std::atan(tau)) * 2.0 * tau;
      },
      0.0, std::sqrt(r_max - 1.0));
  return part_a + part_b;
}

}  // namespace

IntegralEstimate J_region(const FormSpec& spec, std::int64_t samples, std::uint64_t seed) {
  require_samples(samples, 10'000, "J_region");
  const int d = spec.d();
  std::array<double, detail::kShards> s1{}, s2{};
#pragma omp parallel for schedule(static)
  for (int shard = 0; shard < detail::kShards; ++shard) {
    Uniform01 u(detail::shard_seed(seed, static_cast<std::uint64_t>(shard)));
    const std::int64_t n = shard_count(samples, shard);
    double a = 0, b = 0;
    for (std::int64_t t = 0; t < n; ++t) {
      double w = 0.0;
      if (d == 1) {
        w = u() + u() < 1.0 ? 1.0 : 0.0;
      } else {
        // One two-squares factor of the first half is integrated out.
        const double c = sample_fm(d - 2, u);
        w = region_weight_given(d, sample_fm(d, u), c);
      }
      a += w;
      b += w * w;
    }
    s1[shard] = a;
    s2[shard] = b;
  }
  double a = 0, b = 0;
  for (int s = 0; s < detail::kShards; ++s) {
    a += s1[s];
    b += s2[s];
  }
  const double n = static_cast<double>(samples);
  IntegralEstimate out;
  out.value = a / n;
  out.std_error = std::sqrt(std::max(0.0, b / n - out.value * out.value) / (n - 1));
  out.samples = samples;
  out.method = IntegralMethod::region_mc;
  out.seed = seed;
  require_positive(out, "J_region");
  return out;
}

// ---------------------------------------------------------------------------
// J from the distribution of f_d
// ---------------------------------------------------------------------------

namespace {

double cdf_R(double r) {
  if (r <= 0) return 0.0;
  if (r <= 1) return kPi * r / 4;
  if (r >= 2) return 1.0;
  return std::sqrt(r - 1) + r * (kPi / 4 - std::acos(1 / std::sqrt(r)));
}

// CDF sampled at i*h for i = 0..top*G.
struct GridCdf {
  double h = 0;
  double top = 0;
  std::vector<double> F;

  double operator()(double y) const {
    if (y <= 0) return 0.0;
    if (y >= top) return 1.0;
    const double x = y / h;
    const auto i = static_cast<std::size_t>(x);
    if (i + 1 >= F.size()) return F.back();
    const double t = x - static_cast<double>(i);
    return F[i] + t * (F[i + 1] - F[i]);
  }
};

GridCdf tabulate(const std::function<double(double)>& cdf, double top, std::int64_t G, double upto) {
  GridCdf g;
  g.h = 1.0 / static_cast<double>(G);
  g.top = top;
  const auto n = static_cast<std::int64_t>(std::llround(upto * static_cast<double>(G)));
  g.F.resize(static_cast<std::size_t>(n) + 1);
  for (std::int64_t i = 0; i <= n; ++i) g.F[static_cast<std::size_t>(i)] = cdf(static_cast<double>(i) * g.h);
  return g;
}

// CDF of Y*R on [0, upto], with R the two-squares factor:
//   F(z) = sum over cells of Y of mass * mean F_R(z/y),
// and F_R(z/y) = 1 once y <= z/2.
GridCdf multiply_by_R(const GridCdf& Y, std::int64_t G, double upto) {
  static const double nodes[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  static const double weights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  GridCdf z;
  z.h = 1.0 / static_cast<double>(G);
  z.top = Y.top * 2;
  const auto n = static_cast<std::int64_t>(std::llround(upto * static_cast<double>(G)));
  z.F.assign(static_cast<std::size_t>(n) + 1, 0.0);
  const auto cells = static_cast<std::int64_t>(Y.F.size()) - 1;
  const double hy = Y.h;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 1; i <= n; ++i) {
    const double zv = static_cast<double>(i) * z.h;
    const auto first = std::min(cells, static_cast<std::int64_t>(zv / 2 / hy));
    double acc = Y.F[static_cast<std::size_t>(first)];
    for (std::int64_t c = first; c < cells; ++c) {
      const double m = Y.F[static_cast<std::size_t>(c + 1)] - Y.F[static_cast<std::size_t>(c)];
      if (m == 0.0) continue;
      const double mid = (static_cast<double>(c) + 0.5) * hy;
      double avg = 0.0;
      for (int q = 0; q < 3; ++q) avg += weights[q] * cdf_R(zv / (mid + 0.5 * hy * nodes[q]));
      acc += m * avg;
    }
    z.F[static_cast<std::size_t>(i)] = std::min(1.0, acc);
  }
  return z;
}

double J_from_grid(const FormSpec& spec, std::int64_t G) {
  const int d = spec.d();
  const int k = spec.k();
  std::function<double(double)> base;
  double top = 0;
  int factors = 0;
  if (spec.odd()) {
    base = [](double x) { return std::clamp(x, 0.0, 1.0); };
    top = 1;
    factors = k;
  } else {
    base = cdf_R;
    top = 2;
    factors = k - 1;
  }
  GridCdf Z = tabulate(base, top, G, factors == 0 ? 1.0 : top);
  for (int f = 0; f < factors; ++f) {
    const bool last = f + 1 == factors;
    Z = multiply_by_R(Z, G, last ? 1.0 : Z.top * 2);
  }

  // s = Z_1 + Z_2 on [0,1].
  const auto& F = Z.F;
  std::vector<double> mass(static_cast<std::size_t>(G));
  for (std::int64_t i = 0; i < G; ++i) {
    mass[static_cast<std::size_t>(i)] = F[static_cast<std::size_t>(i + 1)] - F[static_cast<std::size_t>(i)];
  }
  std::vector<double> Fs(static_cast<std::size_t>(G) + 1, 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 1; c <= G; ++c) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < c; ++i) {
      acc += mass[static_cast<std::size_t>(i)] *
             (F[static_cast<std::size_t>(c - i)] + F[static_cast<std::size_t>(c - i - 1)]);
    }
    Fs[static_cast<std::size_t>(c)] = 0.5 * acc;
  }
  const double h = 1.0 / static_cast<double>(G);
  const double inv_d = 1.0 / d;
  double J = 0.0;
  for (std::int64_t c = 0; c < G; ++c) {
    const double lo = static_cast<double>(c) * h;
    const double hi = lo + h;
    const double dF = Fs[static_cast<std::size_t>(c + 1)] - Fs[static_cast<std::size_t>(c)];
    J += dF / h * (std::pow(hi, inv_d) - std::pow(lo, inv_d));
  }
  return J;
}

}  // namespace

IntegralEstimate J_cdf(const FormSpec& spec, std::int64_t grid_resolution) {
  if (grid_resolution < 256) throw InputError("J_cdf: grid resolution must be >= 256");
  if (grid_resolution > (std::int64_t{1} << 16)) {
    throw CapacityError("J_cdf: grid resolution above 65536 is not supported");
  }
  IntegralEstimate out;
  out.method = IntegralMethod::cdf_reduction;
  out.samples = grid_resolution;
  out.value = J_from_grid(spec, grid_resolution);
  out.std_error = std::fabs(out.value - J_from_grid(spec, grid_resolution / 2));
  require_positive(out, "J_cdf");
  return out;
}

// ---------------------------------------------------------------------------
// J(mu)
// ---------------------------------------------------------------------------

namespace {

using Vec = std::vector<double>;

double mean(const Vec& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

Vec simpson(double a, double b, const Vec& fa, const Vec& fm, const Vec& fb) {
  Vec out(fa.size());
  for (std::size_t i = 0; i < fa.size(); ++i) out[i] = (b - a) / 6.0 * (fa[i] + 4.0 * fm[i] + fb[i]);
  return out;
}

struct AdaptiveSimpson {
  std::function<Vec(double)> f;
  double quad_err = 0.0;

  Vec refine(double a, double b, const Vec& fa, const Vec& fm, const Vec& fb, const Vec& whole, double tol,
             int depth) {
    const double m = 0.5 * (a + b);
    const Vec flm = f(0.5 * (a + m));
    const Vec frm = f(0.5 * (m + b));
    const Vec left = simpson(a, m, fa, flm, fm);
    const Vec right = simpson(m, b, fm, frm, fb);
    Vec both(left.size());
    for (std::size_t i = 0; i < both.size(); ++i) both[i] = left[i] + right[i];
    const double delta = mean(both) - mean(whole);
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
      quad_err += std::fabs(delta) / 15.0;
      for (std::size_t i = 0; i < both.size(); ++i) both[i] += (both[i] - whole[i]) / 15.0;
      return both;
    }
    Vec l = refine(a, m, fa, flm, fm, left, tol / 2, depth - 1);
    const Vec r = refine(m, b, fm, frm, fb, right, tol / 2, depth - 1);
    for (std::size_t i = 0; i < l.size(); ++i) l[i] += r[i];
    return l;
  }
};

}  // namespace

IntegralEstimate J_truncated(const FormSpec& spec, double mu, std::int64_t samples, std::uint64_t seed,
                             double rel_tol) {
  if (!(mu >= 1.0) || !std::isfinite(mu)) throw InputError("J_truncated: mu must be >= 1");
  if (!(rel_tol > 0.0)) throw InputError("J_truncated: tolerance must be positive");
  require_samples(samples, 1000, "J_truncated");
  const int d = spec.d();

  // Batches share the gamma nodes, so their spread is the Monte-Carlo error.
  const std::size_t batches = d <= 2 ? 1 : 16;
  ConditionalSamples cs;
  if (d > 2) cs = draw_conditional(spec, samples, seed);

  std::function<Vec(double)> integrand = [&](double gamma) {
    Vec out(batches, 0.0);
    const Complex k = std::conj(power_phase_integral(d, gamma));
    if (d <= 2) {
      const Complex a = fd_phase_integral_exact(d, gamma);
      out[0] = 2.0 * (a * a * k).real();
      return out;
    }
    const auto n = static_cast<std::int64_t>(cs.c1.size());
    const auto nb = static_cast<std::int64_t>(batches);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < nb; ++b) {
      const std::int64_t lo = n * b / nb, hi = n * (b + 1) / nb;
      Complex acc = 0.0;
      for (std::int64_t i = lo; i < hi; ++i) {
        acc += conditional_factor(gamma, cs.c1[static_cast<std::size_t>(i)]) *
               conditional_factor(gamma, cs.c2[static_cast<std::size_t>(i)]);
      }
      out[static_cast<std::size_t>(b)] = 2.0 * (acc / static_cast<double>(hi - lo) * k).real();
    }
    return out;
  };

  AdaptiveSimpson quad{integrand};
  // The integrand oscillates with period about 1 in gamma.
  const auto pieces = static_cast<int>(std::ceil(4.0 * mu)) + 2;
  std::vector<double> xs(static_cast<std::size_t>(2 * pieces + 1));
  std::vector<Vec> fx(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = mu * static_cast<double>(i) / static_cast<double>(2 * pieces);
    fx[i] = integrand(xs[i]);
  }
  std::vector<Vec> coarse(static_cast<std::size_t>(pieces));
  double coarse_total = 0.0;
  for (int p = 0; p < pieces; ++p) {
    const auto i = static_cast<std::size_t>(2 * p);
    coarse[static_cast<std::size_t>(p)] = simpson(xs[i], xs[i + 2], fx[i], fx[i + 1], fx[i + 2]);
    coarse_total += mean(coarse[static_cast<std::size_t>(p)]);
  }
  const double tol = rel_tol * std::max(std::fabs(coarse_total), 1e-6) / pieces;
  Vec total(batches, 0.0);
  for (int p = 0; p < pieces; ++p) {
    const auto i = static_cast<std::size_t>(2 * p);
    const Vec part = quad.refine(xs[i], xs[i + 2], fx[i], fx[i + 1], fx[i + 2], coarse[static_cast<std::size_t>(p)],
                                 tol, 40);
    for (std::size_t b = 0; b < batches; ++b) total[b] += part[b];
  }

  IntegralEstimate out;
  out.method = IntegralMethod::oscillatory_truncated;
  out.samples = samples;
  out.seed = seed;
  out.value = mean(total);
  double spread = 0.0;
  if (batches > 1) {
    double ss = 0.0;
    for (double t : total) ss += (t - out.value) * (t - out.value);
    spread = std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
  }
  out.std_error = spread + quad.quad_err;
  return out;
}

IntegralEstimate J_truncated_direct(const FormSpec& spec, double mu, std::int64_t samples,
                                    std::uint64_t seed) {
  if (!(mu >= 1.0) || !std::isfinite(mu)) throw InputError("J_truncated_direct: mu must be >= 1");
  require_samples(samples, 1000, "J_truncated_direct");
  const int d = spec.d();
  std::array<double, detail::kShards> s1{}, s2{};
#pragma omp parallel for schedule(static)
  for (int shard = 0; shard < detail::kShards; ++shard) {
    Uniform01 u(detail::shard_seed(seed, static_cast<std::uint64_t>(shard)));
    const std::int64_t n = shard_count(samples, shard);
    double a = 0, b = 0;
    for (std::int64_t t = 0; t < n; ++t) {
      const double f = sample_fm(d, u) + sample_fm(d, u) - std::pow(u(), d);
      const double w = f == 0.0 ? 2.0 * mu : std::sin(2.0 * kPi * mu * f) / (kPi * f);
      a += w;
      b += w * w;
    }
    s1[shard] = a;
    s2[shard] = b;
  }
  double a = 0, b = 0;
  for (int s = 0; s < detail::kShards; ++s) {
    a += s1[s];
    b += s2[s];
  }
  const double n = static_cast<double>(samples);
  IntegralEstimate out;
  out.method = IntegralMethod::oscillatory_truncated;
  out.samples = samples;
  out.seed = seed;
  out.value = a / n;
  out.std_error = std::sqrt(std::max(0.0, b / n - out.value * out.value) / (n - 1));
  return out;
}

}  // namespace cz
