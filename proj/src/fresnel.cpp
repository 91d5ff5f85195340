#include "cz/integral.hpp"

#include "cz/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>

namespace cz {

namespace {

constexpr double kPi = std::numbers::pi;

// Power series for |x| <= 1.5, continued fraction (modified Lentz) beyond.
Complex fresnel_positive(double x) {
  constexpr double eps = 1e-16;
  constexpr double fpmin = 1e-300;
  constexpr int max_iter = 200;
  if (x < 1e-150) return {x, 0.0};
  if (x <= 1.5) {
    double sum = 0.0, sums = 0.0, sumc = x;
    double sign = 1.0;
    const double fact = kPi / 2 * x * x;
    bool odd = true;
    double term = x;
    int n = 3;
    for (int k = 1; k <= max_iter; ++k) {
      term *= fact / k;
      sum += sign * term / n;
      const double test = std::fabs(sum) * eps;
      if (odd) {
        sign = -sign;
        sums = sum;
        sum = sumc;
      } else {
        sumc = sum;
        sum = sums;
      }
      if (term < test) break;
      odd = !odd;
      n += 2;
    }
    return {sumc, sums};
  }
  const double pix2 = kPi * x * x;
  Complex b(1.0, -pix2);
  Complex cc(1.0 / fpmin, 0.0);
  Complex d = 1.0 / b;
  Complex h = d;
  int n = -1;
  for (int k = 2; k <= max_iter; ++k) {
    n += 2;
    const double a = -static_cast<double>(n) * (n + 1);
    b += 4.0;
    d = 1.0 / (a * d + b);
    cc = b + a / cc;
    const Complex del = cc * d;
    h *= del;
    if (std::fabs(del.real() - 1.0) + std::fabs(del.imag()) < eps) break;
  }
  h *= Complex(x, -x);
  const Complex cs = Complex(0.5, 0.5) * (1.0 - Complex(std::cos(0.5 * pix2), std::sin(0.5 * pix2)) * h);
  return cs;
}

}  // namespace

Complex fresnel(double x) {
  const Complex v = fresnel_positive(std::fabs(x));
  return x < 0 ? -v : v;
}

Complex quadratic_phase_integral(double c) {
  if (c == 0.0) return 1.0;
  const double z = 2.0 * std::sqrt(std::fabs(c));
  const Complex v = fresnel_positive(z) / z;
  return c > 0 ? v : std::conj(v);
}

Complex power_phase_integral(int d, double gamma) {
  if (d < 1) throw InputError("power_phase_integral: degree must be >= 1");
  if (gamma == 0.0) return 1.0;
  if (d == 2) return quadratic_phase_integral(gamma);
  const double w = 2.0 * kPi * gamma;
  if (d == 1) {
    if (std::fabs(w) < 1e-4) return {1.0 - w * w / 6.0, w / 2.0 - w * w * w / 24.0};
    return {std::sin(w) / w, (1.0 - std::cos(w)) / w};
  }
  // About d*|gamma| oscillations near u = 1; keep several nodes per cycle.
  const int panels = static_cast<int>(std::ceil(std::fabs(gamma) * d)) + 4;
  using Gauss = boost::math::quadrature::gauss<double, 20>;
  double re = 0.0, im = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double a = static_cast<double>(i) / panels;
    const double b = static_cast<double>(i + 1) / panels;
    re += Gauss::integrate([&](double u) { return std::cos(w * std::pow(u, d)); }, a, b);
    im += Gauss::integrate([&](double u) { return std::sin(w * std::pow(u, d)); }, a, b);
  }
  return {re, im};
}

}  // namespace cz
