#include "cz/forms.hpp"

namespace cz {

namespace {

void require_arity(const Point& x, int n, const char* what) {
  if (static_cast<int>(x.size()) != n) {
    throw InputError(std::string(what) + ": expected " + std::to_string(n) +
                     " coordinates, got " + std::to_string(x.size()));
  }
}

// Index ranges of the two-square factors of f_d on a block starting at `off`.
std::vector<std::pair<int, int>> square_pairs(const FormSpec& spec, int off) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = spec.odd() ? 1 : 0; i + 1 < spec.d(); i += 2) {
    pairs.emplace_back(off + i, off + i + 1);
  }
  return pairs;
}

// Partial derivatives of f_d on the block x[off .. off+d).
void block_gradient(const FormSpec& spec, const Point& x, int off, Point& grad) {
  const auto pairs = square_pairs(spec, off);
  std::vector<BigInt> factors;
  for (auto [a, b] : pairs) factors.push_back(x[a] * x[a] + x[b] * x[b]);
  const BigInt lead = spec.odd() ? x[off] : BigInt(1);

  if (spec.odd()) {
    BigInt prod = 1;
    for (const auto& f : factors) prod *= f;
    grad[off] = prod;
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    BigInt others = lead;
    for (std::size_t j = 0; j < factors.size(); ++j) {
      if (j != i) others *= factors[j];
    }
    grad[pairs[i].first] = 2 * x[pairs[i].first] * others;
    grad[pairs[i].second] = 2 * x[pairs[i].second] * others;
  }
}

}  // namespace

FormSpec::FormSpec(int degree) : d_(degree) {
  if (degree < 1) throw InputError("degree must be >= 1, got " + std::to_string(degree));
}

BigInt FormSpec::fd_max(std::int64_t P) const { return big_pow(2, k()) * big_pow(P, d_); }

BigInt eval_fd(const FormSpec& spec, const Point& x) {
  return eval_fd<BigInt>(spec, std::span<const BigInt>(x));
}

BigInt eval_f(const FormSpec& spec, const Point& x) {
  require_arity(x, spec.n_vars(), "eval_f");
  const int d = spec.d();
  std::span<const BigInt> all(x);
  BigInt last_pow;
  mpz_pow_ui(last_pow.get_mpz_t(), x.back().get_mpz_t(), static_cast<unsigned long>(d));
  return eval_fd<BigInt>(spec, all.subspan(0, d)) + eval_fd<BigInt>(spec, all.subspan(d, d)) -
         last_pow;
}

Point gradient_f(const FormSpec& spec, const Point& x) {
  require_arity(x, spec.n_vars(), "gradient_f");
  const int d = spec.d();
  Point grad(x.size(), BigInt(0));
  block_gradient(spec, x, 0, grad);
  block_gradient(spec, x, d, grad);
  BigInt last_pow;
  mpz_pow_ui(last_pow.get_mpz_t(), x.back().get_mpz_t(), static_cast<unsigned long>(d - 1));
  grad.back() = -d * last_pow;
  return grad;
}

Point nonsingular_witness(const FormSpec& spec) {
  const int d = spec.d();
  Point w(static_cast<std::size_t>(spec.n_vars()), BigInt(0));
  const int last_odd = 2 * ((d - 1) / 2) + 1;
  for (int i = 1; i <= last_odd; i += 2) w[static_cast<std::size_t>(i - 1)] = 1;
  w.back() = 1;
  return w;
}

}  // namespace cz
