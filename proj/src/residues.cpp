#include "cz/errors.hpp"
#include "cz/expsums.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>

namespace cz {

namespace {

// f_m(x) takes at most q^m values, so counts stay below 2^126 when q^m does.
void check_modulus(int m, std::int64_t q, const ExpsumBudget& budget) {
  if (q < 1) throw InputError("modulus must be >= 1");
  if (q > budget.max_modulus) {
    throw CapacityError("residue table modulus " + std::to_string(q) + " exceeds budget " +
                        std::to_string(budget.max_modulus));
  }
  i128 total = 0;
  if (!checked_pow(q, m, total) || total > (static_cast<i128>(1) << 125)) {
    throw CapacityError("residue counts q^m exceed 125 bits");
  }
}

std::vector<i128> square_counts(std::int64_t q) {
  std::vector<i128> sq(static_cast<std::size_t>(q), 0);
  for (std::int64_t y = 0; y < q; ++y) {
    sq[static_cast<std::size_t>(static_cast<u128>(y) * y % static_cast<u128>(q))] += 1;
  }
  return sq;
}

std::vector<i128> additive_self_convolution(const std::vector<i128>& v) {
  const auto q = static_cast<std::int64_t>(v.size());
  std::vector<std::int64_t> support;
  for (std::int64_t i = 0; i < q; ++i) {
    if (v[static_cast<std::size_t>(i)] != 0) support.push_back(i);
  }
  std::vector<i128> out(v.size(), 0);
  for (std::int64_t s : support) {
    for (std::int64_t t : support) {
      std::int64_t r = s + t;
      if (r >= q) r -= q;
      out[static_cast<std::size_t>(r)] += v[static_cast<std::size_t>(s)] * v[static_cast<std::size_t>(t)];
    }
  }
  return out;
}

std::vector<i128> multiplicative_convolution(const std::vector<i128>& a, const std::vector<i128>& b) {
  const auto q = static_cast<std::int64_t>(a.size());
  std::vector<std::int64_t> sb;
  for (std::int64_t v = 0; v < q; ++v) {
    if (b[static_cast<std::size_t>(v)] != 0) sb.push_back(v);
  }
  std::vector<i128> out(a.size(), 0);
  for (std::int64_t u = 0; u < q; ++u) {
    const i128 au = a[static_cast<std::size_t>(u)];
    if (au == 0) continue;
    for (std::int64_t v : sb) {
      const auto r = static_cast<std::size_t>(static_cast<u128>(u) * static_cast<u128>(v) % static_cast<u128>(q));
      out[r] += au * b[static_cast<std::size_t>(v)];
    }
  }
  return out;
}

}  // namespace

ResidueCounts fd_residue_counts(int m, std::int64_t q, const ExpsumBudget& budget) {
  if (m < 0) throw InputError("form arity must be >= 0");
  check_modulus(m, q, budget);
  ResidueCounts out{m, q, std::vector<i128>(static_cast<std::size_t>(q), 0)};

  std::vector<i128> cur(static_cast<std::size_t>(q), 0);
  if (m % 2 == 1) {
    for (auto& c : cur) c = 1;
  } else {
    cur[static_cast<std::size_t>(1 % q)] = 1;
  }
  if (m >= 2) {
    const std::vector<i128> two = additive_self_convolution(square_counts(q));
    for (int i = 0; i < m / 2; ++i) cur = multiplicative_convolution(cur, two);
  }
  out.counts = std::move(cur);
  return out;
}

std::shared_ptr<const ResidueCounts> cached_residue_counts(int m, std::int64_t q,
                                                           const ExpsumBudget& budget) {
  check_modulus(m, q, budget);
  static std::shared_mutex mutex;
  static std::map<std::pair<int, std::int64_t>, std::shared_ptr<const ResidueCounts>> cache;
  const auto key = std::make_pair(m, q);
  {
    std::shared_lock lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const ResidueCounts>(fd_residue_counts(m, q, budget));
  std::unique_lock lock(mutex);
  auto [it, inserted] = cache.emplace(key, std::move(built));
  (void)inserted;
  return it->second;
}

}  // namespace cz
