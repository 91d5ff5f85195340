// Serial reference kernels against the OpenMP ones on the same inputs.
//
//   cz_bench [d P [reps]]

#include "cz/counting.hpp"
#include "cz/integral.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

namespace {

double best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel, bool same) {
  std::printf("%-26s %10.4f %10.4f %8.2fx  %s\n", name, serial, parallel, serial / parallel,
              same ? "match" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int d = argc > 1 ? std::atoi(argv[1]) : 3;
  const std::int64_t P = argc > 2 ? std::atoll(argv[2]) : 64;
  const int reps = argc > 3 ? std::atoi(argv[3]) : 3;
  const cz::FormSpec spec(d);
  const cz::BigInt lim = cz::big_pow(P, d);
  const std::uint64_t limit = lim.get_ui();

  std::printf("d=%d P=%lld threads=%d\n", d, static_cast<long long>(P), omp_get_max_threads());
  std::printf("%-26s %10s %10s %9s\n", "kernel", "serial s", "omp s", "speedup");

  cz::CountTable ts, tp;
  const double s1 = best_of(reps, [&] { ts = cz::serial::rep_counts_upto(spec, P, limit); });
  const double p1 = best_of(reps, [&] { tp = cz::rep_counts_upto(spec, P, limit); });
  row("rep_counts_upto", s1, p1, ts.values == tp.values);

  cz::ExactCount cs, cp;
  const double s2 = best_of(reps, [&] { cs = cz::serial::count_zeros_from_table(spec, ts); });
  const double p2 = best_of(reps, [&] { cp = cz::count_zeros_from_table(spec, tp); });
  row("count_zeros_from_table", s2, p2, cs == cp);

  cz::IntegralEstimate js, jp;
  const int threads = omp_get_max_threads();
  omp_set_num_threads(1);
  const double s3 = best_of(reps, [&] { js = cz::J_region(spec, 2'000'000, 7); });
  omp_set_num_threads(threads);
  const double p3 = best_of(reps, [&] { jp = cz::J_region(spec, 2'000'000, 7); });
  row("J_region (1 vs N threads)", s3, p3, js.value == jp.value);
  return 0;
}
