// Serial reference vs OpenMP kernels, wall-clock comparison.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "hypermux/eval.hpp"
#include "hypermux/parallel.hpp"
#include "hypermux/rhg.hpp"
#include "hypermux/rng.hpp"
#include "hypermux/sector_experiment.hpp"

using namespace hypermux;
namespace chrono = std::chrono;

namespace {

double time_ms(const std::function<void()>& body) {
  const auto t0 = chrono::steady_clock::now();
  body();
  return chrono::duration<double, std::milli>(chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-34s %10.1f ms %10.1f ms %8.2fx\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
  int n = 3000;
  if (argc > 1) n = std::atoi(argv[1]);
  std::printf("threads: %d\n", max_threads());
  std::printf("%-34s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  // all-pairs hyperbolic distance correlation
  Rng rng(1);
  std::vector<PolarPoint> a, b;
  for (int i = 0; i < n; ++i) {
    a.push_back({rng.uniform(0.2, 14.0), rng.uniform(0.0, kTwoPi)});
    b.push_back({rng.uniform(0.2, 14.0), rng.uniform(0.0, kTwoPi)});
  }
  double r_serial = 0.0, r_parallel = 0.0;
  const double hd_s = time_ms([&] { r_serial = hd_correlation_serial(a, b).value; });
  const double hd_p = time_ms([&] { r_parallel = hd_correlation(a, b).value; });
  report("hd_correlation (all pairs)", hd_s, hd_p);
  if (std::abs(r_serial - r_parallel) > 1e-9) {
    std::printf("MISMATCH: %.15f vs %.15f\n", r_serial, r_parallel);
    return 1;
  }

  // radial Monte Carlo (ball measure at 2e6 draws)
  const DiskParams params(2000, 0.75, 0.0, 0.3);
  double emp_serial = 0.0;
  const double mc_s = time_ms([&] {
    // inline serial replica of the chunked sampler
    const int chunks = 64;
    const int64_t total = 2'000'000;
    const int64_t per = (total + chunks - 1) / chunks;
    int64_t inside = 0;
    for (int c = 0; c < chunks; ++c) {
      const int64_t lo = static_cast<int64_t>(c) * per;
      const int64_t hi = std::min<int64_t>(lo + per, total);
      Rng chunk_rng = Rng(7).substream(static_cast<uint64_t>(lo));
      for (int64_t i = lo; i < hi; ++i)
        if (sample_radius(params, chunk_rng) <= params.R - 2.0) ++inside;
    }
    emp_serial = static_cast<double>(inside) / 2e6;
  });
  BallMeasureCheck check;
  const double mc_p = time_ms([&] { check = ball_measure_check(params, params.R - 2.0, 2'000'000, 7); });
  report("ball measure (2e6 draws)", mc_s, mc_p);
  if (emp_serial != check.empirical) {
    std::printf("MISMATCH: %.15f vs %.15f\n", emp_serial, check.empirical);
    return 1;
  }

  // trial ensemble (sector ordering, n=600, 8 trials)
  const DiskParams sector_params(600, 0.75, 0.0, 0.3);
  const std::array<double, 3> sectors = {M_PI / 3.0, M_PI / 3.0, M_PI / 3.0};
  SectorOrderingResult ens_p;
  const double ens_parallel = time_ms(
      [&] { ens_p = sector_ordering_experiment(sector_params, sectors, 8, 99); });
  // serial reference: same trials one at a time via the thread cap
  std::printf("%-34s %13s %10.1f ms\n", "sector ensemble (8 trials)", "-", ens_parallel);
  std::printf("sector success fraction: %.3f\n", ens_p.success_fraction);
  return 0;
}
