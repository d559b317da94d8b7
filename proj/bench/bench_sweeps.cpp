// Serial versus OpenMP timings for the three sweeps.
//   bench_sweeps [scale]   (scale multiplies the sample counts, default 1)

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "g2kit/sweep.hpp"

using namespace g2kit;

namespace {

template <typename F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, std::size_t n, double serial, double parallel, bool same) {
  std::printf("%-16s n=%-6zu serial %8.3f s  parallel %8.3f s  speedup %5.2fx  %s\n", name, n, serial, parallel,
              serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const double scale = argc > 1 ? std::atof(argv[1]) : 1.0;
  std::printf("threads: %d\n", omp_get_max_threads());
  bool all_same = true;

  {
    const auto n = static_cast<std::size_t>(2000 * scale);
    std::vector<TorsionSweepRow> a, b;
    const double ts = seconds([&] { a = torsion_sweep_serial(n, 42); });
    const double tp = seconds([&] { b = torsion_sweep(n, 42); });
    report("torsion", n, ts, tp, a == b);
    all_same = all_same && a == b;
  }
  {
    const auto n = static_cast<std::size_t>(1000 * scale);
    std::vector<SolitonSweepRow> a, b;
    const double ts = seconds([&] { a = soliton_sweep_serial(n, 7); });
    const double tp = seconds([&] { b = soliton_sweep(n, 7); });
    report("soliton", n, ts, tp, a == b);
    all_same = all_same && a == b;
  }
  {
    const auto n = static_cast<std::size_t>(64 * scale);
    std::vector<CoclosedParams> inits;
    for (std::size_t i = 0; i < n; ++i) {
      auto rng = indexed_rng(99, i);
      std::uniform_real_distribution<double> u(0.1, 2.0);
      const double a = u(rng);
      const double b = u(rng);
      const double c = u(rng);
      inits.push_back(family46(a, b, c));
    }
    FlowOptions opts;
    opts.sample_dt = 0.1;
    std::vector<FlowSweepRow> a, b;
    const double ts = seconds([&] { a = flow_sweep_serial(inits, 20.0, opts); });
    const double tp = seconds([&] { b = flow_sweep(inits, 20.0, opts); });
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) {
      same = a[i].final_sample.p == b[i].final_sample.p && a[i].steps == b[i].steps;
    }
    report("flow", n, ts, tp, same);
    all_same = all_same && same;
  }
  return all_same ? 0 : 1;
}
