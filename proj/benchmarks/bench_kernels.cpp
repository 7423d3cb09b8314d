#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#include <omp.h>

#include "vqebench/gp.hpp"
#include "vqebench/rng.hpp"

using namespace vqebench;

namespace {

std::vector<Observation> make_observations(int n, int dim, RngStream& rng) {
  std::vector<Observation> obs;
  obs.reserve(n);
  for (int i = 0; i < n; ++i) {
    Observation o;
    o.location.resize(dim);
    for (int d = 0; d < dim; ++d) o.location[d] = rng.uniform(0.0, 2.0 * M_PI);
    // Sprinkle derivative rows between the value rows to exercise every
    // kernel dispatch path.
    o.tag = (i % 7 == 0) ? 1 + (i % dim) : 0;
    o.value = rng.normal();
    o.noise_var = 0.01;
    obs.push_back(std::move(o));
  }
  return obs;
}

template <typename F>
double time_best_of(F&& fn, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main() {
  const int dim = 40;
  KernelParams p{9.0, 100.0, std::vector<int>(dim, 1)};
  std::printf("Gram assembly, %d-dimensional product kernel, %d OpenMP threads\n", dim,
              omp_get_max_threads());
  std::printf("%8s %14s %14s %9s %10s\n", "n", "serial [ms]", "parallel [ms]", "speedup",
              "identical");

  RngStream rng(12345);
  for (const int n : {100, 200, 400, 800}) {
    const std::vector<Observation> obs = make_observations(n, dim, rng);
    Eigen::MatrixXd serial, parallel;
    const int reps = n <= 200 ? 20 : 8;
    const double ts = time_best_of([&] { serial = build_gram_serial(obs, p, 0.0); }, reps);
    const double tp = time_best_of([&] { parallel = build_gram_parallel(obs, p, 0.0); }, reps);
    const bool same = serial.rows() == parallel.rows() &&
                      std::memcmp(serial.data(), parallel.data(),
                                  sizeof(double) * static_cast<size_t>(n) * n) == 0;
    std::printf("%8d %14.3f %14.3f %8.2fx %10s\n", n, ts * 1e3, tp * 1e3, ts / tp,
                same ? "yes" : "NO");
    if (!same) return 1;
  }

  std::printf("\nIncremental solver: appending one observation vs full refactorization\n");
  std::printf("%8s %16s %18s\n", "n", "append [ms]", "refactorize [ms]");
  for (const int n : {100, 200, 400}) {
    std::vector<Observation> obs = make_observations(n, dim, rng);
    Dataset ds;
    for (const Observation& o : obs) ds.append(o);
    GpSolver warm(p);
    warm.set_data(ds);
    const Observation extra = make_observations(1, dim, rng)[0];
    const double ta = time_best_of(
        [&] {
          GpSolver s = warm;
          s.append(extra);
        },
        10);
    Dataset full = ds;
    full.append(extra);
    const double tf = time_best_of(
        [&] {
          GpSolver s(p);
          s.set_data(full);
        },
        10);
    std::printf("%8d %16.3f %18.3f\n", n, ta * 1e3, tf * 1e3);
  }
  return 0;
}
