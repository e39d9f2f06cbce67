// Timing harness comparing the serial reference kernels against their
// OpenMP counterparts on representative workloads. The two paths must agree
// exactly; the unit tests pin that, this target reports the speedups.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pavinglab/expander.hpp"
#include "pavinglab/norms.hpp"
#include "pavinglab/paving.hpp"
#include "pavinglab/rng.hpp"
#include "pavinglab/symmetry.hpp"

using namespace pavinglab;

namespace {

Mat random_hollow(Rng& rng, int n) {
  Mat a(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) a(i, j) = rng.complex_normal();
  }
  a.diagonal().setZero();
  return a;
}

double time_ms(const std::function<void()>& fn, int reps) {
  const auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

void row(const std::string& name, double serial_ms, double parallel_ms,
         bool match) {
  std::printf("%-28s %10.2f ms %10.2f ms %8.2fx   %s\n", name.c_str(),
              serial_ms, parallel_ms, serial_ms / parallel_ms,
              match ? "match" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  int reps = 3;
  if (argc > 1) reps = std::max(1, std::atoi(argv[1]));
#ifdef _OPENMP
  std::printf("threads: %d, reps: %d\n", omp_get_max_threads(), reps);
#else
  std::printf("threads: 1 (OpenMP off), reps: %d\n", reps);
#endif
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel",
              "speedup");

  Rng rng(2024);

  {
    const Mat x = random_hollow(rng, 17);
    SignScanResult rs, rp;
    const double ts = time_ms([&] { rs = max_commutator_two_norm_serial(x); }, reps);
    const double tp = time_ms([&] { rp = max_commutator_two_norm(x); }, reps);
    row("sign scan two-norm n=17", ts, tp,
        rs.value == rp.value && rs.argmax == rp.argmax);
  }
  {
    const Mat x = random_hollow(rng, 17);
    double hs = 0, hp = 0;
    const double ts = time_ms([&] { hs = haar_average_commutator_sq_serial(x); }, reps);
    const double tp = time_ms([&] { hp = haar_average_commutator_sq(x); }, reps);
    row("haar average n=17", ts, tp, hs == hp);
  }
  {
    Mat x = random_hollow(rng, 11);
    x = ((x + Mat(x.adjoint())) / 2.0).eval();
    SignScanResult rs, rp;
    const double ts = time_ms([&] { rs = max_commutator_op_norm_serial(x); }, reps);
    const double tp = time_ms([&] { rp = max_commutator_op_norm(x); }, reps);
    row("sign scan op-norm n=11", ts, tp,
        rs.value == rp.value && rs.argmax == rp.argmax);
  }
  {
    const BlockOperator b({random_hollow(rng, 10)});
    std::pair<PavingPartition, double> s, p;
    const double ts = time_ms([&] { s = exhaustive_pave_serial(b, 3); }, reps);
    const double tp = time_ms([&] { p = exhaustive_pave(b, 3); }, reps);
    row("exhaustive pave n=10 m=3", ts, tp,
        s.second == p.second && s.first.colors == p.first.colors);
  }
  {
    const BlockOperator b({random_hollow(rng, 48)});
    std::pair<PavingPartition, double> s, p;
    const double ts =
        time_ms([&] { s = random_pave_serial(b, 3, 16, 7, 64); }, reps);
    const double tp = time_ms([&] { p = random_pave(b, 3, 16, 7, 64); }, reps);
    row("random pave n=48 x16", ts, tp,
        s.second == p.second && s.first.colors == p.first.colors);
  }
  {
    const int trials = 8;
    std::vector<double> ls(trials), lp(trials);
    const double ts = time_ms(
        [&] {
          for (int t = 0; t < trials; ++t) {
            auto [ps, s] = random_permutation_sum(1500, 10, derive_seed(5, t));
            ls[t] = second_eigenvalue(s, 1e-9);
          }
        },
        reps);
    const double tp = time_ms(
        [&] {
#pragma omp parallel for schedule(dynamic)
          for (int t = 0; t < trials; ++t) {
            auto [ps, s] = random_permutation_sum(1500, 10, derive_seed(5, t));
            lp[t] = second_eigenvalue(s, 1e-9);
          }
        },
        reps);
    row("expander batch n=1500 x8", ts, tp, ls == lp);
  }
  return 0;
}
