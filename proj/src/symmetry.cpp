#include "pavinglab/symmetry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Eigenvalues>

#include "pavinglab/block.hpp"
#include "pavinglab/errors.hpp"
#include "pavinglab/norms.hpp"
#include "pavinglab/rng.hpp"

namespace pavinglab {

namespace {

void require_square(const Mat& x) {
  if (x.rows() != x.cols()) throw ShapeError("symmetry: matrix must be square");
}

void require_capacity(const Mat& x) {
  if (x.rows() > kSignScanMaxDim) {
    throw CapacityError("exhaustive sign scan limited to n <= 20");
  }
}

// +1 sorts before -1; first difference decides.
bool lex_less(const SignVector& a, const SignVector& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return false;
}

// Entry |x_ij|^2 table; S(d) = sum over split pairs drives everything below.
Eigen::MatrixXd abs_squared(const Mat& x) {
  return x.cwiseAbs2().real();
}

// Exact split weight S(d) = sum_{i != j, d_i != d_j} |x_ij|^2, fixed
// summation order so every evaluation path produces identical bits.
double split_weight(const Eigen::MatrixXd& r, const SignVector& d) {
  const int n = static_cast<int>(r.rows());
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (d[i] != d[j]) s += r(i, j) + r(j, i);
    }
  }
  return s;
}

double split_to_two_norm(double s, int n) {
  // |d_j - d_i|^2 is 4 on split pairs; two-norm squared is 4 S / n.
  return 2.0 * std::sqrt(s / static_cast<double>(n));
}

SignVector decode_representative(std::uint64_t index, int n) {
  const std::uint64_t gray = index ^ (index >> 1);
  SignVector d(n, 1);
  for (int j = 1; j < n; ++j) {
    if ((gray >> (j - 1)) & 1ull) d[j] = -1;
  }
  return d;
}

// Split-weight change from flipping coordinate k.
double flip_delta(const Eigen::MatrixXd& r, const SignVector& d, int k) {
  const int n = static_cast<int>(r.rows());
  double delta = 0.0;
  const int flipped = -d[k];
  for (int j = 0; j < n; ++j) {
    if (j == k) continue;
    const double w = r(k, j) + r(j, k);
    delta += (d[j] != flipped) ? w : -w;
  }
  return delta;
}

constexpr std::uint64_t kChunkTarget = 256;
constexpr std::uint64_t kRefreshStride = 4096;

std::uint64_t representative_count(int n) {
  return n <= 1 ? 1ull : (1ull << (n - 1));
}

// Chunk count depends only on the problem size, never on the thread count,
// so partial results always combine in the same order.
std::uint64_t chunk_count(std::uint64_t reps, std::uint64_t min_grain) {
  return std::min<std::uint64_t>(kChunkTarget,
                                 std::max<std::uint64_t>(1, reps / min_grain));
}

struct ChunkBest {
  double value = -1.0;
  SignVector arg;
};

void merge_best(ChunkBest& into, const ChunkBest& from) {
  if (from.value < 0.0) return;
  if (from.value > into.value ||
      (from.value == into.value &&
       (into.arg.empty() || lex_less(from.arg, into.arg)))) {
    into = from;
  }
}

// One Gray-order pass over representatives [begin, end). The incremental
// split weight is only a screen; candidates near the chunk best are rescored
// with the exact fixed-order sum, so results do not depend on the walk.
ChunkBest scan_two_norm_chunk(const Eigen::MatrixXd& r, std::uint64_t begin,
                              std::uint64_t end, double slack) {
  const int n = static_cast<int>(r.rows());
  SignVector d = decode_representative(begin, n);
  double s_inc = split_weight(r, d);
  ChunkBest best;
  for (std::uint64_t i = begin; i < end; ++i) {
    if (s_inc >= best.value - slack) {
      const double s_exact = split_weight(r, d);
      ChunkBest cand{s_exact, d};
      merge_best(best, cand);
    }
    if (i + 1 < end) {
      const int k = std::countr_zero(i + 1) + 1;
      s_inc += flip_delta(r, d, k);
      d[k] = -d[k];
      if ((i + 1) % kRefreshStride == 0) s_inc = split_weight(r, d);
    }
  }
  return best;
}

double haar_chunk_sum(const Eigen::MatrixXd& r, std::uint64_t begin,
                      std::uint64_t end) {
  const int n = static_cast<int>(r.rows());
  SignVector d = decode_representative(begin, n);
  double s_inc = split_weight(r, d);
  double sum = 0.0;
  for (std::uint64_t i = begin; i < end; ++i) {
    sum += s_inc;
    if (i + 1 < end) {
      const int k = std::countr_zero(i + 1) + 1;
      s_inc += flip_delta(r, d, k);
      d[k] = -d[k];
      if ((i + 1) % kRefreshStride == 0) s_inc = split_weight(r, d);
    }
  }
  return sum;
}

double op_norm_commutator(const Mat& x, const SignVector& d) {
  const int n = static_cast<int>(x.rows());
  Mat h(n, n);
  const Cplx iu(0.0, 1.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      // i (x d - d x) is Hermitian for self-adjoint x.
      h(i, j) = iu * x(i, j) * static_cast<double>(d[j] - d[i]);
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return std::max(std::abs(es.eigenvalues()(0)),
                  std::abs(es.eigenvalues()(n - 1)));
}

SignScanResult scan_two_norm(const Mat& x, bool parallel) {
  require_square(x);
  require_capacity(x);
  const int n = static_cast<int>(x.rows());
  if (n == 0) return {{}, 0.0};
  const Eigen::MatrixXd r = abs_squared(x);
  const double slack = 1e-9 * (r.sum() + 1e-300);
  const std::uint64_t reps = representative_count(n);
  const std::uint64_t chunks = chunk_count(reps, 512);
  std::vector<ChunkBest> results(chunks);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    const std::uint64_t begin = reps * c / chunks;
    const std::uint64_t end = reps * (c + 1) / chunks;
    results[c] = scan_two_norm_chunk(r, begin, end, slack);
  }
  ChunkBest best;
  for (const ChunkBest& cb : results) merge_best(best, cb);
  return {best.arg, split_to_two_norm(best.value, n)};
}

void require_op_scan_preconditions(const Mat& x) {
  if (!is_hermitian(x, 1e-10)) {
    throw DomainError("op-norm sign scan: input must be self-adjoint");
  }
  if (x.rows() > 0 && x.diagonal().cwiseAbs().maxCoeff() > 1e-10) {
    throw DomainError("op-norm sign scan: input must have zero diagonal");
  }
}

SignScanResult scan_op_norm(const Mat& x, bool parallel) {
  require_square(x);
  require_capacity(x);
  require_op_scan_preconditions(x);
  const int n = static_cast<int>(x.rows());
  if (n == 0) return {{}, 0.0};
  const std::uint64_t reps = representative_count(n);
  const std::uint64_t chunks = chunk_count(reps, 8);
  std::vector<ChunkBest> results(chunks);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    const std::uint64_t begin = reps * c / chunks;
    const std::uint64_t end = reps * (c + 1) / chunks;
    ChunkBest best;
    SignVector d = decode_representative(begin, n);
    for (std::uint64_t i = begin; i < end; ++i) {
      ChunkBest cand{op_norm_commutator(x, d), d};
      merge_best(best, cand);
      if (i + 1 < end) {
        const int k = std::countr_zero(i + 1) + 1;
        d[k] = -d[k];
      }
    }
    results[c] = best;
  }
  ChunkBest best;
  for (const ChunkBest& cb : results) merge_best(best, cb);
  return {best.arg, best.value};
}

SignVector random_representative(Rng& rng, int n) {
  SignVector d(n, 1);
  for (int j = 1; j < n; ++j) d[j] = rng.uniform() < 0.5 ? 1 : -1;
  return d;
}

template <typename Eval>
SignScanResult sampled_scan(const Mat& x, long trials, std::uint64_t seed,
                            Eval eval) {
  require_square(x);
  const int n = static_cast<int>(x.rows());
  if (n == 0 || trials <= 0) return {{}, 0.0};
  std::vector<ChunkBest> results(trials);
#pragma omp parallel for schedule(dynamic)
  for (long t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    SignVector d = random_representative(rng, n);
    results[t] = ChunkBest{eval(d), std::move(d)};
  }
  // First trial wins ties so the outcome is independent of scheduling.
  ChunkBest best;
  for (const ChunkBest& cb : results) {
    if (cb.value > best.value) best = cb;
  }
  return {best.arg, best.value};
}

}  // namespace

double commutator_two_norm(const Mat& x, const SignVector& d) {
  require_square(x);
  const int n = static_cast<int>(x.rows());
  if (static_cast<int>(d.size()) != n) {
    throw ShapeError("commutator: sign vector length must match dimension");
  }
  Mat c(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      c(i, j) = x(i, j) * static_cast<double>(d[j] - d[i]);
    }
  }
  return two_norm(c);
}

double commutator_two_norm_closed_form(const Mat& x, const SignVector& d) {
  require_square(x);
  const int n = static_cast<int>(x.rows());
  if (static_cast<int>(d.size()) != n) {
    throw ShapeError("commutator: sign vector length must match dimension");
  }
  if (n == 0) return 0.0;
  const Eigen::MatrixXd r = abs_squared(x);
  return split_to_two_norm(split_weight(r, d), n);
}

SignScanResult max_commutator_two_norm(const Mat& x) {
  return scan_two_norm(x, true);
}

SignScanResult max_commutator_two_norm_serial(const Mat& x) {
  return scan_two_norm(x, false);
}

SignScanResult max_commutator_two_norm_sampled(const Mat& x, long trials,
                                               std::uint64_t seed) {
  const Eigen::MatrixXd r = abs_squared(x);
  const int n = static_cast<int>(x.rows());
  return sampled_scan(x, trials, seed, [&](const SignVector& d) {
    return split_to_two_norm(split_weight(r, d), n);
  });
}

namespace {

double haar_average_impl(const Mat& x, bool parallel) {
  require_square(x);
  require_capacity(x);
  const int n = static_cast<int>(x.rows());
  if (n == 0) return 0.0;
  const Eigen::MatrixXd r = abs_squared(x);
  const std::uint64_t reps = representative_count(n);
  const std::uint64_t chunks = chunk_count(reps, 2048);
  std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    const std::uint64_t begin = reps * c / chunks;
    const std::uint64_t end = reps * (c + 1) / chunks;
    partial[c] = haar_chunk_sum(r, begin, end);
  }
  double total = 0.0;
  for (double p : partial) total += p;
  const double mean_split = total / static_cast<double>(reps);
  return 4.0 * mean_split / static_cast<double>(n);
}

}  // namespace

double haar_average_commutator_sq(const Mat& x) {
  return haar_average_impl(x, true);
}

double haar_average_commutator_sq_serial(const Mat& x) {
  return haar_average_impl(x, false);
}

SignScanResult max_commutator_op_norm(const Mat& x) {
  return scan_op_norm(x, true);
}

SignScanResult max_commutator_op_norm_serial(const Mat& x) {
  return scan_op_norm(x, false);
}

SignScanResult max_commutator_op_norm_sampled(const Mat& x, long trials,
                                              std::uint64_t seed) {
  require_op_scan_preconditions(x);
  return sampled_scan(x, trials, seed,
                      [&](const SignVector& d) { return op_norm_commutator(x, d); });
}

Mat average_conjugation(const Mat& x) {
  require_square(x);
  require_capacity(x);
  const int n = static_cast<int>(x.rows());
  if (n == 0) return x;
  const std::uint64_t reps = representative_count(n);
  const std::uint64_t chunks = chunk_count(reps, 256);
  // d x d = (-d) x (-d), so averaging the representatives is exact. The sign
  // tallies are integers, making the average independent of chunking.
  std::vector<Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>>
      tallies(chunks);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    auto& acc = tallies[c];
    acc.setZero(n, n);
    const std::uint64_t begin = reps * c / chunks;
    const std::uint64_t end = reps * (c + 1) / chunks;
    SignVector d = decode_representative(begin, n);
    for (std::uint64_t i = begin; i < end; ++i) {
      for (int col = 0; col < n; ++col) {
        for (int row = 0; row < n; ++row) {
          acc(row, col) += d[row] * d[col];
        }
      }
      if (i + 1 < end) {
        const int k = std::countr_zero(i + 1) + 1;
        d[k] = -d[k];
      }
    }
  }
  for (std::uint64_t c = 1; c < chunks; ++c) tallies[0] += tallies[c];
  Mat out(n, n);
  for (int col = 0; col < n; ++col) {
    for (int row = 0; row < n; ++row) {
      out(row, col) = x(row, col) * static_cast<double>(tallies[0](row, col)) /
                      static_cast<double>(reps);
    }
  }
  return out;
}

}  // namespace pavinglab
