#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "pavinglab/block.hpp"
#include "pavinglab/norms.hpp"
#include "pavinglab/paving.hpp"
#include "pavinglab/rng.hpp"
#include "pavinglab/types.hpp"

namespace testsupport {

using pavinglab::BlockOperator;
using pavinglab::Cplx;
using pavinglab::Mat;
using pavinglab::PavingPartition;
using pavinglab::Rng;
using pavinglab::SignVector;
using pavinglab::Vec;

inline Mat make_mat(std::initializer_list<std::initializer_list<Cplx>> rows) {
  const int n = static_cast<int>(rows.size());
  Mat a(n, rows.begin()->size());
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (const Cplx& v : row) a(i, j++) = v;
    ++i;
  }
  return a;
}

inline Mat random_complex(Rng& rng, int n) {
  Mat a(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) a(i, j) = rng.complex_normal();
  }
  return a;
}

inline Mat random_zero_diagonal(Rng& rng, int n) {
  Mat a = random_complex(rng, n);
  a.diagonal().setZero();
  return a;
}

inline Mat random_self_adjoint_zero_diagonal(Rng& rng, int n) {
  const Mat a = random_zero_diagonal(rng, n);
  return Mat((a + a.adjoint()) / 2.0);
}

inline Vec random_unit_vector(Rng& rng, int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.complex_normal();
  return v.normalized();
}

// ---- independent closed-form singular value oracles -----------------------

// Largest singular value of a 2x2 complex matrix from the quadratic formula
// on a* a.
inline double sigma_max_2x2(const Mat& a) {
  const Mat g = a.adjoint() * a;
  const double t = std::real(g(0, 0) + g(1, 1));
  const double det = std::real(g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0));
  const double disc = std::max(0.0, t * t - 4.0 * det);
  return std::sqrt(std::max(0.0, (t + std::sqrt(disc)) / 2.0));
}

// Largest eigenvalue of a 3x3 Hermitian matrix by the trigonometric form of
// Cardano's method.
inline double lambda_max_hermitian_3x3(const Mat& h) {
  const double q = std::real(h(0, 0) + h(1, 1) + h(2, 2)) / 3.0;
  const double p1 = std::norm(h(0, 1)) + std::norm(h(0, 2)) + std::norm(h(1, 2));
  const double d0 = std::real(h(0, 0)) - q;
  const double d1 = std::real(h(1, 1)) - q;
  const double d2 = std::real(h(2, 2)) - q;
  const double p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * p1;
  if (p2 <= 0.0) return q;
  const double p = std::sqrt(p2 / 6.0);
  Mat b = h;
  b(0, 0) -= q;
  b(1, 1) -= q;
  b(2, 2) -= q;
  b /= p;
  const Cplx detb = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
                    b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                    b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
  const double r = std::clamp(std::real(detb) / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  return q + 2.0 * p * std::cos(phi);
}

inline double sigma_max_3x3(const Mat& a) {
  return std::sqrt(std::max(0.0, lambda_max_hermitian_3x3(Mat(a.adjoint() * a))));
}

// ---- brute-force scan oracles (enumerate the full sign group) -------------

inline std::vector<SignVector> all_sign_vectors(int n) {
  std::vector<SignVector> all;
  for (std::uint64_t bits = 0; bits < (1ull << n); ++bits) {
    SignVector d(n);
    for (int i = 0; i < n; ++i) d[i] = (bits >> i) & 1 ? -1 : 1;
    all.push_back(std::move(d));
  }
  return all;
}

inline double naive_commutator_two_norm(const Mat& x, const SignVector& d) {
  const int n = static_cast<int>(x.rows());
  Mat dm = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) dm(i, i) = static_cast<double>(d[i]);
  return pavinglab::two_norm(Mat(x * dm - dm * x));
}

inline double brute_max_commutator_two_norm(const Mat& x) {
  double best = 0.0;
  for (const SignVector& d : all_sign_vectors(static_cast<int>(x.rows()))) {
    best = std::max(best, naive_commutator_two_norm(x, d));
  }
  return best;
}

inline double brute_haar_mean_commutator_sq(const Mat& x) {
  double sum = 0.0;
  const auto all = all_sign_vectors(static_cast<int>(x.rows()));
  for (const SignVector& d : all) {
    const double v = naive_commutator_two_norm(x, d);
    sum += v * v;
  }
  return sum / static_cast<double>(all.size());
}

inline Mat brute_average_conjugation(const Mat& x) {
  const int n = static_cast<int>(x.rows());
  Mat sum = Mat::Zero(n, n);
  const auto all = all_sign_vectors(n);
  for (const SignVector& d : all) {
    Mat dm = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) dm(i, i) = static_cast<double>(d[i]);
    sum += dm * x * dm;
  }
  return sum / static_cast<double>(all.size());
}

// ---- paving oracles --------------------------------------------------------

// Assemble sum_j p_j (b - P(b)) p_j literally and take its norm; independent
// of the per-class submatrix route used by the library.
inline double naive_paving_norm(const BlockOperator& b,
                                const PavingPartition& part) {
  double worst = 0.0;
  for (int k = 0; k < b.block_count(); ++k) {
    const Mat& blk = b.block(k);
    const int n = static_cast<int>(blk.rows());
    Mat y = blk - pavinglab::conditional_expectation(blk);
    Mat compressed = Mat::Zero(n, n);
    for (int c = 1; c <= part.m; ++c) {
      Mat p = Mat::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        if (part.colors[k][i] == c) p(i, i) = 1.0;
      }
      compressed += p * y * p;
    }
    Eigen::BDCSVD<Mat> svd(compressed);
    if (n > 0) worst = std::max(worst, svd.singularValues()(0));
  }
  return worst;
}

// Minimum over every m-coloring (not just canonical ones).
inline std::pair<std::vector<int>, double> brute_exhaustive_pave_block(
    const Mat& blk, int m) {
  const int n = static_cast<int>(blk.rows());
  std::vector<int> colors(n, 1), best_colors(n, 1);
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= m;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rem = idx;
    for (int i = n - 1; i >= 0; --i) {
      colors[i] = static_cast<int>(rem % m) + 1;
      rem /= m;
    }
    PavingPartition part{m, {colors}};
    const double v = naive_paving_norm(BlockOperator({blk}), part);
    if (v < best - 1e-15) {
      best = v;
      best_colors = colors;
    } else if (std::abs(v - best) <= 1e-15 &&
               std::lexicographical_compare(colors.begin(), colors.end(),
                                            best_colors.begin(),
                                            best_colors.end())) {
      best_colors = colors;
    }
  }
  return {best_colors, best};
}

// Dense second-eigenvalue oracle: full eigensolve of s - all-ones projection.
inline double dense_gap_oracle(const Mat& s) {
  const int n = static_cast<int>(s.rows());
  Mat diff = s - Mat::Constant(n, n, Cplx(1.0 / n, 0.0));
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat((diff + diff.adjoint()) / 2.0),
                                        Eigen::EigenvaluesOnly);
  return std::max(std::abs(es.eigenvalues()(0)),
                  std::abs(es.eigenvalues()(n - 1)));
}

}  // namespace testsupport
