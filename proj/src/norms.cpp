#include "pavinglab/norms.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "pavinglab/errors.hpp"
#include "pavinglab/lanczos.hpp"

namespace pavinglab {

namespace {

// Above this dimension the direct dense solvers give way to Lanczos.
constexpr int kDenseCutoff = 384;

bool is_exactly_diagonal(const Mat& a) {
  for (int j = 0; j < a.cols(); ++j) {
    for (int i = 0; i < a.rows(); ++i) {
      if (i != j && a(i, j) != Cplx(0.0, 0.0)) return false;
    }
  }
  return true;
}

double hermitian_op_norm(const Mat& h, double tol) {
  const int n = static_cast<int>(h.rows());
  if (n <= kDenseCutoff) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    return std::max(std::abs(es.eigenvalues()(0)),
                    std::abs(es.eigenvalues()(n - 1)));
  }
  LanczosOptions opts;
  opts.tol = std::min(tol, 1e-10);
  opts.max_iter = std::min(n, 500);
  const auto ex = hermitian_extreme_eigs(
      n, [&](const Vec& x, Vec& y) { y.noalias() = h * x; }, opts);
  return std::max(std::abs(ex.min_eig), std::abs(ex.max_eig));
}

}  // namespace

double two_norm(const Mat& b) {
  if (b.rows() != b.cols()) throw ShapeError("two_norm: matrix must be square");
  if (b.rows() == 0) return 0.0;
  return b.norm() / std::sqrt(static_cast<double>(b.rows()));
}

bool is_hermitian(const Mat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return max_abs(Mat(a - a.adjoint())) <= tol;
}

double op_norm(const Mat& b, double tol) {
  if (b.rows() != b.cols()) throw ShapeError("op_norm: matrix must be square");
  if (tol <= 0.0) throw DomainError("op_norm: tol must be positive");
  const int n = static_cast<int>(b.rows());
  if (n == 0) return 0.0;
  const double scale = max_abs(b);
  if (scale == 0.0) return 0.0;
  if (is_exactly_diagonal(b)) return b.diagonal().cwiseAbs().maxCoeff();

  if (max_abs(Mat(b - b.adjoint())) <= 1e-13 * scale) {
    return hermitian_op_norm(Mat((b + b.adjoint()) / 2.0), tol);
  }
  if (n <= kDenseCutoff) {
    Eigen::BDCSVD<Mat> svd(b);
    return svd.singularValues()(0);
  }
  // General case: largest eigenvalue of b* b.
  LanczosOptions opts;
  opts.tol = std::min(tol, 1e-11);
  opts.max_iter = std::min(n, 500);
  const auto ex = hermitian_extreme_eigs(
      n,
      [&](const Vec& x, Vec& y) {
        Vec t = b * x;
        y.noalias() = b.adjoint() * t;
      },
      opts);
  return std::sqrt(std::max(0.0, ex.max_eig));
}

double sup_norm(const BlockOperator& x, double tol) {
  double best = 0.0;
  for (int k = 0; k < x.block_count(); ++k) {
    best = std::max(best, op_norm(x.block(k), tol));
  }
  return best;
}

}  // namespace pavinglab
