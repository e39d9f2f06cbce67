#include "pavinglab/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "pavinglab/errors.hpp"

namespace pavinglab {

namespace {

constexpr double kSelfAdjointTol = 1e-10;

double boundary_margin(const Eigen::VectorXd& eigs) {
  const double scale =
      eigs.size() == 0 ? 1.0 : std::max(1.0, eigs.cwiseAbs().maxCoeff());
  return 1e-12 * scale;
}

}  // namespace

Mat spectral_projection(const Mat& a, double lo, double hi) {
  if (a.rows() != a.cols()) {
    throw ShapeError("spectral_projection: matrix must be square");
  }
  if (max_abs(Mat(a - a.adjoint())) > kSelfAdjointTol) {
    throw DomainError("spectral_projection: input is not self-adjoint");
  }
  const int n = static_cast<int>(a.rows());
  if (n == 0) return a;
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat((a + a.adjoint()) / 2.0));
  const Eigen::VectorXd eigs = es.eigenvalues();
  const double margin = boundary_margin(eigs);

  Mat p = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (eigs(i) > lo - margin && eigs(i) < hi + margin) {
      const Vec v = es.eigenvectors().col(i);
      p.noalias() += v * v.adjoint();
    }
  }
  return p;
}

int spectral_rank_outside(const Mat& a, double t) {
  if (a.rows() != a.cols()) {
    throw ShapeError("spectral_rank_outside: matrix must be square");
  }
  if (max_abs(Mat(a - a.adjoint())) > kSelfAdjointTol) {
    throw DomainError("spectral_rank_outside: input is not self-adjoint");
  }
  const int n = static_cast<int>(a.rows());
  if (n == 0) return 0;
  bool diagonal = true;
  for (int j = 0; j < n && diagonal; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i != j && a(i, j) != Cplx(0.0, 0.0)) {
        diagonal = false;
        break;
      }
    }
  }
  Eigen::VectorXd eigs;
  if (diagonal) {
    eigs = a.diagonal().real();
  } else {
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat((a + a.adjoint()) / 2.0),
                                          Eigen::EigenvaluesOnly);
    eigs = es.eigenvalues();
  }
  const double margin = boundary_margin(eigs);
  int inside = 0;
  for (int i = 0; i < n; ++i) {
    if (eigs(i) > -t - margin && eigs(i) < t + margin) ++inside;
  }
  return n - inside;
}

}  // namespace pavinglab
