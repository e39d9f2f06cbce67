#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace pavinglab {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;

// Diagonal +/-1 sign pattern; the self-adjoint unitaries of the diagonal
// subalgebra are exactly these.
using SignVector = std::vector<int>;

inline double max_abs(const Mat& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

}  // namespace pavinglab
