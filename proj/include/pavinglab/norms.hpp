#pragma once

#include "pavinglab/block.hpp"
#include "pavinglab/types.hpp"

namespace pavinglab {

// Normalized-trace 2-norm: sqrt(trace(b* b) / n) = Frobenius / sqrt(n).
double two_norm(const Mat& b);

// Largest singular value to relative accuracy tol. Direct solvers for small
// blocks, deflated Lanczos for large ones (on b itself when Hermitian, on
// b* b otherwise). Throws NumericError with the best estimate if the
// iterative path stalls.
double op_norm(const Mat& b, double tol = 1e-9);

// Max over blocks of op_norm.
double sup_norm(const BlockOperator& x, double tol = 1e-9);

bool is_hermitian(const Mat& a, double tol = 1e-10);

}  // namespace pavinglab
