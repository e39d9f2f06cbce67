#pragma once

#include <cstdint>

#include "pavinglab/types.hpp"

namespace pavinglab {

// Exhaustive scans enumerate the 2^(n-1) sign vectors with d[0] = +1; d and
// -d give equal commutators, so these are a full set of representatives.
// The cutoff keeps exhaustive mode under ~10^6 evaluations per matrix.
inline constexpr int kSignScanMaxDim = 20;

struct SignScanResult {
  SignVector argmax;
  double value = 0.0;
};

// ||x d - d x||_2 for a diagonal sign pattern d, evaluated on the actual
// commutator matrix.
double commutator_two_norm(const Mat& x, const SignVector& d);

// Same quantity by the closed form sqrt((1/n) sum_{i!=j} |x_ij|^2 |d_j-d_i|^2);
// the two routes agree to 1e-12 relative and tests pin that.
double commutator_two_norm_closed_form(const Mat& x, const SignVector& d);

// Maximize ||xd - dx||_2 over all sign vectors. For zero-diagonal x the
// maximum is at least sqrt(2)*||x||_2 (averaging argument). Ties break to
// the lexicographically smallest sign vector (+1 before -1).
SignScanResult max_commutator_two_norm(const Mat& x);
SignScanResult max_commutator_two_norm_serial(const Mat& x);
SignScanResult max_commutator_two_norm_sampled(const Mat& x, long trials,
                                               std::uint64_t seed);

// Exact uniform average of ||xd - dx||_2^2 over the full sign group;
// equals 2*||x - P(x)||_2^2.
double haar_average_commutator_sq(const Mat& x);
double haar_average_commutator_sq_serial(const Mat& x);

// Maximize the operator norm ||xu - ux|| over sign vectors. Requires x
// self-adjoint with zero diagonal (the hypotheses under which the bound
// max >= ||x|| holds).
SignScanResult max_commutator_op_norm(const Mat& x);
SignScanResult max_commutator_op_norm_serial(const Mat& x);
SignScanResult max_commutator_op_norm_sampled(const Mat& x, long trials,
                                              std::uint64_t seed);

// Exact uniform average of u x u over the sign group; equals the diagonal
// compression of x entrywise (off-diagonal terms cancel in pairs).
Mat average_conjugation(const Mat& x);

}  // namespace pavinglab
