#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pavinglab/block.hpp"
#include "pavinglab/types.hpp"

namespace pavinglab {

// d/2 permutations of {0..n-1} defining s = (1/d) sum (b_a + b_a*).
struct PermutationSet {
  int n = 0;
  std::vector<std::vector<int>> perms;  // 0-based images
};

// Sparse symmetric average of permutation matrices and their adjoints.
// Entries are integer multiplicities over d, stored in CSR form; row and
// column multiplicity sums are exactly d, so s applied to the all-ones
// vector returns it exactly.
struct PermutationSum {
  int n = 0;
  int d = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<int> mult;

  void apply(const double* x, double* y) const;
  void apply(const Vec& x, Vec& y) const;
  Mat to_dense() const;
  int max_nonzeros_per_line() const;  // max over rows and columns
};

// Rank-one projection onto the all-ones vector: every entry 1/n.
Mat all_ones_projection(int n);

PermutationSum build_permutation_sum(const PermutationSet& ps);

// Samples d/2 independent uniform permutations. Requires d even, 2 <= d < n.
std::pair<PermutationSet, PermutationSum> random_permutation_sum(
    int n, int d, std::uint64_t seed);

// Largest eigenvalue modulus on the orthogonal complement of the all-ones
// vector (deflated Lanczos). Equals ||s - all_ones_projection(n)||.
double second_eigenvalue(const PermutationSum& s, double tol = 1e-9);
// Same for a dense matrix fixing the all-ones vector.
double second_eigenvalue(const Mat& s, double tol = 1e-9);

// High-probability second-eigenvalue bound (2*sqrt(d-1) + 1)/d for the
// random d-regular permutation model.
double friedman_bound(int d);

struct ApproxBlockReport {
  int n = 0;
  bool sampled = false;  // false: copied exactly (below the cutoff)
  int attempts = 0;
  std::uint64_t seed = 0;  // seed of the accepted attempt
  double lambda2 = 0.0;
  std::optional<PermutationSet> perms;
};

struct ApproxAllOnesResult {
  BlockOperator c;
  int d = 0;
  int n0 = 0;
  std::vector<ApproxBlockReport> blocks;
};

// Approximates the all-ones projection by permutation sums blockwise:
// chooses the minimal even d with friedman_bound(d) < delta, resamples each
// block until its second eigenvalue is below delta (at most max_attempts
// times), and copies blocks below the cutoff n0 exactly. On success
// sup_norm(p - c) < delta and every sampled block is d-empty.
// Throws SamplingError (best lambda2 attached) when a block exhausts its
// attempts; DomainError on invalid delta or d >= some block size.
ApproxAllOnesResult approximate_all_ones(double delta,
                                         const std::vector<int>& block_sizes,
                                         std::uint64_t seed,
                                         int max_attempts = 64,
                                         std::optional<int> n0_override = {});

// Rank-one projection with unimodular eigenvector (e^{i theta_1}, ...):
// q = u u* / n. Diagonal entries are all 1/n.
Mat hadamard_projection(const std::vector<double>& theta);

// w* x w for the diagonal unitary w = diag(e^{-i theta_k}), oriented so the
// all-ones projection conjugates to hadamard_projection(theta).
Mat conjugate_by_phase(const std::vector<double>& theta, const Mat& x);

}  // namespace pavinglab
