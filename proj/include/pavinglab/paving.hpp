#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pavinglab/block.hpp"
#include "pavinglab/types.hpp"

namespace pavinglab {

// Coloring of every coordinate of every block into classes 1..m. The
// classes define diagonal projections p_1..p_m summing to the identity.
struct PavingPartition {
  int m = 1;
  std::vector<std::vector<int>> colors;  // per block, 1-based class indices
};

// Throws ShapeError/DomainError if the partition does not match dims or uses
// out-of-range classes.
void validate_partition(const PavingPartition& part,
                        const std::vector<int>& dims);

// || sum_j p_j (b - P(b)) p_j || = max over blocks and classes of the
// compressed off-diagonal submatrix norm.
double paving_norm(const BlockOperator& b, const PavingPartition& part,
                   double tol = 1e-9);

// Globally minimal paving norm over all m-colorings, minimized blockwise.
// Enumerates canonical colorings (restricted growth strings); ties break to
// the lexicographically smallest coloring. Capacity: block dims <= 12, m <= 4.
std::pair<PavingPartition, double> exhaustive_pave(const BlockOperator& b,
                                                   int m);
std::pair<PavingPartition, double> exhaustive_pave_serial(
    const BlockOperator& b, int m);

// Random restarts plus first-improvement single-coordinate recoloring.
// Per-trial seeds are seed + trial index, so the result is schedule
// independent and bit-for-bit reproducible.
std::pair<PavingPartition, double> random_pave(const BlockOperator& b, int m,
                                               long trials, std::uint64_t seed,
                                               long local_moves);
std::pair<PavingPartition, double> random_pave_serial(const BlockOperator& b,
                                                      int m, long trials,
                                                      std::uint64_t seed,
                                                      long local_moves);

// Constructive paver for abelian projections (per-block rank <= 1, block
// q_n = v v*). Coordinates of weight w_i = |v_i|^2 >= eps/2 become singleton
// classes (compressed difference exactly zero); the rest are first-fit-
// decreasing packed into classes of weight sum < eps. Guarantees
// paving_norm < 2*eps with at most 2*ceil(2/eps)+1 classes.
// Throws DomainError unless q is an abelian projection and eps in (0,1).
std::pair<PavingPartition, double> pave_abelian(const BlockOperator& q,
                                                double eps);

// Same construction on one block given its unit vector directly; avoids
// materializing v v* for large n. Returns (colors, compressed norm).
std::pair<std::vector<int>, double> pave_unit_vector(const Vec& v, double eps);

// || p_S (v v* - diag|v|^2) p_S || maximized over the classes of a coloring.
// Computed from the weights |v_i|^2 alone via the rank-one secular equation,
// so it is exact and never materializes v v*.
double rank_one_paving_norm(const Vec& v, const std::vector<int>& colors,
                            int m);

}  // namespace pavinglab
