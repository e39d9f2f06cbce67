#pragma once

#include <optional>
#include <vector>

#include "pavinglab/block.hpp"
#include "pavinglab/types.hpp"

namespace pavinglab {

// Per-block partial permutation: at most one entry per row and column, each
// equal to 1. col_of_row[k][r] is the mapped column of row r, or -1.
struct AlmostPermutation {
  std::vector<std::vector<int>> col_of_row;
  BlockOperator to_block_operator(const std::vector<int>& dims) const;
};

// Entrywise predicate on a materialized operator: nonzeros are exactly 1 and
// form a partial permutation pattern.
bool is_almost_permutation(const BlockOperator& b);

struct DEmptyCertificate {
  int d = 0;
  std::vector<std::vector<int>> row_counts;
  std::vector<std::vector<int>> col_counts;
};

struct DEmptyViolation {
  int block = 0;
  int index = 0;
  bool is_row = true;
  int count = 0;
};

struct DEmptyCheck {
  bool ok = false;
  DEmptyCertificate certificate;
  std::optional<DEmptyViolation> violation;
};

// Exact-zero support test: counts entries with nonzero stored value. No
// modulus threshold; inputs are constructed, not measured.
DEmptyCheck check_d_empty(const BlockOperator& b, int d);

struct DEmptyDecomposition {
  std::vector<DiagonalOperator> coefficients;
  std::vector<AlmostPermutation> patterns;
};

// Writes a d-empty operator as sum_i c_i b_i with diagonal c_i and almost
// permutations b_i, at most d pairs, exact entrywise reconstruction. The
// support is treated as a bipartite graph of max degree <= d, padded to
// regular, and peeled into perfect matchings (edge-coloring argument).
// Throws DomainError if b is not d-empty.
DEmptyDecomposition decompose_d_empty(const BlockOperator& b, int d);

}  // namespace pavinglab
