#pragma once

#include <vector>

#include "pavinglab/errors.hpp"
#include "pavinglab/types.hpp"

namespace pavinglab {

// Finite truncation of a block-diagonal operator: an ordered list of square
// complex blocks. Value type; all operations on it are pure.
class BlockOperator {
 public:
  BlockOperator() = default;
  explicit BlockOperator(std::vector<Mat> blocks);

  int block_count() const { return static_cast<int>(blocks_.size()); }
  const Mat& block(int k) const { return blocks_[k]; }
  Mat& block(int k) { return blocks_[k]; }
  const std::vector<Mat>& blocks() const { return blocks_; }
  std::vector<int> dims() const;
  bool same_shape(const BlockOperator& other) const;

 private:
  std::vector<Mat> blocks_;
};

// Per-block diagonal; embeds into BlockOperator with zero off-diagonal.
class DiagonalOperator {
 public:
  DiagonalOperator() = default;
  explicit DiagonalOperator(std::vector<Vec> diagonals)
      : diagonals_(std::move(diagonals)) {}

  int block_count() const { return static_cast<int>(diagonals_.size()); }
  const Vec& diagonal(int k) const { return diagonals_[k]; }
  Vec& diagonal(int k) { return diagonals_[k]; }
  BlockOperator to_block_operator() const;

 private:
  std::vector<Vec> diagonals_;
};

BlockOperator add(const BlockOperator& a, const BlockOperator& b);
BlockOperator multiply(const BlockOperator& a, const BlockOperator& b);
BlockOperator adjoint(const BlockOperator& a);
BlockOperator scale(Cplx c, const BlockOperator& a);

// Projection onto the diagonal subalgebra: keeps each block's diagonal,
// zeroes everything else. Idempotent, norm-1, positive.
Mat conditional_expectation(const Mat& x);
BlockOperator conditional_expectation(const BlockOperator& x);
DiagonalOperator diagonal_of(const BlockOperator& x);

struct ProjectionReport {
  bool is_projection = false;
  bool is_diagonal = false;
  bool is_abelian = false;
  std::vector<int> ranks;  // eigenvalue count above 1/2, per block
};

// Predicates, not assertions: never throws on "bad" input.
ProjectionReport projection_report(const BlockOperator& p);

}  // namespace pavinglab
