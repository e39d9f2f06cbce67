#include "pavinglab/block.hpp"

#include <Eigen/Eigenvalues>

#include "pavinglab/norms.hpp"

namespace pavinglab {

BlockOperator::BlockOperator(std::vector<Mat> blocks)
    : blocks_(std::move(blocks)) {
  for (const Mat& b : blocks_) {
    if (b.rows() != b.cols()) {
      throw ShapeError("block operator: blocks must be square");
    }
  }
}

std::vector<int> BlockOperator::dims() const {
  std::vector<int> d(blocks_.size());
  for (size_t k = 0; k < blocks_.size(); ++k) {
    d[k] = static_cast<int>(blocks_[k].rows());
  }
  return d;
}

bool BlockOperator::same_shape(const BlockOperator& other) const {
  if (block_count() != other.block_count()) return false;
  for (int k = 0; k < block_count(); ++k) {
    if (blocks_[k].rows() != other.blocks_[k].rows()) return false;
  }
  return true;
}

BlockOperator DiagonalOperator::to_block_operator() const {
  std::vector<Mat> blocks;
  blocks.reserve(diagonals_.size());
  for (const Vec& d : diagonals_) {
    blocks.push_back(Mat(d.asDiagonal()));
  }
  return BlockOperator(std::move(blocks));
}

namespace {

void require_same_shape(const BlockOperator& a, const BlockOperator& b,
                        const char* what) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(what) + ": block dimensions do not match");
  }
}

}  // namespace

BlockOperator add(const BlockOperator& a, const BlockOperator& b) {
  require_same_shape(a, b, "add");
  std::vector<Mat> blocks;
  blocks.reserve(a.block_count());
  for (int k = 0; k < a.block_count(); ++k) {
    blocks.push_back(a.block(k) + b.block(k));
  }
  return BlockOperator(std::move(blocks));
}

BlockOperator multiply(const BlockOperator& a, const BlockOperator& b) {
  require_same_shape(a, b, "multiply");
  std::vector<Mat> blocks;
  blocks.reserve(a.block_count());
  for (int k = 0; k < a.block_count(); ++k) {
    blocks.push_back(a.block(k) * b.block(k));
  }
  return BlockOperator(std::move(blocks));
}

BlockOperator adjoint(const BlockOperator& a) {
  std::vector<Mat> blocks;
  blocks.reserve(a.block_count());
  for (int k = 0; k < a.block_count(); ++k) {
    blocks.push_back(a.block(k).adjoint());
  }
  return BlockOperator(std::move(blocks));
}

BlockOperator scale(Cplx c, const BlockOperator& a) {
  std::vector<Mat> blocks;
  blocks.reserve(a.block_count());
  for (int k = 0; k < a.block_count(); ++k) {
    blocks.push_back(c * a.block(k));
  }
  return BlockOperator(std::move(blocks));
}

Mat conditional_expectation(const Mat& x) {
  return Mat(x.diagonal().asDiagonal());
}

BlockOperator conditional_expectation(const BlockOperator& x) {
  std::vector<Mat> blocks;
  blocks.reserve(x.block_count());
  for (int k = 0; k < x.block_count(); ++k) {
    blocks.push_back(conditional_expectation(x.block(k)));
  }
  return BlockOperator(std::move(blocks));
}

DiagonalOperator diagonal_of(const BlockOperator& x) {
  std::vector<Vec> diags;
  diags.reserve(x.block_count());
  for (int k = 0; k < x.block_count(); ++k) {
    diags.push_back(x.block(k).diagonal());
  }
  return DiagonalOperator(std::move(diags));
}

ProjectionReport projection_report(const BlockOperator& p) {
  constexpr double kTol = 1e-10;
  ProjectionReport rep;
  rep.is_projection = true;
  rep.is_diagonal = true;
  rep.ranks.resize(p.block_count(), 0);
  for (int k = 0; k < p.block_count(); ++k) {
    const Mat& b = p.block(k);
    if (b.rows() == 0) continue;
    if (op_norm(b * b - b) > kTol || op_norm(Mat(b - b.adjoint())) > kTol) {
      rep.is_projection = false;
    }
    for (int j = 0; j < b.cols() && rep.is_diagonal; ++j) {
      for (int i = 0; i < b.rows(); ++i) {
        if (i != j && b(i, j) != Cplx(0.0, 0.0)) {
          rep.is_diagonal = false;
          break;
        }
      }
    }
    // Projections have spectrum {0,1}; 1/2 is the maximal-margin rank cut.
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat((b + b.adjoint()) / 2.0),
                                          Eigen::EigenvaluesOnly);
    rep.ranks[k] = static_cast<int>((es.eigenvalues().array() > 0.5).count());
  }
  rep.is_abelian = rep.is_projection;
  for (int r : rep.ranks) {
    if (r > 1) rep.is_abelian = false;
  }
  return rep;
}

}  // namespace pavinglab
