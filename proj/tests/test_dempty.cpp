#include <doctest.h>

#include "pavinglab/block.hpp"
#include "pavinglab/dempty.hpp"
#include "pavinglab/errors.hpp"
#include "pavinglab/rng.hpp"
#include "test_support.hpp"

using namespace pavinglab;
using namespace testsupport;

namespace {

const Cplx kOne(1.0, 0.0);
const Cplx kZero(0.0, 0.0);

Mat reconstruct(const DEmptyDecomposition& decomp,
                const std::vector<int>& dims, int block) {
  Mat sum = Mat::Zero(dims[block], dims[block]);
  for (size_t i = 0; i < decomp.patterns.size(); ++i) {
    for (int r = 0; r < dims[block]; ++r) {
      const int c = decomp.patterns[i].col_of_row[block][r];
      if (c >= 0) sum(r, c) += decomp.coefficients[i].diagonal(block)(r);
    }
  }
  return sum;
}

// b = sum of `terms` random diagonal-times-partial-permutation products;
// d-empty with d = terms by construction.
Mat random_d_empty(Rng& rng, int n, int terms) {
  Mat b = Mat::Zero(n, n);
  for (int t = 0; t < terms; ++t) {
    const std::vector<int> perm = rng.permutation(n);
    for (int i = 0; i < n; ++i) {
      if (rng.uniform() < 0.8) b(i, perm[i]) += rng.complex_normal();
    }
  }
  return b;
}

}  // namespace

TEST_CASE("d-empty certificates") {
  Mat perm = Mat::Zero(3, 3);
  perm(0, 1) = kOne;
  perm(1, 2) = kOne;
  perm(2, 0) = kOne;
  CHECK(check_d_empty(BlockOperator({perm}), 1).ok);

  BlockOperator ones({Mat::Constant(4, 4, kOne)});
  CHECK(check_d_empty(ones, 4).ok);
  const DEmptyCheck refused = check_d_empty(ones, 3);
  CHECK_FALSE(refused.ok);
  REQUIRE(refused.violation.has_value());
  CHECK(refused.violation->count == 4);

  const Mat two = make_mat({{Cplx(1, 0), Cplx(2, 0)}, {Cplx(3, 0), kZero}});
  CHECK(check_d_empty(BlockOperator({two}), 2).ok);
  CHECK_FALSE(check_d_empty(BlockOperator({two}), 1).ok);
}

TEST_CASE("decomposition of the worked 2x2 example") {
  const Mat b = make_mat({{Cplx(1, 0), Cplx(2, 0)}, {Cplx(3, 0), kZero}});
  const auto decomp = decompose_d_empty(BlockOperator({b}), 2);
  REQUIRE(decomp.patterns.size() == 2);
  CHECK(max_abs(Mat(reconstruct(decomp, {2}, 0) - b)) == 0.0);
  for (const auto& pattern : decomp.patterns) {
    CHECK(is_almost_permutation(pattern.to_block_operator({2})));
  }
  // the antidiagonal part carries values (2, 3), the remainder is e11
  bool found_swap = false, found_corner = false;
  for (size_t i = 0; i < decomp.patterns.size(); ++i) {
    const auto& cols = decomp.patterns[i].col_of_row[0];
    if (cols == std::vector<int>{1, 0}) {
      found_swap = true;
      CHECK(decomp.coefficients[i].diagonal(0)(0) == Cplx(2, 0));
      CHECK(decomp.coefficients[i].diagonal(0)(1) == Cplx(3, 0));
    }
    if (cols == std::vector<int>{0, -1}) {
      found_corner = true;
      CHECK(decomp.coefficients[i].diagonal(0)(0) == Cplx(1, 0));
    }
  }
  CHECK(found_swap);
  CHECK(found_corner);
}

TEST_CASE("permutation and diagonal special cases") {
  Mat perm = Mat::Zero(3, 3);
  perm(0, 1) = kOne;
  perm(1, 2) = kOne;
  perm(2, 0) = kOne;
  const auto pd = decompose_d_empty(BlockOperator({perm}), 1);
  REQUIRE(pd.patterns.size() == 1);
  CHECK(pd.patterns[0].col_of_row[0] == std::vector<int>{1, 2, 0});
  for (int i = 0; i < 3; ++i) {
    CHECK(pd.coefficients[0].diagonal(0)(i) == kOne);
  }

  Mat diag = Mat::Zero(3, 3);
  diag(0, 0) = Cplx(5, 0);
  diag(2, 2) = Cplx(7, 1);
  const auto dd = decompose_d_empty(BlockOperator({diag}), 1);
  REQUIRE(dd.patterns.size() == 1);
  CHECK(dd.patterns[0].col_of_row[0] == std::vector<int>{0, -1, 2});
  CHECK(dd.coefficients[0].diagonal(0)(0) == Cplx(5, 0));
  CHECK(dd.coefficients[0].diagonal(0)(1) == kZero);
  CHECK(dd.coefficients[0].diagonal(0)(2) == Cplx(7, 1));

  CHECK_THROWS_AS(decompose_d_empty(BlockOperator({Mat::Constant(3, 3, kOne)}), 2),
                  DomainError);
}

TEST_CASE("random d-empty operators reconstruct exactly with <= d pairs") {
  Rng rng(1001);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(rng.uniform_int(7));
    const int n = 4 + static_cast<int>(rng.uniform_int(29));
    const Mat b0 = random_d_empty(rng, n, d);
    const Mat b1 = random_d_empty(rng, n / 2 + 2, d);
    BlockOperator b({b0, b1});
    REQUIRE(check_d_empty(b, d).ok);
    const auto decomp = decompose_d_empty(b, d);
    CHECK(decomp.patterns.size() <= static_cast<size_t>(d));
    const std::vector<int> dims = b.dims();
    for (int k = 0; k < 2; ++k) {
      CHECK(max_abs(Mat(reconstruct(decomp, dims, k) - b.block(k))) == 0.0);
    }
    for (const auto& pattern : decomp.patterns) {
      CHECK(is_almost_permutation(pattern.to_block_operator(dims)));
    }
  }
}

TEST_CASE("almost permutation predicate") {
  Mat good = Mat::Zero(3, 3);
  good(0, 2) = kOne;
  good(2, 0) = kOne;
  CHECK(is_almost_permutation(BlockOperator({good})));

  Mat bad_value = good;
  bad_value(1, 1) = Cplx(0.5, 0);
  CHECK_FALSE(is_almost_permutation(BlockOperator({bad_value})));

  Mat bad_row = good;
  bad_row(0, 1) = kOne;
  CHECK_FALSE(is_almost_permutation(BlockOperator({bad_row})));

  Mat bad_col = good;
  bad_col(1, 2) = kOne;
  CHECK_FALSE(is_almost_permutation(BlockOperator({bad_col})));
}
