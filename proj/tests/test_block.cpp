#include <doctest.h>

#include <cmath>

#include "pavinglab/block.hpp"
#include "pavinglab/errors.hpp"
#include "pavinglab/norms.hpp"
#include "pavinglab/spectral.hpp"
#include "test_support.hpp"

using namespace pavinglab;
using namespace testsupport;

namespace {
const Cplx kOne(1.0, 0.0);
const Cplx kZero(0.0, 0.0);
}  // namespace

TEST_CASE("block arithmetic basics") {
  const Mat nilpotent = make_mat({{kZero, kOne}, {kZero, kZero}});
  BlockOperator a({nilpotent});
  const BlockOperator adj = adjoint(a);
  CHECK(adj.block(0)(0, 0) == kZero);
  CHECK(adj.block(0)(1, 0) == kOne);
  CHECK(adj.block(0)(0, 1) == kZero);

  Rng rng(11);
  BlockOperator x({random_complex(rng, 2), random_complex(rng, 3)});
  BlockOperator eye({Mat::Identity(2, 2), Mat::Identity(3, 3)});
  const BlockOperator prod = multiply(eye, x);
  for (int k = 0; k < 2; ++k) {
    CHECK(max_abs(Mat(prod.block(k) - x.block(k))) == 0.0);
  }

  const BlockOperator zero = add(x, scale(Cplx(-1.0, 0.0), x));
  CHECK(sup_norm(zero) == 0.0);

  // adjoint is an involution
  const BlockOperator back = adjoint(adjoint(x));
  for (int k = 0; k < 2; ++k) {
    CHECK(max_abs(Mat(back.block(k) - x.block(k))) == 0.0);
  }

  BlockOperator wrong({Mat::Identity(4, 4)});
  CHECK_THROWS_AS(add(x, wrong), ShapeError);
  CHECK_THROWS_AS(multiply(x, wrong), ShapeError);
  CHECK_THROWS_AS(BlockOperator({Mat::Zero(2, 3)}), ShapeError);
}

TEST_CASE("conditional expectation keeps the diagonal only") {
  const Mat x = make_mat({{Cplx(1, 0), Cplx(2, 0)}, {Cplx(3, 0), Cplx(4, 0)}});
  const Mat px = conditional_expectation(x);
  CHECK(px(0, 0) == Cplx(1, 0));
  CHECK(px(1, 1) == Cplx(4, 0));
  CHECK(px(0, 1) == kZero);
  CHECK(px(1, 0) == kZero);

  // idempotent on diagonal input
  const Mat d = make_mat({{Cplx(2, 1), kZero}, {kZero, Cplx(-1, 0)}});
  CHECK(max_abs(Mat(conditional_expectation(d) - d)) == 0.0);

  const Mat swap = make_mat({{kZero, kOne}, {kOne, kZero}});
  CHECK(max_abs(conditional_expectation(swap)) == 0.0);
}

TEST_CASE("conditional expectation is a norm-1 idempotent") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(7));
    const Mat x = random_complex(rng, n);
    const Mat px = conditional_expectation(x);
    CHECK(op_norm(px) <= op_norm(x) + 1e-9);
    CHECK(max_abs(Mat(conditional_expectation(px) - px)) == 0.0);
  }
}

TEST_CASE("two_norm agrees with the normalized trace") {
  CHECK(two_norm(Mat::Identity(5, 5)) == doctest::Approx(1.0).epsilon(1e-14));
  Mat e11 = Mat::Zero(2, 2);
  e11(0, 0) = kOne;
  CHECK(two_norm(e11) == doctest::Approx(0.7071067811865476).epsilon(1e-12));
  const Mat swap = make_mat({{kZero, kOne}, {kOne, kZero}});
  CHECK(two_norm(swap) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("op_norm examples") {
  const Mat nil = make_mat({{kZero, kOne}, {kZero, kZero}});
  CHECK(op_norm(nil) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(op_norm(Mat::Constant(2, 2, kOne)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(op_norm(Mat::Constant(3, 3, Cplx(1.0 / 3, 0))) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(op_norm(nil, 0.0), DomainError);
}

TEST_CASE("op_norm matches closed-form 2x2 and 3x3 singular values") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const Mat a2 = random_complex(rng, 2);
    CHECK(op_norm(a2) == doctest::Approx(sigma_max_2x2(a2)).epsilon(1e-9));
    const Mat a3 = random_complex(rng, 3);
    CHECK(op_norm(a3) == doctest::Approx(sigma_max_3x3(a3)).epsilon(1e-9));
  }
}

TEST_CASE("iterative op_norm path matches the dense oracle") {
  Rng rng(41);
  // Hermitian, beyond the dense cutoff.
  Mat a = random_complex(rng, 420);
  a = (a + Mat(a.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  const double oracle = std::max(std::abs(es.eigenvalues()(0)),
                                 std::abs(es.eigenvalues()(419)));
  CHECK(op_norm(a) == doctest::Approx(oracle).epsilon(1e-8));

  // General (non-Hermitian) large path.
  const Mat g = random_complex(rng, 420);
  Eigen::BDCSVD<Mat> svd(g);
  CHECK(op_norm(g) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-8));
}

TEST_CASE("norm comparison: two_norm <= op_norm <= sqrt(n) two_norm") {
  Rng rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(8));
    const Mat x = random_complex(rng, n);
    const double two = two_norm(x);
    const double op = op_norm(x);
    CHECK(two <= op + 1e-10);
    CHECK(op <= std::sqrt(static_cast<double>(n)) * two + 1e-10);
  }
}

TEST_CASE("sup_norm over blocks") {
  CHECK(sup_norm(BlockOperator({Mat::Zero(3, 3)})) == 0.0);
  BlockOperator mixed({Mat::Identity(2, 2), 2.0 * Mat::Identity(3, 3)});
  CHECK(sup_norm(mixed) == doctest::Approx(2.0).epsilon(1e-12));
  BlockOperator pb({Mat::Constant(2, 2, Cplx(0.5, 0)),
                    Mat::Constant(3, 3, Cplx(1.0 / 3, 0))});
  CHECK(sup_norm(pb) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spectral projection examples") {
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = Cplx(0.05, 0);
  d(1, 1) = Cplx(0.5, 0);
  const Mat inside = spectral_projection(d, -0.1, 0.1);
  CHECK(max_abs(Mat(inside - make_mat({{kOne, kZero}, {kZero, kZero}}))) < 1e-12);
  const Mat outside = Mat::Identity(2, 2) - inside;
  CHECK(max_abs(Mat(outside - make_mat({{kZero, kZero}, {kZero, kOne}}))) < 1e-12);

  CHECK(max_abs(Mat(spectral_projection(Mat::Zero(3, 3), -1.0, 1.0) -
                    Mat::Identity(3, 3))) < 1e-12);

  const Mat swap = make_mat({{kZero, kOne}, {kOne, kZero}});
  const Mat proj = spectral_projection(swap, 0.0, 2.0);
  CHECK(max_abs(Mat(proj - Mat::Constant(2, 2, Cplx(0.5, 0)))) < 1e-10);

  const Mat nil = make_mat({{kZero, kOne}, {kZero, kZero}});
  CHECK_THROWS_AS(spectral_projection(nil, -1.0, 1.0), DomainError);
}

TEST_CASE("spectral projections are projections and commute with the input") {
  Rng rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(7));
    Mat a = random_complex(rng, n);
    a = ((a + Mat(a.adjoint())) / 2.0).eval();
    const double cut = rng.uniform(-1.0, 1.0);
    const Mat p = spectral_projection(a, cut, std::numeric_limits<double>::infinity());
    CHECK(op_norm(Mat(p * p - p)) < 1e-10);
    CHECK(op_norm(Mat(p - p.adjoint())) < 1e-10);
    CHECK(op_norm(Mat(p * a - a * p)) < 1e-9);
  }
}

TEST_CASE("projection predicates") {
  BlockOperator pb({Mat::Constant(2, 2, Cplx(0.5, 0)),
                    Mat::Constant(3, 3, Cplx(1.0 / 3, 0))});
  const ProjectionReport pb_rep = projection_report(pb);
  CHECK(pb_rep.is_projection);
  CHECK(pb_rep.is_abelian);
  CHECK(pb_rep.ranks == std::vector<int>{1, 1});
  CHECK_FALSE(pb_rep.is_diagonal);

  BlockOperator eyes({Mat::Identity(2, 2), Mat::Identity(2, 2)});
  const ProjectionReport eye_rep = projection_report(eyes);
  CHECK(eye_rep.is_projection);
  CHECK_FALSE(eye_rep.is_abelian);
  CHECK(eye_rep.is_diagonal);
  CHECK(eye_rep.ranks == std::vector<int>{2, 2});

  BlockOperator nil({make_mat({{kZero, kOne}, {kZero, kZero}})});
  const ProjectionReport nil_rep = projection_report(nil);
  CHECK_FALSE(nil_rep.is_projection);
  CHECK_FALSE(nil_rep.is_abelian);
  CHECK_FALSE(nil_rep.is_diagonal);
}
