#include <doctest.h>

#include <cmath>

#include "pavinglab/block.hpp"
#include "pavinglab/errors.hpp"
#include "pavinglab/norms.hpp"
#include "pavinglab/symmetry.hpp"
#include "test_support.hpp"

using namespace pavinglab;
using namespace testsupport;

namespace {
const Cplx kOne(1.0, 0.0);
const Cplx kZero(0.0, 0.0);
const Mat kSwap = make_mat({{kZero, kOne}, {kOne, kZero}});
}  // namespace

TEST_CASE("commutator two-norm examples") {
  CHECK(commutator_two_norm(kSwap, {1, -1}) == doctest::Approx(2.0).epsilon(1e-14));
  Rng rng(7);
  const Mat x = random_complex(rng, 4);
  CHECK(commutator_two_norm(x, {1, 1, 1, 1}) == 0.0);
  CHECK(commutator_two_norm(Mat::Zero(3, 3), {1, -1, 1}) == 0.0);
  CHECK_THROWS_AS(commutator_two_norm(x, {1, -1}), ShapeError);
}

TEST_CASE("matrix and closed-form commutator norms agree") {
  Rng rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + trial % 7;  // 2..8
    const Mat x = random_complex(rng, n);
    for (int rep = 0; rep < 50; ++rep) {
      SignVector d(n);
      for (int i = 0; i < n; ++i) d[i] = rng.uniform() < 0.5 ? 1 : -1;
      const double direct = commutator_two_norm(x, d);
      const double closed = commutator_two_norm_closed_form(x, d);
      CHECK(std::abs(direct - closed) <= 1e-12 * std::max(1.0, closed));
      // sign-flip symmetry is exact
      SignVector neg = d;
      for (int& s : neg) s = -s;
      CHECK(commutator_two_norm_closed_form(x, neg) == closed);
    }
  }
}

TEST_CASE("exhaustive two-norm scan examples") {
  const auto res = max_commutator_two_norm(kSwap);
  CHECK(res.value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(res.argmax == SignVector{1, -1});
  CHECK(res.value >= std::sqrt(2.0) * two_norm(kSwap) - 1e-9);

  const Mat pauli_y = make_mat({{kZero, Cplx(0, 1)}, {Cplx(0, -1), kZero}});
  CHECK(max_commutator_two_norm(pauli_y).value == doctest::Approx(2.0).epsilon(1e-14));

  Mat diag = Mat::Zero(2, 2);
  diag(0, 0) = Cplx(1, 0);
  diag(1, 1) = Cplx(2, 0);
  CHECK(max_commutator_two_norm(diag).value == 0.0);

  CHECK_THROWS_AS(max_commutator_two_norm(Mat::Zero(21, 21)), CapacityError);
}

TEST_CASE("exhaustive scan matches brute force and the averaging bound") {
  Rng rng(27);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(6));
    const Mat x = random_zero_diagonal(rng, n);
    const auto res = max_commutator_two_norm(x);
    const double brute = brute_max_commutator_two_norm(x);
    CHECK(res.value == doctest::Approx(brute).epsilon(1e-11));
    CHECK(res.value >= std::sqrt(2.0) * two_norm(x) - 1e-9);
  }
}

TEST_CASE("parallel and serial scans return identical results") {
  Rng rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(9));
    const Mat x = random_zero_diagonal(rng, n);
    const auto par = max_commutator_two_norm(x);
    const auto ser = max_commutator_two_norm_serial(x);
    CHECK(par.value == ser.value);
    CHECK(par.argmax == ser.argmax);

    const Mat h = random_self_adjoint_zero_diagonal(rng, std::min(n, 7));
    const auto par_op = max_commutator_op_norm(h);
    const auto ser_op = max_commutator_op_norm_serial(h);
    CHECK(par_op.value == ser_op.value);
    CHECK(par_op.argmax == ser_op.argmax);
  }
}

TEST_CASE("haar average examples and identity") {
  CHECK(haar_average_commutator_sq(kSwap) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(haar_average_commutator_sq(Mat::Zero(3, 3)) == 0.0);

  Rng rng(47);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(7));
    const Mat x = random_complex(rng, n);
    const double mean = haar_average_commutator_sq(x);
    const Mat hollow = x - conditional_expectation(x);
    const double expect = 2.0 * two_norm(hollow) * two_norm(hollow);
    CHECK(mean == doctest::Approx(expect).epsilon(1e-12));
    CHECK(mean == doctest::Approx(brute_haar_mean_commutator_sq(x)).epsilon(1e-11));
    CHECK(haar_average_commutator_sq_serial(x) == mean);
  }
  CHECK_THROWS_AS(haar_average_commutator_sq(Mat::Zero(21, 21)), CapacityError);
}

TEST_CASE("op-norm scan examples and the self-adjoint bound") {
  const auto res = max_commutator_op_norm(kSwap);
  CHECK(res.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(res.argmax == SignVector{1, -1});
  CHECK(res.value >= op_norm(kSwap) - 1e-8);

  CHECK(max_commutator_op_norm(Mat::Zero(3, 3)).value == 0.0);

  Rng rng(57);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(5));
    const Mat x = random_self_adjoint_zero_diagonal(rng, n);
    CHECK(max_commutator_op_norm(x).value >= op_norm(x) - 1e-8);
  }

  // hypothesis violations are rejected
  const Mat nonherm = make_mat({{kZero, kOne}, {kZero, kZero}});
  CHECK_THROWS_AS(max_commutator_op_norm(nonherm), DomainError);
  Mat withdiag = kSwap;
  withdiag(0, 0) = Cplx(1, 0);
  withdiag(1, 1) = Cplx(1, 0);
  CHECK_THROWS_AS(max_commutator_op_norm(withdiag), DomainError);
}

TEST_CASE("average conjugation equals the diagonal compression") {
  const Mat x = make_mat({{Cplx(1, 0), Cplx(5, 0)}, {Cplx(7, 0), Cplx(2, 0)}});
  const Mat avg = average_conjugation(x);
  Mat expected = Mat::Zero(2, 2);
  expected(0, 0) = Cplx(1, 0);
  expected(1, 1) = Cplx(2, 0);
  CHECK(max_abs(Mat(avg - expected)) < 1e-12);

  Mat d = Mat::Zero(3, 3);
  d(0, 0) = Cplx(2, 1);
  d(1, 1) = Cplx(-1, 0);
  d(2, 2) = Cplx(0, 3);
  CHECK(max_abs(Mat(average_conjugation(d) - d)) == 0.0);

  Rng rng(67);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(6));
    const Mat z = random_zero_diagonal(rng, n);
    CHECK(max_abs(average_conjugation(z)) < 1e-12);
    const Mat g = random_complex(rng, n);
    CHECK(max_abs(Mat(average_conjugation(g) - conditional_expectation(g))) < 1e-12);
    CHECK(max_abs(Mat(average_conjugation(g) - brute_average_conjugation(g))) < 1e-12);
  }
}

TEST_CASE("sampled scans never beat exhaustive and reproduce by seed") {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + static_cast<int>(rng.uniform_int(5));
    const Mat x = random_zero_diagonal(rng, n);
    const auto full = max_commutator_two_norm(x);
    const auto sampled = max_commutator_two_norm_sampled(x, 50, 123);
    CHECK(sampled.value <= full.value + 1e-12);
    const auto again = max_commutator_two_norm_sampled(x, 50, 123);
    CHECK(sampled.value == again.value);
    CHECK(sampled.argmax == again.argmax);

    const Mat h = random_self_adjoint_zero_diagonal(rng, n);
    const auto full_op = max_commutator_op_norm(h);
    const auto sampled_op = max_commutator_op_norm_sampled(h, 50, 5);
    CHECK(sampled_op.value <= full_op.value + 1e-12);
  }
}
