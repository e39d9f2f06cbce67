#include "pavinglab/expander.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pavinglab/errors.hpp"
#include "pavinglab/lanczos.hpp"
#include "pavinglab/norms.hpp"
#include "pavinglab/rng.hpp"

namespace pavinglab {

Mat all_ones_projection(int n) {
  if (n < 1) throw DomainError("all_ones_projection: n must be positive");
  return Mat::Constant(n, n, Cplx(1.0 / n, 0.0));
}

void PermutationSum::apply(const double* x, double* y) const {
  const double inv_d = 1.0 / d;
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int e = row_ptr[i]; e < row_ptr[i + 1]; ++e) {
      acc += mult[e] * x[col[e]];
    }
    y[i] = acc * inv_d;
  }
}

void PermutationSum::apply(const Vec& x, Vec& y) const {
  y.resize(n);
  const double inv_d = 1.0 / d;
  for (int i = 0; i < n; ++i) {
    Cplx acc(0.0, 0.0);
    for (int e = row_ptr[i]; e < row_ptr[i + 1]; ++e) {
      acc += static_cast<double>(mult[e]) * x(col[e]);
    }
    y(i) = acc * inv_d;
  }
}

Mat PermutationSum::to_dense() const {
  Mat out = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int e = row_ptr[i]; e < row_ptr[i + 1]; ++e) {
      out(i, col[e]) = Cplx(static_cast<double>(mult[e]) / d, 0.0);
    }
  }
  return out;
}

int PermutationSum::max_nonzeros_per_line() const {
  std::vector<int> col_nnz(n, 0);
  int worst = 0;
  for (int i = 0; i < n; ++i) {
    worst = std::max(worst, row_ptr[i + 1] - row_ptr[i]);
    for (int e = row_ptr[i]; e < row_ptr[i + 1]; ++e) ++col_nnz[col[e]];
  }
  for (int c = 0; c < n; ++c) worst = std::max(worst, col_nnz[c]);
  return worst;
}

PermutationSum build_permutation_sum(const PermutationSet& ps) {
  const int n = ps.n;
  if (n < 1) throw DomainError("permutation sum: n must be positive");
  if (ps.perms.empty()) {
    throw DomainError("permutation sum: at least one permutation required");
  }
  for (const auto& p : ps.perms) {
    if (static_cast<int>(p.size()) != n) {
      throw ShapeError("permutation sum: permutation length mismatch");
    }
    std::vector<char> seen(n, 0);
    for (int img : p) {
      if (img < 0 || img >= n || seen[img]) {
        throw DomainError("permutation sum: not a bijection");
      }
      seen[img] = 1;
    }
  }
  PermutationSum s;
  s.n = n;
  s.d = 2 * static_cast<int>(ps.perms.size());
  std::vector<std::map<int, int>> rows(n);
  for (const auto& p : ps.perms) {
    for (int i = 0; i < n; ++i) {
      ++rows[i][p[i]];   // the permutation itself
      ++rows[p[i]][i];   // and its adjoint
    }
  }
  s.row_ptr.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    s.row_ptr[i + 1] = s.row_ptr[i] + static_cast<int>(rows[i].size());
  }
  s.col.reserve(s.row_ptr[n]);
  s.mult.reserve(s.row_ptr[n]);
  for (int i = 0; i < n; ++i) {
    for (const auto& [c, m] : rows[i]) {
      s.col.push_back(c);
      s.mult.push_back(m);
    }
  }
  return s;
}

std::pair<PermutationSet, PermutationSum> random_permutation_sum(
    int n, int d, std::uint64_t seed) {
  if (d < 2 || d % 2 != 0) {
    throw DomainError("random_permutation_sum: d must be even and >= 2");
  }
  if (d >= n) throw DomainError("random_permutation_sum: requires d < n");
  Rng rng(seed);
  PermutationSet ps;
  ps.n = n;
  ps.perms.reserve(d / 2);
  for (int a = 0; a < d / 2; ++a) ps.perms.push_back(rng.permutation(n));
  PermutationSum s = build_permutation_sum(ps);
  return {std::move(ps), std::move(s)};
}

namespace {

double deflated_gap(int n, const std::function<void(const Vec&, Vec&)>& apply_s,
                    double tol) {
  const Vec ones = Vec::Constant(n, Cplx(1.0, 0.0));
  LanczosOptions opts;
  opts.tol = std::min(tol, 1e-10);
  opts.max_iter = std::min(n, 500);
  const auto ex = hermitian_extreme_eigs(
      n,
      [&](const Vec& x, Vec& y) {
        apply_s(x, y);
        const Cplx mean = x.sum() / static_cast<double>(n);
        y.array() -= mean;
      },
      opts, &ones);
  return std::max(std::abs(ex.min_eig), std::abs(ex.max_eig));
}

}  // namespace

double second_eigenvalue(const PermutationSum& s, double tol) {
  if (tol <= 0.0) throw DomainError("second_eigenvalue: tol must be positive");
  return deflated_gap(s.n, [&](const Vec& x, Vec& y) { s.apply(x, y); }, tol);
}

double second_eigenvalue(const Mat& s, double tol) {
  if (s.rows() != s.cols()) {
    throw ShapeError("second_eigenvalue: matrix must be square");
  }
  if (tol <= 0.0) throw DomainError("second_eigenvalue: tol must be positive");
  return deflated_gap(
      static_cast<int>(s.rows()),
      [&](const Vec& x, Vec& y) { y.noalias() = s * x; }, tol);
}

double friedman_bound(int d) {
  if (d < 2) throw DomainError("friedman_bound: d must be at least 2");
  return (2.0 * std::sqrt(static_cast<double>(d - 1)) + 1.0) / d;
}

ApproxAllOnesResult approximate_all_ones(double delta,
                                         const std::vector<int>& block_sizes,
                                         std::uint64_t seed, int max_attempts,
                                         std::optional<int> n0_override) {
  if (delta <= 0.0 || delta >= 1.0) {
    throw DomainError("approximate_all_ones: delta must lie in (0,1)");
  }
  if (block_sizes.empty()) {
    throw DomainError("approximate_all_ones: no blocks given");
  }
  if (max_attempts < 1) {
    throw DomainError("approximate_all_ones: max_attempts must be positive");
  }
  int d = 2;
  while (friedman_bound(d) >= delta) d += 2;
  const int n0 = n0_override.value_or(d * d + 1);
  for (int n : block_sizes) {
    if (n < 1) throw DomainError("approximate_all_ones: block sizes positive");
    if (n >= n0 && d >= n) {
      throw DomainError(
          "approximate_all_ones: required degree reaches a sampled block size");
    }
  }

  const int count = static_cast<int>(block_sizes.size());
  std::vector<ApproxBlockReport> reports(count);
  std::vector<Mat> blocks(count);
  std::vector<std::optional<SamplingError>> failures(count);
  std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < count; ++k) {
    try {
      const int n = block_sizes[k];
      ApproxBlockReport rep;
      rep.n = n;
      if (n < n0) {
        // Small blocks are copied exactly; they add nothing to the error.
        rep.sampled = false;
        blocks[k] = all_ones_projection(n);
        reports[k] = std::move(rep);
        continue;
      }
      rep.sampled = true;
      double best = std::numeric_limits<double>::infinity();
      bool accepted = false;
      for (int attempt = 1; attempt <= max_attempts && !accepted; ++attempt) {
        const std::uint64_t attempt_seed =
            derive_seed(seed, static_cast<std::uint64_t>(k),
                        static_cast<std::uint64_t>(attempt));
        auto [ps, s] = random_permutation_sum(n, d, attempt_seed);
        const double lambda2 = second_eigenvalue(s, 1e-9);
        best = std::min(best, lambda2);
        if (lambda2 < delta) {
          rep.attempts = attempt;
          rep.seed = attempt_seed;
          rep.lambda2 = lambda2;
          rep.perms = std::move(ps);
          blocks[k] = s.to_dense();
          accepted = true;
        }
      }
      if (!accepted) {
        failures[k] = SamplingError(
            "approximate_all_ones: attempts exhausted", best, n);
      }
      reports[k] = std::move(rep);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (int k = 0; k < count; ++k) {
    if (errors[k]) std::rethrow_exception(errors[k]);
  }
  for (int k = 0; k < count; ++k) {
    if (failures[k]) throw *failures[k];
  }

  ApproxAllOnesResult result{BlockOperator(std::move(blocks)), d, n0,
                             std::move(reports)};
  return result;
}

Mat hadamard_projection(const std::vector<double>& theta) {
  const int n = static_cast<int>(theta.size());
  if (n < 1) throw DomainError("hadamard_projection: empty phase vector");
  Vec u(n);
  for (int i = 0; i < n; ++i) u(i) = std::polar(1.0, theta[i]);
  return Mat(u * u.adjoint() / static_cast<double>(n));
}

Mat conjugate_by_phase(const std::vector<double>& theta, const Mat& x) {
  const int n = static_cast<int>(x.rows());
  if (x.rows() != x.cols()) {
    throw ShapeError("conjugate_by_phase: matrix must be square");
  }
  if (static_cast<int>(theta.size()) != n) {
    throw ShapeError("conjugate_by_phase: phase count must match dimension");
  }
  // w = diag(e^{-i theta}); w* x w multiplies entry (i,j) by e^{i(theta_i - theta_j)}.
  Mat out(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      out(i, j) = std::polar(1.0, theta[i] - theta[j]) * x(i, j);
    }
  }
  return out;
}

}  // namespace pavinglab
