#include "pavinglab/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "pavinglab/errors.hpp"
#include "pavinglab/rng.hpp"

namespace pavinglab {

namespace {

// Ritz values and end-pair residual bounds of the current tridiagonal.
struct RitzState {
  double theta_min = 0.0, theta_max = 0.0;
  double res_min = 0.0, res_max = 0.0;
};

RitzState solve_tridiagonal(const std::vector<double>& alpha,
                            const std::vector<double>& beta, double beta_next) {
  const int k = static_cast<int>(alpha.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    t(i, i) = alpha[i];
    if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  RitzState r;
  r.theta_min = es.eigenvalues()(0);
  r.theta_max = es.eigenvalues()(k - 1);
  r.res_min = std::abs(beta_next * es.eigenvectors()(k - 1, 0));
  r.res_max = std::abs(beta_next * es.eigenvectors()(k - 1, k - 1));
  return r;
}

}  // namespace

ExtremeEigs hermitian_extreme_eigs(
    int dim, const std::function<void(const Vec&, Vec&)>& apply,
    const LanczosOptions& opts, const Vec* deflate) {
  if (dim <= 0) return {0.0, 0.0, 0, true};
  const int deflated_dim = deflate ? dim - 1 : dim;
  if (deflated_dim <= 0) return {0.0, 0.0, 0, true};

  Vec defl;
  if (deflate) defl = deflate->normalized();
  const auto project_out = [&](Vec& v) {
    if (deflate) v -= defl * defl.dot(v);
  };

  Rng rng(opts.seed);
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.complex_normal();
  project_out(v);
  double nrm = v.norm();
  if (nrm == 0.0) return {0.0, 0.0, 0, true};
  v /= nrm;

  const int max_iter = std::min(opts.max_iter, deflated_dim);
  std::vector<Vec> basis;
  basis.reserve(max_iter);
  std::vector<double> alpha, beta;
  Vec w(dim);
  RitzState ritz;
  bool have_ritz = false;

  for (int j = 0; j < max_iter; ++j) {
    basis.push_back(v);
    apply(v, w);
    project_out(w);
    const double a = std::real(basis[j].dot(w));
    alpha.push_back(a);
    w -= a * basis[j];
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    // Full reorthogonalization: cheap at these sizes and keeps the extreme
    // Ritz values trustworthy on clustered spectra.
    for (const Vec& u : basis) w -= u * u.dot(w);
    const double b = w.norm();

    const bool check_now = b <= 1e-14 || j + 1 == max_iter || (j + 1) % 5 == 0;
    if (check_now) {
      ritz = solve_tridiagonal(alpha, beta, b);
      have_ritz = true;
      const double scale_max = std::max(1.0, std::abs(ritz.theta_max));
      const double scale_min = std::max(1.0, std::abs(ritz.theta_min));
      if ((ritz.res_max <= opts.tol * scale_max &&
           ritz.res_min <= opts.tol * scale_min) ||
          b <= 1e-14 || j + 1 == deflated_dim) {
        return {ritz.theta_min, ritz.theta_max, j + 1, true};
      }
    }
    if (b <= 1e-14) break;
    beta.push_back(b);
    v = w / b;
  }

  const double best =
      have_ritz ? std::max(std::abs(ritz.theta_min), std::abs(ritz.theta_max))
                : 0.0;
  throw NumericError("lanczos: no convergence within iteration budget", best);
}

}  // namespace pavinglab
