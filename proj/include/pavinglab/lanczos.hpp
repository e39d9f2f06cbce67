#pragma once

#include <cstdint>
#include <functional>

#include "pavinglab/types.hpp"

namespace pavinglab {

struct LanczosOptions {
  double tol = 1e-10;    // residual tolerance, relative to max(1, |theta|)
  int max_iter = 400;    // capped at the deflated dimension
  std::uint64_t seed = 0x6c616e637aull;  // start-vector seed
};

struct ExtremeEigs {
  double min_eig = 0.0;
  double max_eig = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Extreme eigenvalues of a Hermitian operator given only its action.
// Full reorthogonalization; optionally deflates one known eigenvector
// (the Krylov basis is kept orthogonal to it throughout).
// Throws NumericError (carrying the best |eig| estimate) on non-convergence.
ExtremeEigs hermitian_extreme_eigs(
    int dim, const std::function<void(const Vec&, Vec&)>& apply,
    const LanczosOptions& opts = {}, const Vec* deflate = nullptr);

}  // namespace pavinglab
