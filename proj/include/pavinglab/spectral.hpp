#pragma once

#include "pavinglab/types.hpp"

namespace pavinglab {

// Orthogonal projection onto the eigenspaces of a self-adjoint matrix whose
// eigenvalues lie in (lo, hi). Endpoints may be +/-infinity. Eigenvalues
// within 1e-12 * scale of an endpoint count as inside the interval, so
// constructed boundary cases land deterministically.
// Throws DomainError if a is not self-adjoint (tolerance 1e-10).
Mat spectral_projection(const Mat& a, double lo, double hi);

// Eigenvalue count of a self-adjoint matrix outside (-t, t), same boundary
// convention as spectral_projection.
int spectral_rank_outside(const Mat& a, double t);

}  // namespace pavinglab
