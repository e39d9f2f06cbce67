#pragma once

#include <stdexcept>
#include <string>

namespace pavinglab {

// Mismatched dimensions between operands.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input outside an operation's stated hypotheses.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Problem size beyond an exhaustive-mode cutoff.
struct CapacityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed or unreadable file.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterative solver failed to converge; carries the best estimate found.
struct NumericError : std::runtime_error {
  double best_estimate;
  NumericError(const std::string& msg, double best)
      : std::runtime_error(msg), best_estimate(best) {}
};

// Resampling budget exhausted; carries the best spectral gap seen.
struct SamplingError : std::runtime_error {
  double best_lambda2;
  int block_dim;
  SamplingError(const std::string& msg, double best, int dim)
      : std::runtime_error(msg), best_lambda2(best), block_dim(dim) {}
};

}  // namespace pavinglab
