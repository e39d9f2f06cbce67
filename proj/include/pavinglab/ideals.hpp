#pragma once

#include <string>
#include <vector>

#include "pavinglab/types.hpp"

namespace pavinglab {

// Finitely described block families n -> x_n used to probe norm decay along
// the tail. Ranks are carried as exact metadata, never computed numerically.
enum class Family {
  kConstantRankDiagonal,  // diagonal projection of rank min(r, n)
  kPowerOfTwoRank,        // rank log2(n) at n = 2^k, zero elsewhere
  kAllOnesAbelian,        // the rank-one all-ones projection block
  kHarmonicDiagonal,      // diag(1, 1/2, ..., 1/n); self-adjoint, not a projection
  kFourierRank,           // DFT-column projection of rank min(n, floor(c*n^p))
};

struct BlockSequenceSpec {
  Family family = Family::kAllOnesAbelian;
  int rank_param = 1;       // r for constant-rank-diagonal
  double rank_coeff = 1.0;  // c for fourier-rank
  double rank_power = 0.0;  // p for fourier-rank

  Mat instantiate(int n) const;
  int rank_at(int n) const;
  bool projection_family() const;
};

Family family_from_name(const std::string& name);
std::string family_name(Family f);

// Default probe schedule {2^4, ..., 2^12}.
std::vector<int> default_probes();

struct NormProfileRow {
  int n = 0;
  double op_norm = 0.0;
  double two_norm = 0.0;
  int rank = 0;
};

std::vector<NormProfileRow> norm_profile(const BlockSequenceSpec& spec,
                                         const std::vector<int>& probes);

enum class Verdict { kYes, kNo, kInconclusive };
const char* verdict_name(Verdict v);

// Finite-probe stand-ins for tail decay. These are heuristics: a "yes" means
// the last three probes decayed below tol, a "no" that they stayed bounded
// away, nothing more.
struct FamilyDiagnostics {
  Verdict compact = Verdict::kInconclusive;        // op norms -> 0 ?
  Verdict two_norm_decay = Verdict::kInconclusive; // 2-norms -> 0 ?
  Verdict bounded_rank = Verdict::kInconclusive;   // sup rank finite ?
  bool heuristic = true;
};

// Requires at least 6 strictly increasing probes.
FamilyDiagnostics classify(const BlockSequenceSpec& spec,
                           const std::vector<int>& probes, double tol);

struct CompressionCheck {
  double measured = 0.0;       // ||q p q|| with p the all-ones projection
  double predicted = 0.0;      // rank/n
  double pq_measured = 0.0;    // ||p q||
  double pq_predicted = 0.0;   // sqrt(rank/n)
};

// Compression of the all-ones projection by a diagonal projection with the
// given support: the compressed block is rank one with norm exactly rank/n.
CompressionCheck compression_check(const std::vector<int>& support, int n);

// Rank of the spectral projection outside (-t, t) at each probe.
std::vector<int> spectral_rank_profile(const BlockSequenceSpec& spec, double t,
                                       const std::vector<int>& probes);

}  // namespace pavinglab
