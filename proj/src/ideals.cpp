#include "pavinglab/ideals.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "pavinglab/errors.hpp"
#include "pavinglab/expander.hpp"
#include "pavinglab/norms.hpp"
#include "pavinglab/spectral.hpp"

namespace pavinglab {

namespace {

bool is_power_of_two(int n) {
  return n > 0 && std::has_single_bit(static_cast<unsigned>(n));
}

int log2_exact(int n) { return std::countr_zero(static_cast<unsigned>(n)); }

Mat diagonal_projection(int n, int rank) {
  Mat b = Mat::Zero(n, n);
  for (int i = 0; i < rank; ++i) b(i, i) = Cplx(1.0, 0.0);
  return b;
}

}  // namespace

int BlockSequenceSpec::rank_at(int n) const {
  if (n < 1) throw DomainError("block family: n must be positive");
  switch (family) {
    case Family::kConstantRankDiagonal:
      return std::min(rank_param, n);
    case Family::kPowerOfTwoRank:
      return is_power_of_two(n) ? log2_exact(n) : 0;
    case Family::kAllOnesAbelian:
      return 1;
    case Family::kHarmonicDiagonal:
      return n;
    case Family::kFourierRank: {
      const double raw = rank_coeff * std::pow(static_cast<double>(n), rank_power);
      return std::clamp(static_cast<int>(std::floor(raw)), 0, n);
    }
  }
  throw DomainError("block family: unknown family");
}

bool BlockSequenceSpec::projection_family() const {
  return family != Family::kHarmonicDiagonal;
}

Mat BlockSequenceSpec::instantiate(int n) const {
  const int r = rank_at(n);
  switch (family) {
    case Family::kConstantRankDiagonal:
    case Family::kPowerOfTwoRank:
      return diagonal_projection(n, r);
    case Family::kAllOnesAbelian:
      return all_ones_projection(n);
    case Family::kHarmonicDiagonal: {
      Mat b = Mat::Zero(n, n);
      for (int i = 0; i < n; ++i) b(i, i) = Cplx(1.0 / (i + 1), 0.0);
      return b;
    }
    case Family::kFourierRank: {
      if (r == 0) return Mat::Zero(n, n);
      Mat f(n, r);
      const double scale = 1.0 / std::sqrt(static_cast<double>(n));
      for (int t = 0; t < r; ++t) {
        for (int j = 0; j < n; ++j) {
          f(j, t) = scale * std::polar(1.0, 2.0 * std::numbers::pi * t * j / n);
        }
      }
      return Mat(f * f.adjoint());
    }
  }
  throw DomainError("block family: unknown family");
}

Family family_from_name(const std::string& name) {
  if (name == "constant-rank-diagonal") return Family::kConstantRankDiagonal;
  if (name == "power-of-two-rank") return Family::kPowerOfTwoRank;
  if (name == "all-ones-abelian") return Family::kAllOnesAbelian;
  if (name == "harmonic-diagonal") return Family::kHarmonicDiagonal;
  if (name == "fourier-rank") return Family::kFourierRank;
  throw DomainError("unknown block family: " + name);
}

std::string family_name(Family f) {
  switch (f) {
    case Family::kConstantRankDiagonal: return "constant-rank-diagonal";
    case Family::kPowerOfTwoRank: return "power-of-two-rank";
    case Family::kAllOnesAbelian: return "all-ones-abelian";
    case Family::kHarmonicDiagonal: return "harmonic-diagonal";
    case Family::kFourierRank: return "fourier-rank";
  }
  return "unknown";
}

std::vector<int> default_probes() {
  std::vector<int> probes;
  for (int k = 4; k <= 12; ++k) probes.push_back(1 << k);
  return probes;
}

std::vector<NormProfileRow> norm_profile(const BlockSequenceSpec& spec,
                                         const std::vector<int>& probes) {
  std::vector<NormProfileRow> rows;
  rows.reserve(probes.size());
  for (int n : probes) {
    const Mat block = spec.instantiate(n);
    rows.push_back(NormProfileRow{n, op_norm(block), two_norm(block),
                                  spec.rank_at(n)});
  }
  return rows;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kYes: return "yes";
    case Verdict::kNo: return "no";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

// Tail test over the last three probes: decayed below tol, stayed bounded
// away from zero, or neither.
Verdict norm_tail_verdict(const std::vector<double>& values, double tol) {
  const size_t k = values.size();
  const double a = values[k - 3], b = values[k - 2], c = values[k - 1];
  if (a < tol && b < tol && c < tol) return Verdict::kYes;
  if (a >= tol && b >= tol && c >= tol && c >= 0.9 * a) return Verdict::kNo;
  return Verdict::kInconclusive;
}

Verdict rank_tail_verdict(const std::vector<int>& ranks) {
  const size_t k = ranks.size();
  const int a = ranks[k - 3], b = ranks[k - 2], c = ranks[k - 1];
  if (a == b && b == c) return Verdict::kYes;
  if (a < b && b < c) return Verdict::kNo;
  return Verdict::kInconclusive;
}

}  // namespace

FamilyDiagnostics classify(const BlockSequenceSpec& spec,
                           const std::vector<int>& probes, double tol) {
  if (probes.size() < 6) {
    throw DomainError("classify: at least 6 probes required");
  }
  for (size_t i = 1; i < probes.size(); ++i) {
    if (probes[i] <= probes[i - 1]) {
      throw DomainError("classify: probes must be strictly increasing");
    }
  }
  if (tol <= 0.0) throw DomainError("classify: tol must be positive");

  const auto profile = norm_profile(spec, probes);
  std::vector<double> ops, twos;
  std::vector<int> ranks;
  for (const auto& row : profile) {
    ops.push_back(row.op_norm);
    twos.push_back(row.two_norm);
    ranks.push_back(row.rank);
  }
  FamilyDiagnostics diag;
  diag.compact = norm_tail_verdict(ops, tol);
  diag.two_norm_decay = norm_tail_verdict(twos, tol);
  diag.bounded_rank = rank_tail_verdict(ranks);
  return diag;
}

CompressionCheck compression_check(const std::vector<int>& support, int n) {
  if (n < 1) throw DomainError("compression_check: n must be positive");
  std::vector<char> seen(n, 0);
  for (int i : support) {
    if (i < 0 || i >= n || seen[i]) {
      throw DomainError("compression_check: bad support set");
    }
    seen[i] = 1;
  }
  const int r = static_cast<int>(support.size());
  const double inv_n = 1.0 / n;

  CompressionCheck out;
  out.predicted = static_cast<double>(r) / n;
  out.pq_predicted = std::sqrt(static_cast<double>(r) / n);

  // q p q: the all-ones projection compressed to the support block.
  Mat qpq = Mat::Zero(n, n);
  for (int j : support) {
    for (int i : support) qpq(i, j) = Cplx(inv_n, 0.0);
  }
  out.measured = op_norm(qpq, 1e-12);

  Mat pq = Mat::Zero(n, n);
  for (int j : support) {
    for (int i = 0; i < n; ++i) pq(i, j) = Cplx(inv_n, 0.0);
  }
  out.pq_measured = op_norm(pq, 1e-12);
  return out;
}

std::vector<int> spectral_rank_profile(const BlockSequenceSpec& spec, double t,
                                       const std::vector<int>& probes) {
  if (t < 0.0) throw DomainError("spectral_rank_profile: t must be >= 0");
  std::vector<int> ranks;
  ranks.reserve(probes.size());
  for (int n : probes) {
    ranks.push_back(spectral_rank_outside(spec.instantiate(n), t));
  }
  return ranks;
}

}  // namespace pavinglab
