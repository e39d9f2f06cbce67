#include "pavinglab/paving.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "pavinglab/errors.hpp"
#include "pavinglab/norms.hpp"
#include "pavinglab/rng.hpp"

namespace pavinglab {

namespace {

Mat off_diagonal_part(const Mat& b) {
  Mat y = b;
  y.diagonal().setZero();
  return y;
}

Mat gather_submatrix(const Mat& y, const std::vector<int>& idx) {
  Mat sub(idx.size(), idx.size());
  for (size_t j = 0; j < idx.size(); ++j) {
    for (size_t i = 0; i < idx.size(); ++i) {
      sub(i, j) = y(idx[i], idx[j]);
    }
  }
  return sub;
}

std::vector<std::vector<int>> class_members(const std::vector<int>& colors,
                                            int m) {
  std::vector<std::vector<int>> members(m);
  for (size_t i = 0; i < colors.size(); ++i) {
    members[colors[i] - 1].push_back(static_cast<int>(i));
  }
  return members;
}

double class_norm(const Mat& y, const std::vector<int>& idx) {
  if (idx.size() <= 1) return 0.0;
  return op_norm(gather_submatrix(y, idx));
}

constexpr int kExhaustiveMaxDim = 12;
constexpr int kExhaustiveMaxClasses = 4;
constexpr std::uint64_t kChunkTarget = 256;

std::uint64_t pow_u64(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Colorings are enumerated as restricted growth strings: c[0] = 1 and each
// later color at most one past the running maximum. Every class-relabeling
// orbit is visited exactly once, at its lexicographically smallest member.
bool decode_canonical_coloring(std::uint64_t index, int n, int m,
                               std::vector<int>& colors) {
  colors.assign(n, 1);
  int running_max = 1;
  for (int pos = 1; pos < n; ++pos) {
    const int shift = n - 1 - pos;
    std::uint64_t digit = index;
    for (int s = 0; s < shift; ++s) digit /= m;
    const int color = static_cast<int>(digit % m) + 1;
    if (color > running_max + 1) return false;
    colors[pos] = color;
    running_max = std::max(running_max, color);
  }
  return true;
}

struct ColoringBest {
  double value = std::numeric_limits<double>::infinity();
  std::vector<int> colors;
};

// Within one block: minimal compressed norm over all canonical m-colorings.
ColoringBest exhaustive_block(const Mat& y, int m, bool parallel) {
  const int n = static_cast<int>(y.rows());
  if (n == 0) return {0.0, {}};
  const std::uint64_t space = pow_u64(m, n - 1);
  const std::uint64_t chunks = std::min<std::uint64_t>(kChunkTarget, space);
  std::vector<ColoringBest> results(chunks);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    const std::uint64_t begin = space * c / chunks;
    const std::uint64_t end = space * (c + 1) / chunks;
    ColoringBest best;
    std::vector<int> colors;
    for (std::uint64_t i = begin; i < end; ++i) {
      if (!decode_canonical_coloring(i, n, m, colors)) continue;
      const auto members = class_members(colors, m);
      double worst = 0.0;
      for (const auto& idx : members) {
        worst = std::max(worst, class_norm(y, idx));
        if (worst >= best.value) break;  // cannot improve; ties keep earlier
      }
      if (worst < best.value) best = {worst, colors};
    }
    results[c] = best;
  }
  ColoringBest best;
  for (const ColoringBest& cb : results) {
    if (cb.value < best.value) best = cb;  // chunks ordered: earlier wins ties
  }
  return best;
}

std::pair<PavingPartition, double> exhaustive_impl(const BlockOperator& b,
                                                   int m, bool parallel) {
  if (m < 1) throw DomainError("exhaustive_pave: m must be at least 1");
  if (m > kExhaustiveMaxClasses) {
    throw CapacityError("exhaustive_pave: m limited to 4");
  }
  for (int d : b.dims()) {
    if (d > kExhaustiveMaxDim) {
      throw CapacityError("exhaustive_pave: block dims limited to 12");
    }
  }
  PavingPartition part;
  part.m = m;
  double value = 0.0;
  for (int k = 0; k < b.block_count(); ++k) {
    ColoringBest best =
        exhaustive_block(off_diagonal_part(b.block(k)), m, parallel);
    value = std::max(value, best.value);
    part.colors.push_back(std::move(best.colors));
  }
  return {std::move(part), value};
}

struct TrialState {
  std::vector<std::vector<int>> colors;
  double value = std::numeric_limits<double>::infinity();
};

// First-improvement single-coordinate recoloring inside one block.
double hill_climb_block(const Mat& y, int m, std::vector<int>& colors,
                        long budget, long& moves) {
  const int n = static_cast<int>(y.rows());
  auto members = class_members(colors, m);
  std::vector<double> norms(m, 0.0);
  for (int c = 0; c < m; ++c) norms[c] = class_norm(y, members[c]);
  double value = *std::max_element(norms.begin(), norms.end());
  bool improved = true;
  while (improved && moves < budget) {
    improved = false;
    for (int i = 0; i < n && moves < budget; ++i) {
      const int cur = colors[i] - 1;
      for (int cand = 0; cand < m; ++cand) {
        if (cand == cur) continue;
        auto from = members[cur];
        auto to = members[cand];
        from.erase(std::find(from.begin(), from.end(), i));
        to.insert(std::lower_bound(to.begin(), to.end(), i), i);
        const double nf = class_norm(y, from);
        const double nt = class_norm(y, to);
        double cand_value = std::max(nf, nt);
        for (int c = 0; c < m; ++c) {
          if (c != cur && c != cand) cand_value = std::max(cand_value, norms[c]);
        }
        if (cand_value < value) {
          colors[i] = cand + 1;
          members[cur] = std::move(from);
          members[cand] = std::move(to);
          norms[cur] = nf;
          norms[cand] = nt;
          value = cand_value;
          ++moves;
          improved = true;
          break;
        }
      }
    }
  }
  return value;
}

std::pair<PavingPartition, double> random_impl(const BlockOperator& b, int m,
                                               long trials, std::uint64_t seed,
                                               long local_moves,
                                               bool parallel) {
  if (m < 1) throw DomainError("random_pave: m must be at least 1");
  if (trials < 1) throw DomainError("random_pave: trials must be at least 1");
  const std::vector<int> dims = b.dims();
  std::vector<Mat> offdiag;
  offdiag.reserve(dims.size());
  for (int k = 0; k < b.block_count(); ++k) {
    offdiag.push_back(off_diagonal_part(b.block(k)));
  }
  std::vector<TrialState> results(trials);
  std::vector<std::exception_ptr> errors(trials);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long t = 0; t < trials; ++t) {
    try {
      Rng rng(seed + static_cast<std::uint64_t>(t));
      TrialState state;
      state.value = 0.0;
      for (size_t k = 0; k < dims.size(); ++k) {
        std::vector<int> colors(dims[k]);
        for (int& c : colors) c = static_cast<int>(rng.uniform_int(m)) + 1;
        long moves = 0;
        state.value = std::max(
            state.value,
            hill_climb_block(offdiag[k], m, colors, local_moves, moves));
        state.colors.push_back(std::move(colors));
      }
      results[t] = std::move(state);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  }
  for (long t = 0; t < trials; ++t) {
    if (errors[t]) std::rethrow_exception(errors[t]);
  }
  // Lowest trial index wins ties: independent of scheduling.
  int best = 0;
  for (long t = 1; t < trials; ++t) {
    if (results[t].value < results[best].value) best = static_cast<int>(t);
  }
  PavingPartition part;
  part.m = m;
  part.colors = std::move(results[best].colors);
  return {std::move(part), results[best].value};
}

}  // namespace

void validate_partition(const PavingPartition& part,
                        const std::vector<int>& dims) {
  if (part.m < 1) throw DomainError("partition: m must be at least 1");
  if (part.colors.size() != dims.size()) {
    throw ShapeError("partition: block count mismatch");
  }
  for (size_t k = 0; k < dims.size(); ++k) {
    if (static_cast<int>(part.colors[k].size()) != dims[k]) {
      throw ShapeError("partition: coordinate count mismatch");
    }
    for (int c : part.colors[k]) {
      if (c < 1 || c > part.m) {
        throw DomainError("partition: class index out of range");
      }
    }
  }
}

double paving_norm(const BlockOperator& b, const PavingPartition& part,
                   double tol) {
  validate_partition(part, b.dims());
  double worst = 0.0;
  for (int k = 0; k < b.block_count(); ++k) {
    const Mat y = off_diagonal_part(b.block(k));
    for (const auto& idx : class_members(part.colors[k], part.m)) {
      if (idx.size() <= 1) continue;
      worst = std::max(worst, op_norm(gather_submatrix(y, idx), tol));
    }
  }
  return worst;
}

std::pair<PavingPartition, double> exhaustive_pave(const BlockOperator& b,
                                                   int m) {
  return exhaustive_impl(b, m, true);
}

std::pair<PavingPartition, double> exhaustive_pave_serial(
    const BlockOperator& b, int m) {
  return exhaustive_impl(b, m, false);
}

std::pair<PavingPartition, double> random_pave(const BlockOperator& b, int m,
                                               long trials, std::uint64_t seed,
                                               long local_moves) {
  return random_impl(b, m, trials, seed, local_moves, true);
}

std::pair<PavingPartition, double> random_pave_serial(const BlockOperator& b,
                                                      int m, long trials,
                                                      std::uint64_t seed,
                                                      long local_moves) {
  return random_impl(b, m, trials, seed, local_moves, false);
}

namespace {

// f(t) = sum_i w_i / (w_i + t), strictly decreasing between its poles.
double secular_sum(const std::vector<double>& ws, double t) {
  double s = 0.0;
  for (double w : ws) s += w / (w + t);
  return s;
}

// Root of f(t) = 1 on (lo, hi), where f(lo+) > 1 > f(hi-).
double bisect_secular(const std::vector<double>& ws, double lo, double hi) {
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  for (int it = 0; it < 200 && hi - lo > 1e-17 * scale; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (secular_sum(ws, mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// || v_S v_S* - diag(w_S) || from the weights alone. Phases conjugate away,
// and the eigenvalues solve the rank-one secular equation f(t) = 1, so both
// spectral edges come from bisection: no iteration budget to exhaust.
double class_norm_from_weights(const std::vector<double>& ws) {
  std::vector<double> nz;
  double total = 0.0;
  for (double w : ws) {
    if (w > 0.0) {
      nz.push_back(w);
      total += w;
    }
  }
  if (ws.size() <= 1 || nz.size() <= 1) return 0.0;
  std::sort(nz.begin(), nz.end(), std::greater<double>());
  const double lambda_max = bisect_secular(nz, 0.0, total);
  double lambda_min;
  if (nz[1] == nz[0]) {
    lambda_min = -nz[0];  // repeated top weight pins the lowest eigenvalue
  } else {
    const double gap = nz[0] - nz[1];
    lambda_min =
        bisect_secular(nz, -nz[0] + gap * 1e-15, -nz[1] - gap * 1e-15);
  }
  return std::max(lambda_max, -lambda_min);
}

}  // namespace

double rank_one_paving_norm(const Vec& v, const std::vector<int>& colors,
                            int m) {
  if (static_cast<int>(colors.size()) != v.size()) {
    throw ShapeError("rank_one_paving_norm: coloring length mismatch");
  }
  std::vector<std::vector<double>> class_weights(m);
  for (int i = 0; i < v.size(); ++i) {
    class_weights[colors[i] - 1].push_back(std::norm(v(i)));
  }
  double worst = 0.0;
  for (const auto& ws : class_weights) {
    worst = std::max(worst, class_norm_from_weights(ws));
  }
  return worst;
}

std::pair<std::vector<int>, double> pave_unit_vector(const Vec& v,
                                                     double eps) {
  if (eps <= 0.0 || eps >= 1.0) {
    throw DomainError("pave_abelian: eps must lie in (0,1)");
  }
  const int n = static_cast<int>(v.size());
  std::vector<int> colors(n, 1);
  if (n == 0 || v.squaredNorm() == 0.0) return {colors, 0.0};
  const Vec u = v.normalized();
  const RealVec w = u.cwiseAbs2().real();

  // Heavy coordinates (w >= eps/2) become singleton classes; there are at
  // most ceil(2/eps) of them since the weights sum to one. Singleton classes
  // annihilate the off-diagonal part exactly.
  int next_class = 0;
  std::vector<int> light;
  for (int i = 0; i < n; ++i) {
    if (w(i) >= eps / 2.0) {
      colors[i] = ++next_class;
    } else {
      light.push_back(i);
    }
  }

  // First-fit-decreasing packing of the rest into classes of weight < eps.
  std::sort(light.begin(), light.end(), [&](int a, int b) {
    if (w(a) != w(b)) return w(a) > w(b);
    return a < b;
  });
  std::vector<double> bin_weight;
  std::vector<int> bin_class;
  for (int i : light) {
    bool placed = false;
    for (size_t bin = 0; bin < bin_weight.size(); ++bin) {
      if (bin_weight[bin] + w(i) < eps) {
        bin_weight[bin] += w(i);
        colors[i] = bin_class[bin];
        placed = true;
        break;
      }
    }
    if (!placed) {
      bin_weight.push_back(w(i));
      bin_class.push_back(++next_class);
      colors[i] = bin_class.back();
    }
  }
  const int m = std::max(1, next_class);
  return {colors, rank_one_paving_norm(u, colors, m)};
}

std::pair<PavingPartition, double> pave_abelian(const BlockOperator& q,
                                                double eps) {
  if (eps <= 0.0 || eps >= 1.0) {
    throw DomainError("pave_abelian: eps must lie in (0,1)");
  }
  const ProjectionReport rep = projection_report(q);
  if (!rep.is_abelian) {
    throw DomainError("pave_abelian: input must be an abelian projection");
  }
  PavingPartition part;
  part.m = 1;
  double worst = 0.0;
  for (int k = 0; k < q.block_count(); ++k) {
    const Mat& block = q.block(k);
    const int n = static_cast<int>(block.rows());
    if (n == 0 || rep.ranks[k] == 0) {
      part.colors.emplace_back(n, 1);
      continue;
    }
    // Rank-one block q = v v*: recover v from the heaviest column.
    int jstar = 0;
    double heaviest = -1.0;
    for (int j = 0; j < n; ++j) {
      const double wj = std::real(block(j, j));
      if (wj > heaviest) {
        heaviest = wj;
        jstar = j;
      }
    }
    Vec v = block.col(jstar) / std::sqrt(heaviest);
    auto [colors, norm] = pave_unit_vector(v, eps);
    for (int c : colors) part.m = std::max(part.m, c);
    part.colors.push_back(std::move(colors));
    worst = std::max(worst, norm);
  }
  return {std::move(part), worst};
}

}  // namespace pavinglab
