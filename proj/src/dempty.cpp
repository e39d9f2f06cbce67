#include "pavinglab/dempty.hpp"

#include <algorithm>

#include "pavinglab/errors.hpp"

namespace pavinglab {

BlockOperator AlmostPermutation::to_block_operator(
    const std::vector<int>& dims) const {
  if (col_of_row.size() != dims.size()) {
    throw ShapeError("almost permutation: block count mismatch");
  }
  std::vector<Mat> blocks;
  blocks.reserve(dims.size());
  for (size_t k = 0; k < dims.size(); ++k) {
    Mat b = Mat::Zero(dims[k], dims[k]);
    for (int r = 0; r < dims[k]; ++r) {
      const int c = col_of_row[k][r];
      if (c >= 0) b(r, c) = Cplx(1.0, 0.0);
    }
    blocks.push_back(std::move(b));
  }
  return BlockOperator(std::move(blocks));
}

bool is_almost_permutation(const BlockOperator& b) {
  for (int k = 0; k < b.block_count(); ++k) {
    const Mat& blk = b.block(k);
    const int n = static_cast<int>(blk.rows());
    std::vector<int> row_used(n, 0), col_used(n, 0);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const Cplx v = blk(i, j);
        if (v == Cplx(0.0, 0.0)) continue;
        if (v != Cplx(1.0, 0.0)) return false;
        if (++row_used[i] > 1 || ++col_used[j] > 1) return false;
      }
    }
  }
  return true;
}

DEmptyCheck check_d_empty(const BlockOperator& b, int d) {
  if (d < 0) throw DomainError("d-empty check: d must be nonnegative");
  DEmptyCheck result;
  result.ok = true;
  result.certificate.d = d;
  for (int k = 0; k < b.block_count(); ++k) {
    const Mat& blk = b.block(k);
    const int n = static_cast<int>(blk.rows());
    std::vector<int> rows(n, 0), cols(n, 0);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        if (blk(i, j) != Cplx(0.0, 0.0)) {
          ++rows[i];
          ++cols[j];
        }
      }
    }
    if (result.ok) {
      for (int i = 0; i < n; ++i) {
        if (rows[i] > d) {
          result.ok = false;
          result.violation = DEmptyViolation{k, i, true, rows[i]};
          break;
        }
        if (cols[i] > d) {
          result.ok = false;
          result.violation = DEmptyViolation{k, i, false, cols[i]};
          break;
        }
      }
    }
    result.certificate.row_counts.push_back(std::move(rows));
    result.certificate.col_counts.push_back(std::move(cols));
  }
  return result;
}

namespace {

struct Edge {
  int row;
  int col;
  Cplx value;
  bool real;
  bool alive = true;
};

struct BlockGraph {
  int n = 0;
  int degree = 0;  // regularized degree
  std::vector<Edge> edges;
  std::vector<std::vector<int>> row_edges;
};

BlockGraph build_regular_graph(const Mat& blk) {
  BlockGraph g;
  g.n = static_cast<int>(blk.rows());
  std::vector<int> row_deg(g.n, 0), col_deg(g.n, 0);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      if (blk(i, j) != Cplx(0.0, 0.0)) {
        g.edges.push_back(Edge{i, j, blk(i, j), true});
        ++row_deg[i];
        ++col_deg[j];
      }
    }
  }
  int delta = 0;
  for (int i = 0; i < g.n; ++i) {
    delta = std::max({delta, row_deg[i], col_deg[i]});
  }
  g.degree = delta;
  // Pad with dummy parallel edges until the multigraph is delta-regular;
  // total row and column deficits match, so greedy pairing always works.
  int ci = 0;
  for (int r = 0; r < g.n; ++r) {
    while (row_deg[r] < delta) {
      while (ci < g.n && col_deg[ci] >= delta) ++ci;
      g.edges.push_back(Edge{r, ci, Cplx(0.0, 0.0), false});
      ++row_deg[r];
      ++col_deg[ci];
    }
  }
  g.row_edges.resize(g.n);
  for (size_t e = 0; e < g.edges.size(); ++e) {
    g.row_edges[g.edges[e].row].push_back(static_cast<int>(e));
  }
  return g;
}

bool augment(BlockGraph& g, int row, std::vector<char>& visited,
             std::vector<int>& col_match) {
  for (int e : g.row_edges[row]) {
    if (!g.edges[e].alive) continue;
    const int c = g.edges[e].col;
    if (visited[c]) continue;
    visited[c] = 1;
    if (col_match[c] < 0 || augment(g, g.edges[col_match[c]].row, visited,
                                    col_match)) {
      col_match[c] = e;
      return true;
    }
  }
  return false;
}

// One perfect matching of the current regular multigraph; edge ids by column.
std::vector<int> extract_perfect_matching(BlockGraph& g) {
  std::vector<int> col_match(g.n, -1);
  std::vector<char> visited(g.n, 0);
  for (int r = 0; r < g.n; ++r) {
    std::fill(visited.begin(), visited.end(), 0);
    if (!augment(g, r, visited, col_match)) {
      throw NumericError("d-empty decomposition: matching extraction failed",
                         0.0);
    }
  }
  for (int c = 0; c < g.n; ++c) g.edges[col_match[c]].alive = false;
  return col_match;
}

}  // namespace

DEmptyDecomposition decompose_d_empty(const BlockOperator& b, int d) {
  const DEmptyCheck check = check_d_empty(b, d);
  if (!check.ok) {
    throw DomainError("decompose_d_empty: operator is not d-empty");
  }
  const std::vector<int> dims = b.dims();
  std::vector<BlockGraph> graphs;
  graphs.reserve(dims.size());
  int pairs = 0;
  for (int k = 0; k < b.block_count(); ++k) {
    graphs.push_back(build_regular_graph(b.block(k)));
    pairs = std::max(pairs, graphs.back().degree);
  }

  DEmptyDecomposition out;
  for (int round = 0; round < pairs; ++round) {
    DiagonalOperator coeff;
    AlmostPermutation pattern;
    std::vector<Vec> diags;
    for (size_t k = 0; k < graphs.size(); ++k) {
      Vec diag = Vec::Zero(dims[k]);
      std::vector<int> cols(dims[k], -1);
      if (round < graphs[k].degree) {
        const std::vector<int> match = extract_perfect_matching(graphs[k]);
        for (int c = 0; c < graphs[k].n; ++c) {
          const Edge& e = graphs[k].edges[match[c]];
          if (!e.real) continue;  // padding never reaches the output
          cols[e.row] = e.col;
          diag(e.row) = e.value;
        }
      }
      diags.push_back(std::move(diag));
      pattern.col_of_row.push_back(std::move(cols));
    }
    out.coefficients.emplace_back(std::move(diags));
    out.patterns.push_back(std::move(pattern));
  }
  return out;
}

}  // namespace pavinglab
