#include "kgalign/matching.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "kgalign/errors.hpp"

namespace kgalign {

std::string to_string(MatchSource s) {
  switch (s) {
    case MatchSource::reciprocal_factual: return "reciprocal-factual";
    case MatchSource::reciprocal_structural: return "reciprocal-structural";
    case MatchSource::bipartite: return "bipartite";
  }
  return "?";
}

namespace {

// Mean of the k largest values in [begin, end) accessed through `get`.
template <typename Get>
double topk_mean(std::size_t n, std::size_t k, Get get) {
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = get(i);
  std::partial_sort(vals.begin(), vals.begin() + k, vals.end(), std::greater<>());
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += vals[i];
  return s / static_cast<double>(k);
}

}  // namespace

SimilarityMatrix csls_adjust(const SimilarityMatrix& sm, std::size_t k) {
  if (k < 1 || k > sm.rows() || k > sm.cols()) {
    throw argument_error("csls_adjust: k out of range");
  }
  std::vector<double> r1(sm.rows()), r2(sm.cols());
  for (std::size_t i = 0; i < sm.rows(); ++i) {
    r1[i] = topk_mean(sm.cols(), k, [&](std::size_t j) { return sm.at(i, j); });
  }
  for (std::size_t j = 0; j < sm.cols(); ++j) {
    r2[j] = topk_mean(sm.rows(), k, [&](std::size_t i) { return sm.at(i, j); });
  }
  SimilarityMatrix out(sm.rows(), sm.cols(), sm.provenance + "+csls");
  for (std::size_t i = 0; i < sm.rows(); ++i) {
    for (std::size_t j = 0; j < sm.cols(); ++j) {
      out.at(i, j) = 2.0 * sm.at(i, j) - r1[i] - r2[j];
    }
  }
  return out;
}

std::vector<std::pair<int, int>> reciprocity_filter(const SimilarityMatrix& sm) {
  std::vector<std::pair<int, int>> out;
  if (sm.rows() == 0 || sm.cols() == 0) return out;

  // Top candidate per column (lowest row index wins ties).
  std::vector<int> top_row(sm.cols(), 0);
  for (std::size_t j = 0; j < sm.cols(); ++j) {
    double best = sm.at(0, j);
    for (std::size_t i = 1; i < sm.rows(); ++i) {
      if (sm.at(i, j) > best) {
        best = sm.at(i, j);
        top_row[j] = static_cast<int>(i);
      }
    }
  }
  for (std::size_t i = 0; i < sm.rows(); ++i) {
    std::size_t jbest = 0;
    double best = sm.at(i, 0);
    for (std::size_t j = 1; j < sm.cols(); ++j) {
      if (sm.at(i, j) > best) {
        best = sm.at(i, j);
        jbest = j;
      }
    }
    if (top_row[jbest] == static_cast<int>(i)) {
      out.emplace_back(static_cast<int>(i), static_cast<int>(jbest));
    }
  }
  return out;
}

BestMatchResult best_match(const SimilarityMatrix& sm,
                           const std::unordered_set<int>& exclude_rows,
                           const std::unordered_set<int>& exclude_cols) {
  BestMatchResult res;
  std::vector<int> cols;
  for (std::size_t j = 0; j < sm.cols(); ++j) {
    if (!exclude_cols.count(static_cast<int>(j))) cols.push_back(static_cast<int>(j));
  }
  for (std::size_t i = 0; i < sm.rows(); ++i) {
    if (exclude_rows.count(static_cast<int>(i))) continue;
    std::vector<int> ranked = cols;
    std::stable_sort(ranked.begin(), ranked.end(), [&](int a, int b) {
      return sm.at(i, a) > sm.at(i, b);
    });
    res.rows.push_back(static_cast<int>(i));
    res.assignment.push_back(ranked.empty() ? -1 : ranked.front());
    res.rankings.push_back(std::move(ranked));
  }
  return res;
}

Assignment hungarian_assign(const SimilarityMatrix& sm) {
  const bool transposed = sm.rows() > sm.cols();
  const std::size_t n = transposed ? sm.cols() : sm.rows();
  const std::size_t m = transposed ? sm.rows() : sm.cols();
  auto cost = [&](std::size_t i, std::size_t j) {
    return transposed ? -sm.at(j, i) : -sm.at(i, j);
  };

  const double inf = std::numeric_limits<double>::infinity();
  // Potentials-based Hungarian method, 1-indexed; p[j] is the row matched to
  // column j.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      std::size_t i0 = p[j0], j1 = 0;
      double delta = inf;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment out;
  out.row_to_col.assign(sm.rows(), -1);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] == 0) continue;
    std::size_t row = transposed ? j - 1 : p[j] - 1;
    std::size_t col = transposed ? p[j] - 1 : j - 1;
    out.row_to_col[row] = static_cast<int>(col);
    out.total += sm.at(row, col);
  }
  return out;
}

}  // namespace kgalign
