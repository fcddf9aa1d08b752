#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "kgalign/similarity.hpp"

namespace kgalign {

enum class MatchSource { reciprocal_factual, reciprocal_structural, bipartite };

std::string to_string(MatchSource s);

struct MatchPair {
  int e1 = -1;
  int e2 = -1;
  MatchSource source = MatchSource::bipartite;
  int cycle = 0;

  friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

// CSLS normalization: out[i][j] = 2*sm[i][j] - r1(i) - r2(j), where r1(i) is
// the mean of the k largest entries of row i and r2(j) the mean of the k
// largest entries of column j.
SimilarityMatrix csls_adjust(const SimilarityMatrix& sm, std::size_t k);

// Mutual-argmax pairs: (i, j) such that j is the argmax of row i and i the
// argmax of column j. Ties broken by lowest index.
std::vector<std::pair<int, int>> reciprocity_filter(const SimilarityMatrix& sm);

struct BestMatchResult {
  std::vector<int> rows;                    // row ids covered, ascending
  std::vector<std::vector<int>> rankings;   // per covered row, descending score
  std::vector<int> assignment;              // per covered row, top-1 column or -1
};

// Per remaining E1 row, full descending ranking over non-excluded columns and
// the greedy top-1 assignment (independent per row; many-to-one allowed).
BestMatchResult best_match(const SimilarityMatrix& sm,
                           const std::unordered_set<int>& exclude_rows,
                           const std::unordered_set<int>& exclude_cols);

struct Assignment {
  std::vector<int> row_to_col;  // -1 for unassigned rows
  double total = 0.0;
};

// Optimal one-to-one assignment maximizing total score (Hungarian method with
// potentials, O(n^3)). Rectangular matrices are handled; the smaller side is
// fully assigned.
Assignment hungarian_assign(const SimilarityMatrix& sm);

}  // namespace kgalign
