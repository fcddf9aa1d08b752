#include "kgalign/cotrain.hpp"

#include <algorithm>
#include <array>

#include "kgalign/errors.hpp"

namespace kgalign {

std::vector<MatchPair> harvest_reciprocal(const SimilarityMatrix& sm,
                                          const std::unordered_set<int>& matched1,
                                          const std::unordered_set<int>& matched2,
                                          const std::unordered_set<int>& test_scope1,
                                          const std::unordered_set<int>& test_scope2,
                                          MatchSource source, int cycle) {
  std::vector<int> rows, cols;
  for (std::size_t i = 0; i < sm.rows(); ++i) {
    int e = static_cast<int>(i);
    if (test_scope1.count(e) && !matched1.count(e)) rows.push_back(e);
  }
  for (std::size_t j = 0; j < sm.cols(); ++j) {
    int e = static_cast<int>(j);
    if (test_scope2.count(e) && !matched2.count(e)) cols.push_back(e);
  }
  if (rows.empty() || cols.empty()) return {};

  SimilarityMatrix sub(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      sub.at(i, j) = sm.at(rows[i], cols[j]);
    }
  }
  std::vector<MatchPair> out;
  for (const auto& [i, j] : reciprocity_filter(sub)) {
    out.push_back({rows[i], cols[j], source, cycle});
  }
  return out;
}

MatchResult run_alignment(const SeedAlignment& seed, AlignmentComponent& factual,
                          AlignmentComponent& structural, const CotrainConfig& ccfg,
                          std::uint64_t rng_seed) {
  if (seed.train.empty()) {
    throw argument_error("run_alignment: empty training set");
  }

  std::unordered_set<int> test1, test2, matched1, matched2;
  for (const auto& [e1, e2] : seed.test) {
    test1.insert(e1);
    test2.insert(e2);
  }

  std::array<AlignmentComponent*, 2> components =
      ccfg.order == ComponentOrder::factual_first
          ? std::array<AlignmentComponent*, 2>{&factual, &structural}
          : std::array<AlignmentComponent*, 2>{&structural, &factual};

  MatchResult result;
  PairList pool = seed.train;
  bool have_sm = false;

  for (int cycle = 1; cycle <= ccfg.max_cycles; ++cycle) {
    int cycle_new = 0;
    for (int ci = 0; ci < 2; ++ci) {
      AlignmentComponent* comp = components[ci];
      std::uint64_t comp_seed =
          rng_seed * 1000003ULL + static_cast<std::uint64_t>(cycle) * 2ULL + ci;
      TrainStats stats = comp->train(pool, seed.val, comp_seed);

      SimilarityMatrix sm = comp->similarity();
      std::size_t k = std::min<std::size_t>(
          {static_cast<std::size_t>(std::max(ccfg.csls_k, 1)), sm.rows(), sm.cols()});
      sm = csls_adjust(sm, k);

      MatchSource source = comp == &factual ? MatchSource::reciprocal_factual
                                            : MatchSource::reciprocal_structural;
      auto new_pairs =
          harvest_reciprocal(sm, matched1, matched2, test1, test2, source, cycle);
      for (const auto& p : new_pairs) {
        matched1.insert(p.e1);
        matched2.insert(p.e2);
        pool.emplace_back(p.e1, p.e2);
        result.reciprocal.push_back(p);
      }
      cycle_new += static_cast<int>(new_pairs.size());

      result.per_cycle.push_back({cycle, comp->name(),
                                  static_cast<int>(new_pairs.size()), stats.epochs,
                                  stats.best_val_h1});
      if (ccfg.keep_cycle_matrices) result.cycle_matrices.push_back(sm);
      result.final_similarity = std::move(sm);
      have_sm = true;
    }
    if (cycle_new == 0 && ccfg.stop_when_no_new_pairs) break;
  }
  (void)have_sm;

  // Greedy completion for unmatched test entities; columns claimed by the
  // reciprocity filter stay off limits.
  std::unordered_set<int> exclude_rows;
  for (std::size_t i = 0; i < result.final_similarity.rows(); ++i) {
    int e = static_cast<int>(i);
    if (!test1.count(e) || matched1.count(e)) exclude_rows.insert(e);
  }
  auto bm = best_match(result.final_similarity, exclude_rows, matched2);
  for (std::size_t r = 0; r < bm.rows.size(); ++r) {
    if (bm.assignment[r] != -1) {
      result.bipartite.push_back(
          {bm.rows[r], bm.assignment[r], MatchSource::bipartite, 0});
    }
    auto& ranked = bm.rankings[r];
    if (static_cast<int>(ranked.size()) > ccfg.rankings_top_k) {
      ranked.resize(ccfg.rankings_top_k);
    }
    result.rankings.emplace(bm.rows[r], std::move(ranked));
  }
  return result;
}

}  // namespace kgalign
