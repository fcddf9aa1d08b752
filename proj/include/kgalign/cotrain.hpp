#pragma once

#include <unordered_map>
#include <unordered_set>

#include "kgalign/component.hpp"
#include "kgalign/kg.hpp"
#include "kgalign/matching.hpp"

namespace kgalign {

enum class ComponentOrder { factual_first, structural_first };

struct CotrainConfig {
  int max_cycles = 4;
  ComponentOrder order = ComponentOrder::factual_first;
  int csls_k = 2;
  bool stop_when_no_new_pairs = true;
  bool keep_cycle_matrices = false;  // snapshot the matrix after each training
  int rankings_top_k = 10;
};

struct CycleComponentStats {
  int cycle = 0;
  std::string component;
  int new_pairs = 0;
  int epochs = 0;
  double best_val_h1 = 0.0;
};

struct MatchResult {
  std::vector<MatchPair> reciprocal;  // M' with provenance
  std::vector<MatchPair> bipartite;   // M''
  std::vector<CycleComponentStats> per_cycle;
  SimilarityMatrix final_similarity;
  // Per still-unmatched E1 test entity, descending candidate list (top-K).
  std::unordered_map<int, std::vector<int>> rankings;
  // Filled when keep_cycle_matrices is set; one snapshot per training.
  std::vector<SimilarityMatrix> cycle_matrices;
};

// Mutual-argmax pairs restricted to the rows/columns of unmatched test-scope
// entities; anything conflicting with already-matched entities is excluded by
// construction.
std::vector<MatchPair> harvest_reciprocal(const SimilarityMatrix& sm,
                                          const std::unordered_set<int>& matched1,
                                          const std::unordered_set<int>& matched2,
                                          const std::unordered_set<int>& test_scope1,
                                          const std::unordered_set<int>& test_scope2,
                                          MatchSource source, int cycle);

// Semi-supervised co-training: cycles of first-then-second component training,
// reciprocity harvesting into the shared training pool, and a final greedy
// bipartite completion for whatever the filter left unmatched.
MatchResult run_alignment(const SeedAlignment& seed, AlignmentComponent& factual,
                          AlignmentComponent& structural, const CotrainConfig& ccfg,
                          std::uint64_t rng_seed);

}  // namespace kgalign
