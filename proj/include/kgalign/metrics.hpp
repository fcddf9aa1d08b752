#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "kgalign/cotrain.hpp"
#include "kgalign/kg.hpp"
#include "kgalign/matrix.hpp"

namespace kgalign {

struct ComponentPrf {
  double precision = 1.0;   // 1.0-with-zero-support convention for empty harvests
  double recall = 0.0;
  double max_recall = 1.0;  // bound left by the component that ran before
  double f1 = 0.0;
  int harvested = 0;
  int correct = 0;
  bool zero_support = false;
};

struct EvalReport {
  std::map<int, double> hits;  // k -> H@k
  double mrr = 0.0;
  ComponentPrf factual;
  ComponentPrf structural;
};

using RankingMap = std::unordered_map<int, std::vector<int>>;
using GoldMap = std::vector<std::pair<int, int>>;

// Fraction of gold pairs whose counterpart appears in the top k of the
// ranking; pairs in `reciprocal` count as rank 1.
double hits_at_k(const RankingMap& rankings, const GoldMap& gold,
                 const std::set<std::pair<int, int>>& reciprocal, int k);

double mrr(const RankingMap& rankings, const GoldMap& gold,
           const std::set<std::pair<int, int>>& reciprocal);

// Cumulative precision/recall/F1 of the reciprocity harvests per component.
// `order` fixes which component ran first (its recall bounds the other's
// max_recall as 1 - recall).
EvalReport evaluate(const MatchResult& result, const GoldMap& gold_test,
                    ComponentOrder order, const std::vector<int>& hits_ks = {1, 10});

// Mean Jaccard index of matched cross-neighborhoods over the match pairs.
double jaccard_matched_neighbors(const KnowledgeGraph& kg1, const KnowledgeGraph& kg2,
                                 const GoldMap& matches);

// Mean absolute degree difference over the match pairs.
double ldmad(const KnowledgeGraph& kg1, const KnowledgeGraph& kg2,
             const GoldMap& matches);

// (|a| + |b| - edit_distance) / (|a| + |b|) over Unicode scalar values;
// defined as 1.0 when both strings are empty.
double lev_index(const std::string& a, const std::string& b);

// Unit-cost Levenshtein distance over Unicode scalar values.
std::size_t edit_distance(const std::string& a, const std::string& b);

// q_alpha * sqrt(k (k+1) / (6 n)) for Bonferroni-Dunn post-hoc comparison.
double critical_distance(double q_alpha, int k, int n);

// Per-method mean rank across datasets; scores(i, j) is method i on dataset j,
// higher is better, ties get the mean rank.
std::vector<double> average_ranks(const Matrix& scores);

struct HeterogeneityReport {
  double jaccard = 0.0;
  double ldmad = 0.0;
  double mean_degree_1 = 0.0;
  double mean_degree_2 = 0.0;
  double lev_names = 0.0;
  double lev_attrs = 0.0;
};

// Table-style dataset heterogeneity analysis over the gold matches.
// `is_name_attribute` selects which attribute labels count as entity names.
HeterogeneityReport analyze_heterogeneity(
    const KnowledgeGraph& kg1, const KnowledgeGraph& kg2, const GoldMap& matches,
    const std::function<bool(const std::string&)>& is_name_attribute);

}  // namespace kgalign
