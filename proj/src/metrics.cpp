#include "kgalign/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_set>

#include "kgalign/errors.hpp"

namespace kgalign {

namespace {

std::vector<std::uint32_t> decode_utf8(const std::string& s) {
  std::vector<std::uint32_t> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    std::uint32_t cp = 0;
    std::size_t len = 1;
    if (c < 0x80) {
      cp = c;
    } else if ((c >> 5) == 0x6) {
      cp = c & 0x1F;
      len = 2;
    } else if ((c >> 4) == 0xE) {
      cp = c & 0x0F;
      len = 3;
    } else if ((c >> 3) == 0x1E) {
      cp = c & 0x07;
      len = 4;
    } else {
      // Invalid lead byte: treat as a lone scalar so comparisons stay total.
      out.push_back(c);
      ++i;
      continue;
    }
    if (i + len > s.size()) {
      out.push_back(c);
      ++i;
      continue;
    }
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      unsigned char cc = static_cast<unsigned char>(s[i + k]);
      if ((cc >> 6) != 0x2) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      out.push_back(c);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

// Rank of the gold candidate (1-based); 0 means miss. Reciprocal matches are
// final decisions: a correct one is rank 1, a wrong one hides the gold.
std::size_t gold_rank(int e1, int gold, const RankingMap& rankings,
                      const std::set<std::pair<int, int>>& reciprocal,
                      const std::unordered_set<int>& reciprocal_e1) {
  if (reciprocal.count({e1, gold})) return 1;
  if (reciprocal_e1.count(e1)) return 0;
  auto it = rankings.find(e1);
  if (it == rankings.end()) return 0;
  auto pos = std::find(it->second.begin(), it->second.end(), gold);
  if (pos == it->second.end()) return 0;
  return static_cast<std::size_t>(pos - it->second.begin()) + 1;
}

std::unordered_set<int> e1_side(const std::set<std::pair<int, int>>& pairs) {
  std::unordered_set<int> out;
  for (const auto& [e1, e2] : pairs) out.insert(e1);
  return out;
}

}  // namespace

double hits_at_k(const RankingMap& rankings, const GoldMap& gold,
                 const std::set<std::pair<int, int>>& reciprocal, int k) {
  if (gold.empty()) return 0.0;
  auto rec1 = e1_side(reciprocal);
  std::size_t hits = 0;
  for (const auto& [e1, e2] : gold) {
    std::size_t r = gold_rank(e1, e2, rankings, reciprocal, rec1);
    if (r >= 1 && r <= static_cast<std::size_t>(k)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

double mrr(const RankingMap& rankings, const GoldMap& gold,
           const std::set<std::pair<int, int>>& reciprocal) {
  if (gold.empty()) return 0.0;
  auto rec1 = e1_side(reciprocal);
  double sum = 0.0;
  for (const auto& [e1, e2] : gold) {
    std::size_t r = gold_rank(e1, e2, rankings, reciprocal, rec1);
    if (r >= 1) sum += 1.0 / static_cast<double>(r);
  }
  return sum / static_cast<double>(gold.size());
}

EvalReport evaluate(const MatchResult& result, const GoldMap& gold_test,
                    ComponentOrder order, const std::vector<int>& hits_ks) {
  std::set<std::pair<int, int>> reciprocal;
  for (const auto& p : result.reciprocal) reciprocal.insert({p.e1, p.e2});

  EvalReport rep;
  for (int k : hits_ks) {
    rep.hits[k] = hits_at_k(result.rankings, gold_test, reciprocal, k);
  }
  rep.mrr = mrr(result.rankings, gold_test, reciprocal);

  std::set<std::pair<int, int>> gold_set(gold_test.begin(), gold_test.end());
  auto prf = [&](MatchSource source) {
    ComponentPrf out;
    for (const auto& p : result.reciprocal) {
      if (p.source != source) continue;
      ++out.harvested;
      if (gold_set.count({p.e1, p.e2})) ++out.correct;
    }
    if (out.harvested == 0) {
      out.zero_support = true;
      out.precision = 1.0;
    } else {
      out.precision = static_cast<double>(out.correct) / out.harvested;
    }
    out.recall = gold_test.empty()
                     ? 0.0
                     : static_cast<double>(out.correct) / gold_test.size();
    double pr = out.precision + out.recall;
    out.f1 = pr > 0.0 ? 2.0 * out.precision * out.recall / pr : 0.0;
    return out;
  };
  rep.factual = prf(MatchSource::reciprocal_factual);
  rep.structural = prf(MatchSource::reciprocal_structural);
  if (order == ComponentOrder::factual_first) {
    rep.factual.max_recall = 1.0;
    rep.structural.max_recall = 1.0 - rep.factual.recall;
  } else {
    rep.structural.max_recall = 1.0;
    rep.factual.max_recall = 1.0 - rep.structural.recall;
  }
  return rep;
}

double jaccard_matched_neighbors(const KnowledgeGraph& kg1, const KnowledgeGraph& kg2,
                                 const GoldMap& matches) {
  if (matches.empty()) throw argument_error("jaccard: empty match set");
  std::unordered_map<int, int> match_of;
  for (const auto& [u, v] : matches) match_of.emplace(u, v);

  double total = 0.0;
  for (const auto& [u, v] : matches) {
    const auto& nu = kg1.adjacency[u];
    const auto& nv = kg2.adjacency[v];
    if (nu.empty() && nv.empty()) continue;  // denominator guard
    std::unordered_set<int> nv_set(nv.begin(), nv.end());
    std::size_t common = 0;
    for (int x : nu) {
      auto it = match_of.find(x);
      if (it != match_of.end() && nv_set.count(it->second)) ++common;
    }
    double denom = static_cast<double>(nu.size() + nv.size() - common);
    if (denom > 0.0) total += static_cast<double>(common) / denom;
  }
  return total / static_cast<double>(matches.size());
}

double ldmad(const KnowledgeGraph& kg1, const KnowledgeGraph& kg2,
             const GoldMap& matches) {
  if (matches.empty()) throw argument_error("ldmad: empty match set");
  double total = 0.0;
  for (const auto& [u, v] : matches) {
    total += std::abs(static_cast<double>(kg1.adjacency[u].size()) -
                      static_cast<double>(kg2.adjacency[v].size()));
  }
  return total / static_cast<double>(matches.size());
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  auto ca = decode_utf8(a);
  auto cb = decode_utf8(b);
  std::vector<std::size_t> prev(cb.size() + 1), cur(cb.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= ca.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= cb.size(); ++j) {
      std::size_t sub = prev[j - 1] + (ca[i - 1] == cb[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[cb.size()];
}

double lev_index(const std::string& a, const std::string& b) {
  auto la = decode_utf8(a).size();
  auto lb = decode_utf8(b).size();
  if (la + lb == 0) return 1.0;
  double len = static_cast<double>(la + lb);
  return (len - static_cast<double>(edit_distance(a, b))) / len;
}

double critical_distance(double q_alpha, int k, int n) {
  if (k < 2 || n < 1 || q_alpha < 0.0) {
    throw argument_error("critical_distance: need k >= 2, n >= 1, q_alpha >= 0");
  }
  return q_alpha * std::sqrt(static_cast<double>(k) * (k + 1) / (6.0 * n));
}

std::vector<double> average_ranks(const Matrix& scores) {
  if (scores.rows == 0 || scores.cols == 0) {
    throw argument_error("average_ranks: empty score table");
  }
  for (double x : scores.data) {
    if (!std::isfinite(x)) throw argument_error("average_ranks: missing/non-finite cell");
  }
  std::vector<double> mean(scores.rows, 0.0);
  for (std::size_t dset = 0; dset < scores.cols; ++dset) {
    std::vector<std::size_t> order(scores.rows);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return scores(a, dset) > scores(b, dset);
    });
    std::size_t i = 0;
    while (i < order.size()) {
      std::size_t j = i;
      while (j + 1 < order.size() &&
             scores(order[j + 1], dset) == scores(order[i], dset)) {
        ++j;
      }
      double tied_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
      for (std::size_t t = i; t <= j; ++t) mean[order[t]] += tied_rank;
      i = j + 1;
    }
  }
  for (double& m : mean) m /= static_cast<double>(scores.cols);
  return mean;
}

HeterogeneityReport analyze_heterogeneity(
    const KnowledgeGraph& kg1, const KnowledgeGraph& kg2, const GoldMap& matches,
    const std::function<bool(const std::string&)>& is_name_attribute) {
  HeterogeneityReport rep;
  rep.jaccard = jaccard_matched_neighbors(kg1, kg2, matches);
  rep.ldmad = ldmad(kg1, kg2, matches);
  rep.mean_degree_1 = graph_stats(kg1).mean_degree;
  rep.mean_degree_2 = graph_stats(kg2).mean_degree;

  auto literals_of = [](const KnowledgeGraph& kg, int e, auto&& pred) {
    std::vector<const std::string*> out;
    for (int tid : kg.entity_attr_triples[e]) {
      const auto& t = kg.attribute_triples[tid];
      if (pred(kg.attributes[t[1]])) out.push_back(&kg.literals[t[2]]);
    }
    return out;
  };
  auto any_attr = [](const std::string&) { return true; };

  double name_total = 0.0, attr_total = 0.0;
  std::size_t name_pairs = 0, attr_pairs = 0;
  for (const auto& [u, v] : matches) {
    auto names_u = literals_of(kg1, u, is_name_attribute);
    auto names_v = literals_of(kg2, v, is_name_attribute);
    if (!names_u.empty() && !names_v.empty()) {
      double best = 0.0;
      for (const auto* a : names_u) {
        for (const auto* b : names_v) best = std::max(best, lev_index(*a, *b));
      }
      name_total += best;
      ++name_pairs;
    }

    auto lits_u = literals_of(kg1, u, any_attr);
    auto lits_v = literals_of(kg2, v, any_attr);
    if (!lits_u.empty() && !lits_v.empty()) {
      // Greedy max per literal of u over all of v's literals.
      double sum = 0.0;
      for (const auto* a : lits_u) {
        double best = 0.0;
        for (const auto* b : lits_v) best = std::max(best, lev_index(*a, *b));
        sum += best;
      }
      attr_total += sum / static_cast<double>(lits_u.size());
      ++attr_pairs;
    }
  }
  rep.lev_names = name_pairs ? name_total / static_cast<double>(name_pairs) : 0.0;
  rep.lev_attrs = attr_pairs ? attr_total / static_cast<double>(attr_pairs) : 0.0;
  return rep;
}

}  // namespace kgalign
