#include <doctest.h>

#include <set>
#include <unordered_set>

#include "kgalign/cotrain.hpp"
#include "kgalign/errors.hpp"
#include "kgalign/factual.hpp"
#include "kgalign/metrics.hpp"
#include "kgalign/structural.hpp"

#include "helpers.hpp"

using namespace kgalign;
using kgtest::TempDir;
using kgtest::make_hybrid_dataset;
using kgtest::write_file;

namespace {

FactualConfig fast_factual() {
  FactualConfig cfg;
  cfg.dim = 32;
  cfg.max_epochs = 20;
  return cfg;
}

StructuralConfig fast_structural(StructuralVariant v = StructuralVariant::neighbor_agg) {
  StructuralConfig cfg;
  cfg.variant = v;
  cfg.embed_dim = 16;
  cfg.max_epochs = 60;
  cfg.eval_every = 10;
  return cfg;
}

}  // namespace

TEST_CASE("harvest_reciprocal: scope restriction and conflict exclusion") {
  // 4x4 with reciprocal pairs (0,0) and (2,2) inside the test scope.
  SimilarityMatrix sm(4, 4);
  sm.at(0, 0) = 0.9;
  sm.at(2, 2) = 0.8;
  sm.at(1, 3) = 0.7;
  sm.at(3, 3) = 0.6;
  std::unordered_set<int> scope1 = {0, 2}, scope2 = {0, 2};

  auto all = harvest_reciprocal(sm, {}, {}, scope1, scope2,
                                MatchSource::reciprocal_factual, 1);
  REQUIRE(all.size() == 2);
  CHECK(all[0].e1 == 0);
  CHECK(all[0].e2 == 0);
  CHECK(all[1].e1 == 2);
  CHECK(all[1].e2 == 2);
  CHECK(all[0].source == MatchSource::reciprocal_factual);
  CHECK(all[0].cycle == 1);

  // Pre-matching one pair leaves exactly the other.
  auto rest = harvest_reciprocal(sm, {0}, {0}, scope1, scope2,
                                 MatchSource::reciprocal_factual, 2);
  REQUIRE(rest.size() == 1);
  CHECK(rest[0].e1 == 2);

  // Fully matched scope yields an empty harvest.
  auto none = harvest_reciprocal(sm, {0, 2}, {0, 2}, scope1, scope2,
                                 MatchSource::reciprocal_factual, 3);
  CHECK(none.empty());

  // Entities outside the test scope are never harvested.
  for (const auto& p : all) {
    CHECK(scope1.count(p.e1));
    CHECK(scope2.count(p.e2));
  }
}

TEST_CASE("run_alignment: empty training set rejected") {
  Dataset ds = make_hybrid_dataset(6);
  FactualModel factual(ds.kg1, ds.kg2, nullptr, fast_factual());
  auto structural = make_structural_model(ds.kg1, ds.kg2, fast_structural());
  SeedAlignment empty;
  CHECK_THROWS_AS(run_alignment(empty, factual, *structural, {}, 1),
                  argument_error);
}

TEST_CASE("run_alignment: separable fixture resolved with split provenance") {
  Dataset ds = make_hybrid_dataset(12);
  SeedAlignment split = split_seed(ds.alignment, 0.25, 0.15, 5);

  FactualModel factual(ds.kg1, ds.kg2, nullptr, fast_factual());
  auto structural = make_structural_model(ds.kg1, ds.kg2, fast_structural());
  CotrainConfig ccfg;
  MatchResult result = run_alignment(split, factual, *structural, ccfg, 5);

  // Coverage: every E1 test entity appears in exactly one of M' or M''.
  std::set<int> covered;
  for (const auto& p : result.reciprocal) CHECK(covered.insert(p.e1).second);
  for (const auto& p : result.bipartite) CHECK(covered.insert(p.e1).second);
  for (const auto& [e1, e2] : split.test) CHECK(covered.count(e1) == 1);

  // M'' never reuses an E2 entity claimed by M'.
  std::set<int> claimed2;
  for (const auto& p : result.reciprocal) claimed2.insert(p.e2);
  for (const auto& p : result.bipartite) CHECK(claimed2.count(p.e2) == 0);

  // Both components contributed reciprocal pairs and the final H@1 is 1.
  int n_fact = 0, n_struct = 0;
  for (const auto& p : result.reciprocal) {
    (p.source == MatchSource::reciprocal_factual ? n_fact : n_struct) += 1;
  }
  CHECK(n_fact > 0);
  CHECK(n_struct > 0);
  EvalReport rep = evaluate(result, split.test, ccfg.order);
  CHECK(rep.hits.at(1) == doctest::Approx(1.0));
}

TEST_CASE("run_alignment: cycle bookkeeping and termination") {
  Dataset ds = make_hybrid_dataset(10);
  SeedAlignment split = split_seed(ds.alignment, 0.25, 0.15, 9);
  FactualModel factual(ds.kg1, ds.kg2, nullptr, fast_factual());
  auto structural = make_structural_model(ds.kg1, ds.kg2, fast_structural());
  CotrainConfig ccfg;
  ccfg.max_cycles = 4;
  MatchResult result = run_alignment(split, factual, *structural, ccfg, 11);

  // At most 2 trainings per cycle; a zero-new-pairs cycle is the last one.
  CHECK(result.per_cycle.size() <= 8);
  CHECK(result.per_cycle.size() % 2 == 0);
  for (std::size_t i = 0; i + 2 < result.per_cycle.size(); i += 2) {
    int cycle_total =
        result.per_cycle[i].new_pairs + result.per_cycle[i + 1].new_pairs;
    CHECK(cycle_total > 0);  // no trailing all-zero cycles before the last
  }
  // Component alternation in the configured order.
  for (std::size_t i = 0; i < result.per_cycle.size(); i += 2) {
    CHECK(result.per_cycle[i].component == "factual");
    CHECK(result.per_cycle[i + 1].component.rfind("structural", 0) == 0);
  }

  // No E1 or E2 entity is harvested twice.
  std::set<int> seen1, seen2;
  for (const auto& p : result.reciprocal) {
    CHECK(seen1.insert(p.e1).second);
    CHECK(seen2.insert(p.e2).second);
  }
}

TEST_CASE("run_alignment: max_cycles=1 trains each component exactly once") {
  Dataset ds = make_hybrid_dataset(8);
  SeedAlignment split = split_seed(ds.alignment, 0.25, 0.2, 3);
  FactualModel factual(ds.kg1, ds.kg2, nullptr, fast_factual());
  auto structural = make_structural_model(ds.kg1, ds.kg2, fast_structural());
  CotrainConfig ccfg;
  ccfg.max_cycles = 1;
  MatchResult result = run_alignment(split, factual, *structural, ccfg, 2);
  REQUIRE(result.per_cycle.size() == 2);
  CHECK(result.per_cycle[0].cycle == 1);
  CHECK(result.per_cycle[1].cycle == 1);
}

TEST_CASE("run_alignment: structural-first flips the component order") {
  Dataset ds = make_hybrid_dataset(8);
  SeedAlignment split = split_seed(ds.alignment, 0.25, 0.2, 3);
  FactualModel factual(ds.kg1, ds.kg2, nullptr, fast_factual());
  auto structural = make_structural_model(ds.kg1, ds.kg2, fast_structural());
  CotrainConfig ccfg;
  ccfg.max_cycles = 1;
  ccfg.order = ComponentOrder::structural_first;
  MatchResult result = run_alignment(split, factual, *structural, ccfg, 2);
  REQUIRE(result.per_cycle.size() == 2);
  CHECK(result.per_cycle[0].component.rfind("structural", 0) == 0);
  CHECK(result.per_cycle[1].component == "factual");
}

TEST_CASE("run_alignment: replay determinism") {
  Dataset ds = make_hybrid_dataset(8);
  SeedAlignment split = split_seed(ds.alignment, 0.25, 0.2, 4);
  CotrainConfig ccfg;
  ccfg.max_cycles = 2;

  auto run_once = [&]() {
    FactualModel factual(ds.kg1, ds.kg2, nullptr, fast_factual());
    auto structural = make_structural_model(ds.kg1, ds.kg2, fast_structural());
    return run_alignment(split, factual, *structural, ccfg, 77);
  };
  MatchResult a = run_once();
  MatchResult b = run_once();
  REQUIRE(a.reciprocal == b.reciprocal);
  REQUIRE(a.bipartite == b.bipartite);
  REQUIRE(a.final_similarity.scores.data == b.final_similarity.scores.data);
  CHECK(a.rankings == b.rankings);
}

TEST_CASE("run_alignment: all three structural variants are interchangeable") {
  Dataset ds = make_hybrid_dataset(8);
  SeedAlignment split = split_seed(ds.alignment, 0.25, 0.2, 6);
  CotrainConfig ccfg;
  ccfg.max_cycles = 1;

  TempDir tmp;
  auto ext = tmp.path() / "external.txt";
  {
    // A perfect external matrix: identity-like over the gold mapping.
    SimilarityMatrix sm(ds.kg1.num_entities(), ds.kg2.num_entities());
    for (const auto& [e1, e2] : ds.alignment.matches) sm.at(e1, e2) = 1.0;
    export_similarity(sm, ext);
  }

  for (auto variant : {StructuralVariant::translational,
                       StructuralVariant::neighbor_agg,
                       StructuralVariant::external}) {
    StructuralConfig scfg = fast_structural(variant);
    scfg.max_epochs = 20;
    scfg.external_path = ext.string();
    FactualModel factual(ds.kg1, ds.kg2, nullptr, fast_factual());
    auto structural = make_structural_model(ds.kg1, ds.kg2, scfg);
    MatchResult result = run_alignment(split, factual, *structural, ccfg, 8);

    // Valid result: disjoint coverage of the test rows.
    std::set<int> covered;
    for (const auto& p : result.reciprocal) REQUIRE(covered.insert(p.e1).second);
    for (const auto& p : result.bipartite) REQUIRE(covered.insert(p.e1).second);
    std::set<int> test1;
    for (const auto& [e1, e2] : split.test) test1.insert(e1);
    for (int e : covered) CHECK(test1.count(e) == 1);
  }
}

TEST_CASE("run_alignment: rankings cover unmatched rows, truncated to top_k") {
  Dataset ds = make_hybrid_dataset(10);
  SeedAlignment split = split_seed(ds.alignment, 0.25, 0.15, 13);
  FactualModel factual(ds.kg1, ds.kg2, nullptr, fast_factual());
  // External all-zero matrix: the structural pass harvests nothing, leaving
  // rows for the bipartite completion.
  TempDir tmp;
  auto ext = tmp.path() / "zeros.txt";
  export_similarity(
      SimilarityMatrix(ds.kg1.num_entities(), ds.kg2.num_entities()), ext);
  StructuralConfig scfg = fast_structural(StructuralVariant::external);
  scfg.external_path = ext.string();
  auto structural = make_structural_model(ds.kg1, ds.kg2, scfg);
  CotrainConfig ccfg;
  ccfg.max_cycles = 1;
  ccfg.rankings_top_k = 3;
  MatchResult result = run_alignment(split, factual, *structural, ccfg, 21);
  std::set<int> reciprocal1;
  for (const auto& p : result.reciprocal) reciprocal1.insert(p.e1);
  for (const auto& [e1, ranked] : result.rankings) {
    CHECK(reciprocal1.count(e1) == 0);
    CHECK(ranked.size() <= 3);
  }
  for (const auto& p : result.bipartite) {
    CHECK(result.rankings.count(p.e1) == 1);
  }
}
