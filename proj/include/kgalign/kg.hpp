#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace kgalign {

// A knowledge graph with relation triples (structural evidence) and attribute
// triples (factual evidence). Entities, relations, attributes and literals are
// interned into dense integer ids; original strings are kept for I/O.
struct KnowledgeGraph {
  std::vector<std::string> entities;
  std::vector<std::string> relations;
  std::vector<std::string> attributes;
  std::vector<std::string> literals;

  // (head entity, relation, tail entity)
  std::vector<std::array<int, 3>> relation_triples;
  // (entity, attribute, literal)
  std::vector<std::array<int, 3>> attribute_triples;

  // Undirected neighbor index derived from relation_triples; sorted, deduped,
  // no self-loops. Entities appearing only in attribute triples have empty
  // neighborhoods.
  std::vector<std::vector<int>> adjacency;
  // Indices into attribute_triples, grouped per head entity.
  std::vector<std::vector<int>> entity_attr_triples;

  std::unordered_map<std::string, int> entity_index;
  std::unordered_map<std::string, int> relation_index;
  std::unordered_map<std::string, int> attribute_index;
  std::unordered_map<std::string, int> literal_index;

  int num_entities() const { return static_cast<int>(entities.size()); }

  int intern_entity(const std::string& name);
  int intern_relation(const std::string& name);
  int intern_attribute(const std::string& name);
  int intern_literal(const std::string& value);

  // Rebuilds adjacency and per-entity attribute indexes from the triple lists.
  void build_indexes();
};

// Gold matching pairs with train/val/test partitions. Pairs are (e1, e2)
// entity ids into the two graphs.
struct SeedAlignment {
  std::vector<std::pair<int, int>> matches;
  std::vector<std::pair<int, int>> train;
  std::vector<std::pair<int, int>> val;
  std::vector<std::pair<int, int>> test;
};

struct GraphStats {
  double max_cs = 0.0;     // largest weakly connected component / |E|
  double wcc_r = 0.0;      // number of components / |E|
  double mean_degree = 0.0;  // 2|X| / |E|
  int num_wcc = 0;
};

struct Dataset {
  KnowledgeGraph kg1;
  KnowledgeGraph kg2;
  SeedAlignment alignment;
};

// Reads the five-file tab-separated layout: rel_triples_1, rel_triples_2,
// attr_triples_1, attr_triples_2, ent_links. Literals are stored verbatim
// (only the trailing newline is stripped).
Dataset load_openea_dataset(const std::filesystem::path& dir);

// Writes a dataset back in the same layout.
void save_openea_dataset(const Dataset& ds, const std::filesystem::path& dir);

// Deterministic shuffle under rng_seed, then contiguous slicing:
// |train| = floor(train_frac * |M|), |val| = floor(val_frac * |M|),
// remainder to test.
SeedAlignment split_seed(const SeedAlignment& alignment, double train_frac,
                         double val_frac, std::uint64_t rng_seed);

// Weakly connected components over the undirected relation-triple graph.
GraphStats graph_stats(const KnowledgeGraph& kg);

}  // namespace kgalign
