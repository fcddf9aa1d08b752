#pragma once

#include <unistd.h>

#include <array>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "kgalign/kg.hpp"

namespace kgtest {

using namespace kgalign;

// Builds a KG from string triples; extra_entities forces isolated entities.
inline KnowledgeGraph make_kg(
    const std::vector<std::array<std::string, 3>>& rel_triples,
    const std::vector<std::array<std::string, 3>>& attr_triples = {},
    const std::vector<std::string>& extra_entities = {}) {
  KnowledgeGraph kg;
  for (const auto& t : rel_triples) {
    int h = kg.intern_entity(t[0]);
    int r = kg.intern_relation(t[1]);
    int tl = kg.intern_entity(t[2]);
    kg.relation_triples.push_back({h, r, tl});
  }
  for (const auto& t : attr_triples) {
    int e = kg.intern_entity(t[0]);
    int a = kg.intern_attribute(t[1]);
    int l = kg.intern_literal(t[2]);
    kg.attribute_triples.push_back({e, a, l});
  }
  for (const auto& e : extra_entities) kg.intern_entity(e);
  kg.build_indexes();
  return kg;
}

// Two isomorphic graphs where half the gold pairs are separable only by
// factual evidence and half only by structure:
//   - n "a" entities carry one unique literal shared across the graphs and
//     look structurally interchangeable before any a's are matched;
//   - n "b" entities have no attributes (zero factual evidence) but sit on a
//     chain b_i -- a_i, b_i -- a_{(i+1)%n} that identifies them once the a's
//     are pinned down.
inline Dataset make_hybrid_dataset(int n) {
  Dataset ds;
  auto build = [&](KnowledgeGraph& kg, const std::string& suffix) {
    for (int i = 0; i < n; ++i) {
      std::string a1 = "a" + std::to_string(i) + suffix;
      std::string a2 = "a" + std::to_string((i + 1) % n) + suffix;
      std::string b = "b" + std::to_string(i) + suffix;
      int bh = kg.intern_entity(b);
      int r = kg.intern_relation("r" + suffix);
      kg.relation_triples.push_back({bh, r, kg.intern_entity(a1)});
      kg.relation_triples.push_back({bh, r, kg.intern_entity(a2)});
    }
    for (int i = 0; i < n; ++i) {
      int e = kg.intern_entity("a" + std::to_string(i) + suffix);
      int at = kg.intern_attribute("name" + suffix);
      // The literal is shared verbatim across graphs (same encoded vector).
      int l = kg.intern_literal("unique-literal-" + std::to_string(i));
      kg.attribute_triples.push_back({e, at, l});
    }
    kg.build_indexes();
  };
  build(ds.kg1, "/1");
  build(ds.kg2, "/2");
  for (int i = 0; i < n; ++i) {
    for (const char* p : {"a", "b"}) {
      std::string name = std::string(p) + std::to_string(i);
      ds.alignment.matches.emplace_back(ds.kg1.entity_index.at(name + "/1"),
                                        ds.kg2.entity_index.at(name + "/2"));
    }
  }
  return ds;
}

// Two aligned rings of n entities each.
inline Dataset make_ring_dataset(int n) {
  Dataset ds;
  auto build = [&](KnowledgeGraph& kg, const std::string& suffix) {
    for (int i = 0; i < n; ++i) {
      int h = kg.intern_entity("e" + std::to_string(i) + suffix);
      int r = kg.intern_relation("next" + suffix);
      int t = kg.intern_entity("e" + std::to_string((i + 1) % n) + suffix);
      kg.relation_triples.push_back({h, r, t});
    }
    kg.build_indexes();
  };
  build(ds.kg1, "/1");
  build(ds.kg2, "/2");
  for (int i = 0; i < n; ++i) ds.alignment.matches.emplace_back(i, i);
  return ds;
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    dir_ = std::filesystem::temp_directory_path() /
           ("kgalign-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter++));
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  const std::filesystem::path& path() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

}  // namespace kgtest
