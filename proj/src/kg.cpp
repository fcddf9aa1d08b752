#include "kgalign/kg.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "kgalign/errors.hpp"

namespace kgalign {

namespace {

int intern(std::unordered_map<std::string, int>& index,
           std::vector<std::string>& names, const std::string& name) {
  auto it = index.find(name);
  if (it != index.end()) return it->second;
  int id = static_cast<int>(names.size());
  names.push_back(name);
  index.emplace(name, id);
  return id;
}

// Splits a line into exactly `arity` tab-separated fields.
std::vector<std::string> split_tabs(const std::string& line, std::size_t arity,
                                    const std::string& file, std::size_t lineno) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  if (fields.size() != arity) {
    throw parse_error(file + ":" + std::to_string(lineno) + ": expected " +
                      std::to_string(arity) + " tab-separated fields, got " +
                      std::to_string(fields.size()));
  }
  return fields;
}

void for_each_line(const std::filesystem::path& path,
                   const std::function<void(const std::string&, std::size_t)>& fn) {
  std::ifstream in(path);
  if (!in) throw dataset_error("missing dataset file: " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    fn(line, lineno);
  }
}

void load_rel_triples(KnowledgeGraph& kg, const std::filesystem::path& path) {
  for_each_line(path, [&](const std::string& line, std::size_t lineno) {
    auto f = split_tabs(line, 3, path.filename().string(), lineno);
    int h = kg.intern_entity(f[0]);
    int r = kg.intern_relation(f[1]);
    int t = kg.intern_entity(f[2]);
    kg.relation_triples.push_back({h, r, t});
  });
}

void load_attr_triples(KnowledgeGraph& kg, const std::filesystem::path& path) {
  for_each_line(path, [&](const std::string& line, std::size_t lineno) {
    auto f = split_tabs(line, 3, path.filename().string(), lineno);
    int e = kg.intern_entity(f[0]);
    int a = kg.intern_attribute(f[1]);
    int l = kg.intern_literal(f[2]);
    kg.attribute_triples.push_back({e, a, l});
  });
}

}  // namespace

int KnowledgeGraph::intern_entity(const std::string& name) {
  return intern(entity_index, entities, name);
}
int KnowledgeGraph::intern_relation(const std::string& name) {
  return intern(relation_index, relations, name);
}
int KnowledgeGraph::intern_attribute(const std::string& name) {
  return intern(attribute_index, attributes, name);
}
int KnowledgeGraph::intern_literal(const std::string& value) {
  return intern(literal_index, literals, value);
}

void KnowledgeGraph::build_indexes() {
  adjacency.assign(entities.size(), {});
  for (const auto& t : relation_triples) {
    if (t[0] == t[2]) continue;
    adjacency[t[0]].push_back(t[2]);
    adjacency[t[2]].push_back(t[0]);
  }
  for (auto& nbrs : adjacency) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  entity_attr_triples.assign(entities.size(), {});
  for (std::size_t i = 0; i < attribute_triples.size(); ++i) {
    entity_attr_triples[attribute_triples[i][0]].push_back(static_cast<int>(i));
  }
}

Dataset load_openea_dataset(const std::filesystem::path& dir) {
  Dataset ds;
  load_rel_triples(ds.kg1, dir / "rel_triples_1");
  load_rel_triples(ds.kg2, dir / "rel_triples_2");
  load_attr_triples(ds.kg1, dir / "attr_triples_1");
  load_attr_triples(ds.kg2, dir / "attr_triples_2");

  const auto links = dir / "ent_links";
  {
    std::ifstream in(links);
    if (!in) throw dataset_error("missing dataset file: " + links.string());
  }
  for_each_line(links, [&](const std::string& line, std::size_t lineno) {
    auto f = split_tabs(line, 2, "ent_links", lineno);
    auto it1 = ds.kg1.entity_index.find(f[0]);
    auto it2 = ds.kg2.entity_index.find(f[1]);
    if (it1 == ds.kg1.entity_index.end()) {
      throw dataset_error("ent_links:" + std::to_string(lineno) + ": entity '" +
                          f[0] + "' not found in KG1 triple files");
    }
    if (it2 == ds.kg2.entity_index.end()) {
      throw dataset_error("ent_links:" + std::to_string(lineno) + ": entity '" +
                          f[1] + "' not found in KG2 triple files");
    }
    ds.alignment.matches.emplace_back(it1->second, it2->second);
  });

  ds.kg1.build_indexes();
  ds.kg2.build_indexes();
  return ds;
}

void save_openea_dataset(const Dataset& ds, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write_triples = [&](const KnowledgeGraph& kg,
                           const std::vector<std::array<int, 3>>& triples,
                           const std::vector<std::string>& preds,
                           const std::vector<std::string>& tails,
                           const std::string& name) {
    std::ofstream out(dir / name);
    for (const auto& t : triples) {
      out << kg.entities[t[0]] << '\t' << preds[t[1]] << '\t' << tails[t[2]] << '\n';
    }
  };
  write_triples(ds.kg1, ds.kg1.relation_triples, ds.kg1.relations, ds.kg1.entities,
                "rel_triples_1");
  write_triples(ds.kg2, ds.kg2.relation_triples, ds.kg2.relations, ds.kg2.entities,
                "rel_triples_2");
  write_triples(ds.kg1, ds.kg1.attribute_triples, ds.kg1.attributes, ds.kg1.literals,
                "attr_triples_1");
  write_triples(ds.kg2, ds.kg2.attribute_triples, ds.kg2.attributes, ds.kg2.literals,
                "attr_triples_2");
  std::ofstream out(dir / "ent_links");
  for (const auto& [e1, e2] : ds.alignment.matches) {
    out << ds.kg1.entities[e1] << '\t' << ds.kg2.entities[e2] << '\n';
  }
}

SeedAlignment split_seed(const SeedAlignment& alignment, double train_frac,
                         double val_frac, std::uint64_t rng_seed) {
  if (train_frac < 0.0 || val_frac < 0.0 || train_frac + val_frac > 1.0) {
    throw argument_error("split fractions must be nonnegative and sum to at most 1");
  }
  SeedAlignment out;
  out.matches = alignment.matches;
  std::vector<std::pair<int, int>> shuffled = alignment.matches;
  std::mt19937_64 rng(rng_seed);
  // Fisher-Yates
  for (std::size_t i = shuffled.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> d(0, i - 1);
    std::swap(shuffled[i - 1], shuffled[d(rng)]);
  }
  std::size_t n = shuffled.size();
  std::size_t n_train = static_cast<std::size_t>(train_frac * static_cast<double>(n));
  std::size_t n_val = static_cast<std::size_t>(val_frac * static_cast<double>(n));
  out.train.assign(shuffled.begin(), shuffled.begin() + n_train);
  out.val.assign(shuffled.begin() + n_train, shuffled.begin() + n_train + n_val);
  out.test.assign(shuffled.begin() + n_train + n_val, shuffled.end());
  return out;
}

GraphStats graph_stats(const KnowledgeGraph& kg) {
  int n = kg.num_entities();
  if (n == 0) throw argument_error("graph_stats: empty knowledge graph");

  std::vector<int> comp(n, -1);
  int num_comp = 0;
  std::size_t largest = 0;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (comp[s] != -1) continue;
    std::size_t size = 0;
    stack.push_back(s);
    comp[s] = num_comp;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      ++size;
      for (int u : kg.adjacency[v]) {
        if (comp[u] == -1) {
          comp[u] = num_comp;
          stack.push_back(u);
        }
      }
    }
    largest = std::max(largest, size);
    ++num_comp;
  }

  GraphStats st;
  st.num_wcc = num_comp;
  st.max_cs = static_cast<double>(largest) / n;
  st.wcc_r = static_cast<double>(num_comp) / n;
  st.mean_degree = 2.0 * static_cast<double>(kg.relation_triples.size()) / n;
  return st;
}

}  // namespace kgalign
