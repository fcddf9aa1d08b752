#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cctype>

#include "kgalign/cotrain.hpp"
#include "kgalign/encoder.hpp"
#include "kgalign/errors.hpp"
#include "kgalign/factual.hpp"
#include "kgalign/kg.hpp"
#include "kgalign/matching.hpp"
#include "kgalign/metrics.hpp"
#include "kgalign/parallel.hpp"
#include "kgalign/similarity.hpp"
#include "kgalign/structural.hpp"

namespace py = pybind11;
using namespace kgalign;

namespace {

// Row-major nested lists <-> Matrix, the lowest-friction bridge for the
// matrix-valued operations.
Matrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return Matrix();
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) {
      throw argument_error("ragged matrix rows");
    }
    for (std::size_t j = 0; j < rows[0].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::vector<std::vector<double>> matrix_to_rows(const Matrix& m) {
  std::vector<std::vector<double>> out(m.rows, std::vector<double>(m.cols));
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) out[i][j] = m(i, j);
  }
  return out;
}

SimilarityMatrix sim_from_rows(const std::vector<std::vector<double>>& rows) {
  SimilarityMatrix sm;
  sm.scores = matrix_from_rows(rows);
  return sm;
}

StructuralVariant parse_variant(const std::string& name) {
  if (name == "translational") return StructuralVariant::translational;
  if (name == "neighbor-agg") return StructuralVariant::neighbor_agg;
  if (name == "external") return StructuralVariant::external;
  throw argument_error("unknown structural variant: " + name);
}

}  // namespace

PYBIND11_MODULE(_kgalign, m) {
  m.doc() = "Hybrid knowledge-graph entity alignment core";

  py::register_exception<parse_error>(m, "ParseError", PyExc_ValueError);
  py::register_exception<dataset_error>(m, "DatasetError", PyExc_ValueError);

  py::class_<KnowledgeGraph>(m, "KnowledgeGraph")
      .def_property_readonly("num_entities", &KnowledgeGraph::num_entities)
      .def_readonly("entities", &KnowledgeGraph::entities)
      .def("entity_id",
           [](const KnowledgeGraph& kg, const std::string& name) {
             auto it = kg.entity_index.find(name);
             if (it == kg.entity_index.end()) {
               throw argument_error("unknown entity: " + name);
             }
             return it->second;
           })
      .def("__len__", &KnowledgeGraph::num_entities);

  py::class_<SeedAlignment>(m, "SeedAlignment")
      .def_readonly("matches", &SeedAlignment::matches)
      .def_readonly("train", &SeedAlignment::train)
      .def_readonly("val", &SeedAlignment::val)
      .def_readonly("test", &SeedAlignment::test);

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("kg1", &Dataset::kg1)
      .def_readonly("kg2", &Dataset::kg2)
      .def_readonly("alignment", &Dataset::alignment);

  py::class_<GraphStats>(m, "GraphStats")
      .def_readonly("max_cs", &GraphStats::max_cs)
      .def_readonly("wcc_r", &GraphStats::wcc_r)
      .def_readonly("mean_degree", &GraphStats::mean_degree)
      .def_readonly("num_wcc", &GraphStats::num_wcc);

  py::class_<HeterogeneityReport>(m, "HeterogeneityReport")
      .def_readonly("jaccard", &HeterogeneityReport::jaccard)
      .def_readonly("ldmad", &HeterogeneityReport::ldmad)
      .def_readonly("mean_degree_1", &HeterogeneityReport::mean_degree_1)
      .def_readonly("mean_degree_2", &HeterogeneityReport::mean_degree_2)
      .def_readonly("lev_names", &HeterogeneityReport::lev_names)
      .def_readonly("lev_attrs", &HeterogeneityReport::lev_attrs);

  py::class_<MatchPair>(m, "MatchPair")
      .def_readonly("e1", &MatchPair::e1)
      .def_readonly("e2", &MatchPair::e2)
      .def_readonly("cycle", &MatchPair::cycle)
      .def_property_readonly(
          "source", [](const MatchPair& p) { return to_string(p.source); })
      .def("__repr__", [](const MatchPair& p) {
        return "MatchPair(" + std::to_string(p.e1) + ", " + std::to_string(p.e2) +
               ", " + to_string(p.source) + ", cycle=" + std::to_string(p.cycle) +
               ")";
      });

  py::class_<CycleComponentStats>(m, "CycleComponentStats")
      .def_readonly("cycle", &CycleComponentStats::cycle)
      .def_readonly("component", &CycleComponentStats::component)
      .def_readonly("new_pairs", &CycleComponentStats::new_pairs)
      .def_readonly("epochs", &CycleComponentStats::epochs)
      .def_readonly("best_val_h1", &CycleComponentStats::best_val_h1);

  py::class_<MatchResult>(m, "MatchResult")
      .def_readonly("reciprocal", &MatchResult::reciprocal)
      .def_readonly("bipartite", &MatchResult::bipartite)
      .def_readonly("per_cycle", &MatchResult::per_cycle)
      .def_readonly("rankings", &MatchResult::rankings)
      .def_property_readonly("final_similarity", [](const MatchResult& r) {
        return matrix_to_rows(r.final_similarity.scores);
      });

  py::class_<ComponentPrf>(m, "ComponentPrf")
      .def_readonly("precision", &ComponentPrf::precision)
      .def_readonly("recall", &ComponentPrf::recall)
      .def_readonly("max_recall", &ComponentPrf::max_recall)
      .def_readonly("f1", &ComponentPrf::f1)
      .def_readonly("harvested", &ComponentPrf::harvested)
      .def_readonly("correct", &ComponentPrf::correct)
      .def_readonly("zero_support", &ComponentPrf::zero_support);

  py::class_<EvalReport>(m, "EvalReport")
      .def_readonly("hits", &EvalReport::hits)
      .def_readonly("mrr", &EvalReport::mrr)
      .def_readonly("factual", &EvalReport::factual)
      .def_readonly("structural", &EvalReport::structural);

  m.def("load_dataset", &load_openea_dataset, py::arg("directory"),
        "Load a five-file tab-separated dataset directory.");
  m.def("save_dataset", &save_openea_dataset, py::arg("dataset"),
        py::arg("directory"));
  m.def("graph_stats", &graph_stats, py::arg("kg"));
  m.def(
      "split_seed",
      [](const SeedAlignment& a, double train_frac, double val_frac,
         std::uint64_t seed) { return split_seed(a, train_frac, val_frac, seed); },
      py::arg("alignment"), py::arg("train_frac"), py::arg("val_frac"),
      py::arg("seed"));
  m.def("set_thread_count", &set_thread_count, py::arg("n"));

  m.def(
      "encode",
      [](const std::string& text, std::size_t dim) {
        return encode(text, nullptr, dim);
      },
      py::arg("text"), py::arg("dim") = 768,
      "Deterministic hashed character n-gram text embedding.");

  m.def(
      "csls_adjust",
      [](const std::vector<std::vector<double>>& sm, std::size_t k) {
        return matrix_to_rows(csls_adjust(sim_from_rows(sm), k).scores);
      },
      py::arg("similarity"), py::arg("k") = 2);
  m.def(
      "reciprocity_filter",
      [](const std::vector<std::vector<double>>& sm) {
        return reciprocity_filter(sim_from_rows(sm));
      },
      py::arg("similarity"));
  m.def(
      "best_match",
      [](const std::vector<std::vector<double>>& sm,
         const std::unordered_set<int>& exclude_rows,
         const std::unordered_set<int>& exclude_cols) {
        BestMatchResult r = best_match(sim_from_rows(sm), exclude_rows, exclude_cols);
        return py::make_tuple(r.rows, r.rankings, r.assignment);
      },
      py::arg("similarity"), py::arg("exclude_rows") = std::unordered_set<int>{},
      py::arg("exclude_cols") = std::unordered_set<int>{});
  m.def(
      "hungarian_assign",
      [](const std::vector<std::vector<double>>& sm) {
        Assignment a = hungarian_assign(sim_from_rows(sm));
        return py::make_tuple(a.row_to_col, a.total);
      },
      py::arg("similarity"));

  m.def("lev_index", &lev_index, py::arg("a"), py::arg("b"));
  m.def("edit_distance", &edit_distance, py::arg("a"), py::arg("b"));
  m.def("critical_distance", &critical_distance, py::arg("q_alpha"), py::arg("k"),
        py::arg("n"));
  m.def(
      "average_ranks",
      [](const std::vector<std::vector<double>>& scores) {
        return average_ranks(matrix_from_rows(scores));
      },
      py::arg("scores"));
  m.def(
      "analyze_heterogeneity",
      [](const KnowledgeGraph& kg1, const KnowledgeGraph& kg2, const GoldMap& matches,
         const std::vector<std::string>& name_attributes) {
        auto is_name = [name_attributes](const std::string& label) {
          if (name_attributes.empty()) {
            std::string lower;
            for (char c : label) lower.push_back(static_cast<char>(std::tolower(
                static_cast<unsigned char>(c))));
            return lower.find("name") != std::string::npos ||
                   lower.find("label") != std::string::npos;
          }
          for (const auto& a : name_attributes) {
            if (a == label) return true;
          }
          return false;
        };
        return analyze_heterogeneity(kg1, kg2, matches, is_name);
      },
      py::arg("kg1"), py::arg("kg2"), py::arg("matches"),
      py::arg("name_attributes") = std::vector<std::string>{});

  m.def(
      "evaluate",
      [](const MatchResult& result, const GoldMap& gold, const std::string& order,
         const std::vector<int>& hits_ks) {
        ComponentOrder o = order == "structural-first"
                               ? ComponentOrder::structural_first
                               : ComponentOrder::factual_first;
        return evaluate(result, gold, o, hits_ks);
      },
      py::arg("result"), py::arg("gold_test"), py::arg("order") = "factual-first",
      py::arg("hits_ks") = std::vector<int>{1, 10});

  m.def(
      "align",
      [](const Dataset& ds, double train_frac, double val_frac,
         std::uint64_t seed, const std::string& structural, int max_cycles,
         const std::string& order, std::size_t factual_dim,
         std::size_t structural_dim, int max_epochs_factual,
         int max_epochs_structural, const std::string& external_path) {
        SeedAlignment split = split_seed(ds.alignment, train_frac, val_frac, seed);
        FactualConfig fcfg;
        fcfg.dim = factual_dim;
        fcfg.max_epochs = max_epochs_factual;
        StructuralConfig scfg;
        scfg.variant = parse_variant(structural);
        scfg.embed_dim = structural_dim;
        scfg.max_epochs = max_epochs_structural;
        scfg.external_path = external_path;
        FactualModel factual(ds.kg1, ds.kg2, nullptr, fcfg);
        auto structural_model = make_structural_model(ds.kg1, ds.kg2, scfg);
        CotrainConfig ccfg;
        ccfg.max_cycles = max_cycles;
        ccfg.order = order == "structural-first" ? ComponentOrder::structural_first
                                                 : ComponentOrder::factual_first;
        MatchResult result =
            run_alignment(split, factual, *structural_model, ccfg, seed);
        return py::make_tuple(std::move(result), split);
      },
      py::arg("dataset"), py::arg("train_frac") = 0.2, py::arg("val_frac") = 0.1,
      py::arg("seed") = 42, py::arg("structural") = "neighbor-agg",
      py::arg("max_cycles") = 4, py::arg("order") = "factual-first",
      py::arg("factual_dim") = 64, py::arg("structural_dim") = 32,
      py::arg("max_epochs_factual") = 40, py::arg("max_epochs_structural") = 300,
      py::arg("external_path") = std::string{},
      "Run the full semi-supervised alignment pipeline; returns (result, split).");
}
