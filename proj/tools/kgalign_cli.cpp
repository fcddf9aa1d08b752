// Command-line front end: dataset analysis, component training, full
// co-training runs, evaluation, and similarity-matrix import/export.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kgalign/cotrain.hpp"
#include "kgalign/encoder.hpp"
#include "kgalign/errors.hpp"
#include "kgalign/factual.hpp"
#include "kgalign/kg.hpp"
#include "kgalign/matching.hpp"
#include "kgalign/metrics.hpp"
#include "kgalign/parallel.hpp"
#include "kgalign/structural.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace kgalign;

struct RunConfig {
  std::string dataset_dir;
  std::string vectors_path;
  std::string output_dir = ".";
  std::string order = "factual-first";
  std::string structural = "neighbor-agg";
  std::string name_attrs;  // comma-separated attribute labels counted as names
  double train_frac = 0.2;
  double val_frac = 0.1;
  std::uint64_t rng_seed = 42;
  int threads = 0;  // 0 = use KGALIGN_THREADS or 1
  FactualConfig factual;
  StructuralConfig structural_cfg;
  CotrainConfig cotrain;
};

void add_common_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--dataset", cfg.dataset_dir, "Dataset directory (five-file layout)")
      ->required();
  cmd->add_option("--vectors", cfg.vectors_path, "Precomputed text vector file");
  cmd->add_option("--dim", cfg.factual.dim, "Literal embedding dimension");
  cmd->add_option("--seed", cfg.rng_seed, "RNG seed");
  cmd->add_option("--out", cfg.output_dir, "Output directory");
  cmd->add_option("--threads", cfg.threads, "Data-parallelism cap");
  cmd->add_option("--train-frac", cfg.train_frac, "Training fraction of the seed");
  cmd->add_option("--val-frac", cfg.val_frac, "Validation fraction of the seed");
  cmd->set_config("--config");
}

void add_model_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--order", cfg.order, "factual-first | structural-first")
      ->check(CLI::IsMember({"factual-first", "structural-first"}));
  cmd->add_option("--structural", cfg.structural,
                  "translational | neighbor-agg | external:<path>");
  cmd->add_option("--max-cycles", cfg.cotrain.max_cycles, "Co-training cycles");
  cmd->add_option("--csls-k", cfg.cotrain.csls_k, "CSLS neighborhood size");
  cmd->add_option("--alpha", cfg.factual.alpha, "Negative-sample weight");
  cmd->add_option("--margin", cfg.factual.lambda_margin, "Contrastive margin");
  cmd->add_option("--lr-factual", cfg.factual.learning_rate, "Factual learning rate");
  cmd->add_option("--lr-structural", cfg.structural_cfg.learning_rate,
                  "Structural learning rate");
  cmd->add_option("--batch-size", cfg.factual.batch_size, "Factual batch size");
  cmd->add_option("--max-epochs-factual", cfg.factual.max_epochs, "");
  cmd->add_option("--max-epochs-structural", cfg.structural_cfg.max_epochs, "");
  cmd->add_option("--embed-dim", cfg.structural_cfg.embed_dim,
                  "Structural embedding dimension");
  cmd->add_option("--layers", cfg.structural_cfg.layers, "Aggregation layers");
  cmd->add_option("--dropout", cfg.structural_cfg.dropout, "Structural dropout");
}

void apply_threads(const RunConfig& cfg) {
  int t = cfg.threads;
  if (t <= 0) {
    if (const char* env = std::getenv("KGALIGN_THREADS")) t = std::atoi(env);
  }
  set_thread_count(t > 0 ? t : 1);
}

StructuralConfig resolve_structural(const RunConfig& cfg) {
  StructuralConfig s = cfg.structural_cfg;
  if (cfg.structural == "translational") {
    s.variant = StructuralVariant::translational;
  } else if (cfg.structural == "neighbor-agg") {
    s.variant = StructuralVariant::neighbor_agg;
  } else if (cfg.structural.rfind("external:", 0) == 0) {
    s.variant = StructuralVariant::external;
    s.external_path = cfg.structural.substr(9);
  } else {
    throw argument_error("unknown structural variant: " + cfg.structural);
  }
  s.alpha = cfg.factual.alpha;
  return s;
}

std::function<bool(const std::string&)> name_attribute_predicate(const RunConfig& cfg) {
  if (!cfg.name_attrs.empty()) {
    auto list = std::make_shared<std::vector<std::string>>();
    std::stringstream ss(cfg.name_attrs);
    std::string item;
    while (std::getline(ss, item, ',')) list->push_back(item);
    return [list](const std::string& attr) {
      for (const auto& n : *list) {
        if (attr == n) return true;
      }
      return false;
    };
  }
  // Default: any attribute whose label mentions "name" or "label".
  return [](const std::string& attr) {
    std::string lower = attr;
    for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return lower.find("name") != std::string::npos ||
           lower.find("label") != std::string::npos;
  };
}

json config_json(const RunConfig& cfg) {
  json j;
  j["dataset"] = cfg.dataset_dir;
  j["vectors"] = cfg.vectors_path;
  j["order"] = cfg.order;
  j["structural"] = cfg.structural;
  j["train_frac"] = cfg.train_frac;
  j["val_frac"] = cfg.val_frac;
  j["seed"] = cfg.rng_seed;
  j["factual"] = {{"alpha", cfg.factual.alpha},
                  {"lambda_margin", cfg.factual.lambda_margin},
                  {"learning_rate", cfg.factual.learning_rate},
                  {"batch_size", cfg.factual.batch_size},
                  {"negatives_per_positive", cfg.factual.negatives_per_positive},
                  {"truncation_fraction", cfg.factual.truncation_fraction},
                  {"max_epochs", cfg.factual.max_epochs},
                  {"min_epochs", cfg.factual.min_epochs},
                  {"patience", cfg.factual.patience},
                  {"eval_every", cfg.factual.eval_every},
                  {"dim", cfg.factual.dim}};
  j["structural_cfg"] = {{"embed_dim", cfg.structural_cfg.embed_dim},
                         {"layers", cfg.structural_cfg.layers},
                         {"dropout", cfg.structural_cfg.dropout},
                         {"learning_rate", cfg.structural_cfg.learning_rate},
                         {"max_epochs", cfg.structural_cfg.max_epochs},
                         {"min_epochs", cfg.structural_cfg.min_epochs},
                         {"patience", cfg.structural_cfg.patience},
                         {"eval_every", cfg.structural_cfg.eval_every},
                         {"margin", cfg.structural_cfg.margin}};
  j["cotrain"] = {{"max_cycles", cfg.cotrain.max_cycles},
                  {"csls_k", cfg.cotrain.csls_k},
                  {"stop_when_no_new_pairs", cfg.cotrain.stop_when_no_new_pairs},
                  {"rankings_top_k", cfg.cotrain.rankings_top_k}};
  return j;
}

int cmd_analyze(const RunConfig& cfg) {
  Dataset ds = load_openea_dataset(cfg.dataset_dir);
  GraphStats s1 = graph_stats(ds.kg1);
  GraphStats s2 = graph_stats(ds.kg2);
  HeterogeneityReport het;
  bool have_het = !ds.alignment.matches.empty();
  if (have_het) {
    het = analyze_heterogeneity(ds.kg1, ds.kg2, ds.alignment.matches,
                                name_attribute_predicate(cfg));
  }

  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << std::left << std::setw(14) << "metric" << std::setw(12) << "KG1"
      << std::setw(12) << "KG2" << '\n';
  out << std::setw(14) << "entities" << std::setw(12) << ds.kg1.num_entities()
      << std::setw(12) << ds.kg2.num_entities() << '\n';
  out << std::setw(14) << "maxCS" << std::setw(12) << s1.max_cs << std::setw(12)
      << s2.max_cs << '\n';
  out << std::setw(14) << "wccR" << std::setw(12) << s1.wcc_r << std::setw(12)
      << s2.wcc_r << '\n';
  out << std::setw(14) << "mean_degree" << std::setw(12) << s1.mean_degree
      << std::setw(12) << s2.mean_degree << '\n';
  if (have_het) {
    out << std::setw(14) << "jaccard" << het.jaccard << '\n';
    out << std::setw(14) << "ldmad" << het.ldmad << '\n';
    out << std::setw(14) << "lev_names" << het.lev_names << '\n';
    out << std::setw(14) << "lev_attrs" << het.lev_attrs << '\n';
  }
  std::cout << out.str();

  std::filesystem::create_directories(cfg.output_dir);
  std::ofstream report(std::filesystem::path(cfg.output_dir) / "analysis.txt");
  report << out.str();
  std::ofstream kv(std::filesystem::path(cfg.output_dir) / "analysis.kv");
  kv << std::setprecision(17);
  kv << "max_cs_1 = " << s1.max_cs << "\nwcc_r_1 = " << s1.wcc_r
     << "\nmean_degree_1 = " << s1.mean_degree << "\nnum_wcc_1 = " << s1.num_wcc
     << "\nmax_cs_2 = " << s2.max_cs << "\nwcc_r_2 = " << s2.wcc_r
     << "\nmean_degree_2 = " << s2.mean_degree << "\nnum_wcc_2 = " << s2.num_wcc
     << '\n';
  if (have_het) {
    kv << "jaccard = " << het.jaccard << "\nldmad = " << het.ldmad
       << "\nlev_names = " << het.lev_names << "\nlev_attrs = " << het.lev_attrs
       << '\n';
  }
  return 0;
}

ComponentOrder parse_order(const std::string& s) {
  return s == "structural-first" ? ComponentOrder::structural_first
                                 : ComponentOrder::factual_first;
}

int cmd_align(RunConfig& cfg) {
  Dataset ds = load_openea_dataset(cfg.dataset_dir);
  SeedAlignment split =
      split_seed(ds.alignment, cfg.train_frac, cfg.val_frac, cfg.rng_seed);

  VectorTable table;
  const VectorTable* table_ptr = nullptr;
  if (!cfg.vectors_path.empty()) {
    table = load_vectors(cfg.vectors_path);
    table_ptr = &table;
  }

  FactualModel factual(ds.kg1, ds.kg2, table_ptr, cfg.factual);
  StructuralConfig scfg = resolve_structural(cfg);
  auto structural = make_structural_model(ds.kg1, ds.kg2, scfg);

  cfg.cotrain.order = parse_order(cfg.order);
  MatchResult result =
      run_alignment(split, factual, *structural, cfg.cotrain, cfg.rng_seed);

  std::filesystem::create_directories(cfg.output_dir);
  auto out_dir = std::filesystem::path(cfg.output_dir);
  {
    std::ofstream matches(out_dir / "matches.tsv");
    auto write_pair = [&](const MatchPair& p) {
      matches << ds.kg1.entities[p.e1] << '\t' << ds.kg2.entities[p.e2] << '\t'
              << to_string(p.source) << '\t' << p.cycle << '\n';
    };
    for (const auto& p : result.reciprocal) write_pair(p);
    for (const auto& p : result.bipartite) write_pair(p);
  }
  {
    std::ofstream rankings(out_dir / "rankings.tsv");
    std::vector<int> rows;
    for (const auto& [e1, ranked] : result.rankings) rows.push_back(e1);
    std::sort(rows.begin(), rows.end());
    for (int e1 : rows) {
      rankings << ds.kg1.entities[e1] << '\t';
      const auto& ranked = result.rankings.at(e1);
      for (std::size_t i = 0; i < ranked.size(); ++i) {
        if (i) rankings << ' ';
        rankings << ds.kg2.entities[ranked[i]];
      }
      rankings << '\n';
    }
  }
  {
    json manifest;
    manifest["version"] = "kgalign-0.1.0";
    manifest["config"] = config_json(cfg);
    manifest["splits"] = {{"train", split.train.size()},
                          {"val", split.val.size()},
                          {"test", split.test.size()}};
    json cycles = json::array();
    for (const auto& c : result.per_cycle) {
      cycles.push_back({{"cycle", c.cycle},
                        {"component", c.component},
                        {"new_pairs", c.new_pairs},
                        {"epochs", c.epochs},
                        {"best_val_h1", c.best_val_h1}});
    }
    manifest["per_cycle"] = cycles;
    manifest["reciprocal"] = result.reciprocal.size();
    manifest["bipartite"] = result.bipartite.size();
    std::ofstream mf(out_dir / "manifest.json");
    mf << manifest.dump(2) << '\n';
  }
  std::cout << "reciprocal=" << result.reciprocal.size()
            << " bipartite=" << result.bipartite.size() << '\n';
  return 0;
}

int cmd_train_component(RunConfig& cfg, bool factual_component) {
  Dataset ds = load_openea_dataset(cfg.dataset_dir);
  SeedAlignment split =
      split_seed(ds.alignment, cfg.train_frac, cfg.val_frac, cfg.rng_seed);

  VectorTable table;
  const VectorTable* table_ptr = nullptr;
  if (!cfg.vectors_path.empty()) {
    table = load_vectors(cfg.vectors_path);
    table_ptr = &table;
  }

  std::filesystem::create_directories(cfg.output_dir);
  auto out_dir = std::filesystem::path(cfg.output_dir);
  TrainStats stats;
  SimilarityMatrix sm;
  if (factual_component) {
    FactualModel model(ds.kg1, ds.kg2, table_ptr, cfg.factual);
    stats = model.train(split.train, split.val, cfg.rng_seed);
    sm = model.similarity();
    model.save_checkpoint(out_dir / "factual.ckpt");
  } else {
    auto model = make_structural_model(ds.kg1, ds.kg2, resolve_structural(cfg));
    stats = model->train(split.train, split.val, cfg.rng_seed);
    sm = model->similarity();
  }
  export_similarity(sm, out_dir / "similarity.txt");
  std::cout << "epochs=" << stats.epochs << " best_val_h1=" << stats.best_val_h1
            << '\n';
  return 0;
}

int cmd_eval(RunConfig& cfg, const std::string& matches_path,
             const std::string& rankings_path) {
  Dataset ds = load_openea_dataset(cfg.dataset_dir);
  SeedAlignment split =
      split_seed(ds.alignment, cfg.train_frac, cfg.val_frac, cfg.rng_seed);

  auto entity_id = [](const KnowledgeGraph& kg, const std::string& name) {
    auto it = kg.entity_index.find(name);
    if (it == kg.entity_index.end()) {
      throw dataset_error("entity '" + name + "' not in dataset (seed mismatch?)");
    }
    return it->second;
  };

  MatchResult result;
  {
    std::ifstream in(matches_path);
    if (!in) throw dataset_error("cannot open matches file: " + matches_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string e1, e2, source, cycle;
      std::getline(ss, e1, '\t');
      std::getline(ss, e2, '\t');
      std::getline(ss, source, '\t');
      std::getline(ss, cycle, '\t');
      MatchPair p;
      p.e1 = entity_id(ds.kg1, e1);
      p.e2 = entity_id(ds.kg2, e2);
      p.cycle = std::atoi(cycle.c_str());
      if (source == "reciprocal-factual") {
        p.source = MatchSource::reciprocal_factual;
        result.reciprocal.push_back(p);
      } else if (source == "reciprocal-structural") {
        p.source = MatchSource::reciprocal_structural;
        result.reciprocal.push_back(p);
      } else {
        p.source = MatchSource::bipartite;
        result.bipartite.push_back(p);
      }
    }
  }
  if (!rankings_path.empty()) {
    std::ifstream in(rankings_path);
    if (!in) throw dataset_error("cannot open rankings file: " + rankings_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos) continue;
      int e1 = entity_id(ds.kg1, line.substr(0, tab));
      std::stringstream ss(line.substr(tab + 1));
      std::string name;
      std::vector<int> ranked;
      while (ss >> name) ranked.push_back(entity_id(ds.kg2, name));
      result.rankings.emplace(e1, std::move(ranked));
    }
  }

  EvalReport rep = evaluate(result, split.test, parse_order(cfg.order));
  std::cout << std::fixed << std::setprecision(4);
  std::cout << "h1 = " << rep.hits.at(1) << "\nh10 = " << rep.hits.at(10)
            << "\nmrr = " << rep.mrr << '\n';
  auto print_prf = [&](const char* tag, const ComponentPrf& c) {
    std::cout << tag << ".pr = " << c.precision << '\n'
              << tag << ".re = " << c.recall << '\n'
              << tag << ".max_re = " << c.max_recall << '\n'
              << tag << ".f1 = " << c.f1 << '\n';
  };
  print_prf("factual", rep.factual);
  print_prf("structural", rep.structural);
  return 0;
}

int cmd_import_sim(const std::string& input, const std::string& output,
                   const std::string& dataset_dir) {
  SimilarityMatrix sm = import_similarity(input);
  if (!dataset_dir.empty()) {
    Dataset ds = load_openea_dataset(dataset_dir);
    if (sm.rows() != static_cast<std::size_t>(ds.kg1.num_entities()) ||
        sm.cols() != static_cast<std::size_t>(ds.kg2.num_entities())) {
      throw argument_error("similarity matrix dimensions do not match the dataset");
    }
  }
  if (!output.empty()) export_similarity(sm, output);
  std::cout << "imported " << sm.rows() << "x" << sm.cols() << " matrix\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid knowledge-graph entity alignment"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string matches_path, rankings_path, sim_input, sim_output, sim_dataset;

  auto* analyze = app.add_subcommand("analyze", "Dataset heterogeneity analysis");
  add_common_flags(analyze, cfg);
  analyze->add_option("--name-attrs", cfg.name_attrs,
                      "Comma-separated attribute labels treated as names");

  auto* train_f = app.add_subcommand("train-factual", "Train the factual component");
  add_common_flags(train_f, cfg);
  add_model_flags(train_f, cfg);

  auto* train_s =
      app.add_subcommand("train-structural", "Train the structural component");
  add_common_flags(train_s, cfg);
  add_model_flags(train_s, cfg);

  auto* align = app.add_subcommand("align", "Full co-training alignment run");
  add_common_flags(align, cfg);
  add_model_flags(align, cfg);

  auto* eval = app.add_subcommand("eval", "Evaluate a matches/rankings pair");
  add_common_flags(eval, cfg);
  eval->add_option("--order", cfg.order, "Order used by the evaluated run");
  eval->add_option("--matches", matches_path, "matches.tsv from align")->required();
  eval->add_option("--rankings", rankings_path, "rankings.tsv from align");

  auto* import_sim =
      app.add_subcommand("import-sim", "Validate/re-export a similarity matrix");
  import_sim->add_option("--input", sim_input, "Matrix file")->required();
  import_sim->add_option("--output", sim_output, "Re-export destination");
  import_sim->add_option("--dataset", sim_dataset, "Dataset for dimension checks");

  CLI11_PARSE(app, argc, argv);

  try {
    apply_threads(cfg);
    if (analyze->parsed()) return cmd_analyze(cfg);
    if (train_f->parsed()) return cmd_train_component(cfg, true);
    if (train_s->parsed()) return cmd_train_component(cfg, false);
    if (align->parsed()) return cmd_align(cfg);
    if (eval->parsed()) return cmd_eval(cfg, matches_path, rankings_path);
    if (import_sim->parsed()) return cmd_import_sim(sim_input, sim_output, sim_dataset);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
