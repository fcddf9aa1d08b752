#pragma once

#include <memory>
#include <optional>

#include "kgalign/component.hpp"
#include "kgalign/kg.hpp"
#include "kgalign/matrix.hpp"

namespace kgalign {

enum class StructuralVariant { translational, neighbor_agg, external };

struct StructuralConfig {
  StructuralVariant variant = StructuralVariant::neighbor_agg;
  std::size_t embed_dim = 100;
  int layers = 2;
  double dropout = 0.3;
  double learning_rate = 0.005;
  int max_epochs = 1200;
  int min_epochs = 10;
  int patience = 3;
  int eval_every = 50;
  double margin = 3.0;
  // Contrastive-objective settings shared with the factual component.
  double alpha = 0.8;
  int negatives_per_positive = 2;
  double truncation_fraction = 0.1;
  std::string external_path;  // used by the external variant
};

// -||h + r - t||_2; higher is better.
double translational_score(const std::vector<double>& h, const std::vector<double>& r,
                           const std::vector<double>& t);

// Margin-based translational triple model. Seed pairs are tied by mapping both
// entities of a training pair onto one shared embedding slot.
class TranslationalModel : public AlignmentComponent {
 public:
  TranslationalModel(const KnowledgeGraph& kg1, const KnowledgeGraph& kg2,
                     StructuralConfig cfg);

  void set_initial_vectors(std::vector<std::vector<double>> init1,
                           std::vector<std::vector<double>> init2);

  TrainStats train(const PairList& train_pairs, const PairList& val_pairs,
                   std::uint64_t rng_seed) override;
  SimilarityMatrix similarity() const override;
  std::string name() const override { return "structural-translational"; }

  std::vector<std::vector<double>> entity_vectors(int side) const;

 private:
  int global_id(int side, int e) const { return side == 0 ? e : kg1_.num_entities() + e; }
  void init(const PairList& tied_pairs, std::uint64_t seed);
  double validate_h1(const PairList& val_pairs) const;

  const KnowledgeGraph& kg1_;
  const KnowledgeGraph& kg2_;
  StructuralConfig cfg_;
  std::vector<int> slot_;          // global entity id -> embedding slot
  Matrix entity_embeds_;           // slots x d
  Matrix relation_embeds_;         // |R1|+|R2| x d
  std::optional<std::vector<std::vector<double>>> init1_, init2_;
};

// L layers of mean-neighbor aggregation with a trainable square transform per
// layer, trained with the contrastive objective over seed pairs. Training-pair
// entities share a base-embedding slot.
class NeighborAggModel : public AlignmentComponent {
 public:
  NeighborAggModel(const KnowledgeGraph& kg1, const KnowledgeGraph& kg2,
                   StructuralConfig cfg);

  void set_initial_vectors(std::vector<std::vector<double>> init1,
                           std::vector<std::vector<double>> init2);

  TrainStats train(const PairList& train_pairs, const PairList& val_pairs,
                   std::uint64_t rng_seed) override;
  SimilarityMatrix similarity() const override;
  std::string name() const override { return "structural-neighbor-agg"; }

  // Deterministic parameter initialization; exposed for gradient testing.
  void init(const PairList& tied_pairs, std::uint64_t seed);

  // Final-layer embeddings for all entities (kg1 rows first), no dropout.
  Matrix forward() const;

  // Contrastive loss over (pos, neg) pairs of (e1, e2) ids and its gradients
  // w.r.t. the layer transforms and the base embeddings. `dropout_masks`,
  // when given, holds one {0,1} matrix per layer applied to the aggregated
  // features (inverted dropout).
  double loss_and_gradient(const PairList& positives, const PairList& negatives,
                           std::vector<Matrix>& grad_layers, Matrix& grad_base,
                           const std::vector<Matrix>* dropout_masks = nullptr) const;

  std::vector<Matrix>& layer_weights() { return layer_weights_; }
  Matrix& base_embeds() { return base_embeds_; }

 private:
  int global_id(int side, int e) const { return side == 0 ? e : kg1_.num_entities() + e; }
  int total_entities() const { return kg1_.num_entities() + kg2_.num_entities(); }
  const std::vector<int>& neighbors(int gid) const;
  void forward_layers(std::vector<Matrix>& acts, const std::vector<Matrix>* masks) const;
  double validate_h1(const PairList& val_pairs) const;

  const KnowledgeGraph& kg1_;
  const KnowledgeGraph& kg2_;
  StructuralConfig cfg_;
  std::vector<int> slot_;          // global entity id -> base slot
  Matrix base_embeds_;             // slots x d
  std::vector<Matrix> layer_weights_;  // layers x (d x d)
  std::optional<std::vector<std::vector<double>>> init1_, init2_;
};

// Wraps an externally computed similarity matrix (the interchange path for
// full-scale structural models). Training is a no-op.
class ExternalMatrixModel : public AlignmentComponent {
 public:
  explicit ExternalMatrixModel(SimilarityMatrix sm) : sm_(std::move(sm)) {}

  TrainStats train(const PairList&, const PairList&, std::uint64_t) override {
    return {};
  }
  SimilarityMatrix similarity() const override { return sm_; }
  std::string name() const override { return "structural-external"; }

 private:
  SimilarityMatrix sm_;
};

// Builds the configured variant; external matrices are dimension-checked
// against the graphs.
std::unique_ptr<AlignmentComponent> make_structural_model(
    const KnowledgeGraph& kg1, const KnowledgeGraph& kg2,
    const StructuralConfig& cfg,
    std::vector<std::vector<double>> init1 = {},
    std::vector<std::vector<double>> init2 = {});

}  // namespace kgalign
