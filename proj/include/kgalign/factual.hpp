#pragma once

#include <filesystem>
#include <span>

#include "kgalign/component.hpp"
#include "kgalign/encoder.hpp"
#include "kgalign/kg.hpp"
#include "kgalign/matrix.hpp"

namespace kgalign {

struct FactualConfig {
  double alpha = 0.8;           // weight of negative vs positive loss terms
  double lambda_margin = 3.0;   // hinge margin for negatives
  double learning_rate = 5e-5;
  int batch_size = 24;
  int negatives_per_positive = 2;
  double truncation_fraction = 0.1;
  int max_epochs = 200;
  int min_epochs = 5;
  int patience = 3;
  int eval_every = 5;
  std::size_t dim = 768;
};

// Trainable state of the factual component. The two attribute-type matrices
// are disjoint parameter sets (pseudo-Siamese); literal value embeddings are
// fixed after construction.
struct FactualParams {
  Matrix attr_embeds1;  // |A1| x d
  Matrix attr_embeds2;  // |A2| x d
  std::vector<std::vector<double>> value_embeds1;  // per KG1 literal
  std::vector<std::vector<double>> value_embeds2;  // per KG2 literal
  std::size_t dim = 0;
};

// Per-attribute-triple weights for one entity: softmax(Q K^T / sqrt(d)) rows
// read out at each triple's own attribute type, then renormalized to sum to 1
// over the entity's triples. Empty result means no factual evidence.
std::vector<double> attention_weights(const KnowledgeGraph& kg, int entity,
                                      const Matrix& attr_embeds);

// Weighted sum of the entity's literal value embeddings. Zero-attribute
// entities embed as the zero vector.
std::vector<double> entity_embedding(const KnowledgeGraph& kg, int entity,
                                     const std::vector<double>& weights,
                                     const std::vector<std::vector<double>>& value_embeds,
                                     std::size_t dim);

// (1-alpha) * sum(pos distances) + alpha * sum(max(0, lambda - neg distance)).
double contrastive_loss(std::span<const double> positive_distances,
                        std::span<const double> negative_distances,
                        const FactualConfig& cfg);

class FactualModel : public AlignmentComponent {
 public:
  FactualModel(const KnowledgeGraph& kg1, const KnowledgeGraph& kg2,
               const VectorTable* vectors, FactualConfig cfg);

  TrainStats train(const PairList& train_pairs, const PairList& val_pairs,
                   std::uint64_t rng_seed) override;
  SimilarityMatrix similarity() const override;
  std::string name() const override { return "factual"; }

  // Resets attribute-type embeddings to their encoder initialization.
  void init_params();

  const FactualParams& params() const { return params_; }
  FactualParams& params() { return params_; }
  const FactualConfig& config() const { return cfg_; }

  std::vector<double> embed_entity(int side, int entity) const;
  std::vector<std::vector<double>> embed_all(int side) const;

  // Loss over the given pairs and its gradient w.r.t. both attribute-type
  // matrices, accumulated into grad1/grad2 (which are zeroed first).
  double loss_and_gradient(const PairList& positives, const PairList& negatives,
                           Matrix& grad1, Matrix& grad2) const;

  double validate_h1(const PairList& val_pairs) const;

  // Bit-exact textual checkpoint of FactualParams.
  void save_checkpoint(const std::filesystem::path& file) const;
  void load_checkpoint(const std::filesystem::path& file);

  // Entities with no attribute triples, per side; matchable only structurally.
  std::size_t zero_evidence_count(int side) const;

 private:
  const KnowledgeGraph& kg(int side) const { return side == 0 ? kg1_ : kg2_; }
  const Matrix& attr_embeds(int side) const {
    return side == 0 ? params_.attr_embeds1 : params_.attr_embeds2;
  }
  const std::vector<std::vector<double>>& value_embeds(int side) const {
    return side == 0 ? params_.value_embeds1 : params_.value_embeds2;
  }
  void backprop_entity(int side, int entity, const std::vector<double>& grad_out,
                       Matrix& grad) const;

  const KnowledgeGraph& kg1_;
  const KnowledgeGraph& kg2_;
  const VectorTable* vectors_;
  FactualConfig cfg_;
  FactualParams params_;
  Matrix init_attr1_, init_attr2_;
};

}  // namespace kgalign
