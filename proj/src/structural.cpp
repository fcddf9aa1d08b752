#include "kgalign/structural.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "kgalign/early_stop.hpp"
#include "kgalign/errors.hpp"
#include "kgalign/parallel.hpp"
#include "kgalign/sampling.hpp"
#include "kgalign/similarity.hpp"
#include "kgalign/vecmath.hpp"

namespace kgalign {

namespace {

constexpr double kDistEps = 1e-12;

// Union-find over global entity ids; training pairs collapse to one slot.
std::vector<int> build_slots(int total, int offset2,
                             const std::vector<std::pair<int, int>>& tied_pairs) {
  std::vector<int> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& [e1, e2] : tied_pairs) {
    int a = find(e1), b = find(e2 + offset2);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> slot(total, -1);
  int next = 0;
  for (int v = 0; v < total; ++v) {
    int r = find(v);
    if (slot[r] == -1) slot[r] = next++;
    slot[v] = slot[r];
  }
  return slot;
}

// Members per slot, to distinguish tied slots from singletons.
std::vector<int> slot_sizes(const std::vector<int>& slot) {
  int slots = slot.empty() ? 0 : *std::max_element(slot.begin(), slot.end()) + 1;
  std::vector<int> sizes(slots, 0);
  for (int s : slot) ++sizes[s];
  return sizes;
}

bool ranked_first(const std::vector<double>& scores, int gold) {
  for (int j = 0; j < static_cast<int>(scores.size()); ++j) {
    if (j == gold) continue;
    if (scores[j] > scores[gold] || (scores[j] == scores[gold] && j < gold)) {
      return false;
    }
  }
  return true;
}

}  // namespace

double translational_score(const std::vector<double>& h, const std::vector<double>& r,
                           const std::vector<double>& t) {
  double s = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    double x = h[i] + r[i] - t[i];
    s += x * x;
  }
  return -std::sqrt(s);
}

// ---------------------------------------------------------------------------
// TranslationalModel

TranslationalModel::TranslationalModel(const KnowledgeGraph& kg1,
                                       const KnowledgeGraph& kg2,
                                       StructuralConfig cfg)
    : kg1_(kg1), kg2_(kg2), cfg_(cfg) {}

void TranslationalModel::set_initial_vectors(std::vector<std::vector<double>> init1,
                                             std::vector<std::vector<double>> init2) {
  init1_ = std::move(init1);
  init2_ = std::move(init2);
}

void TranslationalModel::init(const PairList& tied_pairs, std::uint64_t seed) {
  const int n1 = kg1_.num_entities();
  const int total = n1 + kg2_.num_entities();
  slot_ = build_slots(total, n1, tied_pairs);
  int slots = *std::max_element(slot_.begin(), slot_.end()) + 1;
  const std::size_t d = cfg_.embed_dim;

  std::mt19937_64 rng(seed);
  double bound = 6.0 / std::sqrt(static_cast<double>(d));
  std::uniform_real_distribution<double> u(-bound, bound);
  entity_embeds_ = Matrix(slots, d);
  for (double& x : entity_embeds_.data) x = u(rng);
  if (init1_ && init2_) {
    for (int v = 0; v < total; ++v) {
      const auto& vec = v < n1 ? (*init1_)[v] : (*init2_)[v - n1];
      if (vec.size() == d) std::copy(vec.begin(), vec.end(), entity_embeds_.row(slot_[v]));
    }
  }
  relation_embeds_ = Matrix(kg1_.relations.size() + kg2_.relations.size(), d);
  for (double& x : relation_embeds_.data) x = u(rng);
  for (std::size_t r = 0; r < relation_embeds_.rows; ++r) {
    double n = std::sqrt(dot(relation_embeds_.row(r), relation_embeds_.row(r), d));
    if (n > 0) {
      for (std::size_t k = 0; k < d; ++k) relation_embeds_(r, k) /= n;
    }
  }
}

std::vector<std::vector<double>> TranslationalModel::entity_vectors(int side) const {
  const KnowledgeGraph& g = side == 0 ? kg1_ : kg2_;
  std::vector<std::vector<double>> out(g.num_entities());
  for (int e = 0; e < g.num_entities(); ++e) {
    const double* row = entity_embeds_.row(slot_[global_id(side, e)]);
    out[e].assign(row, row + cfg_.embed_dim);
  }
  return out;
}

double TranslationalModel::validate_h1(const PairList& val_pairs) const {
  if (val_pairs.empty()) return 0.0;
  auto e1 = entity_vectors(0);
  auto e2 = entity_vectors(1);
  std::size_t hits = 0;
  std::vector<double> scores(e2.size());
  for (const auto& [a, gold] : val_pairs) {
    for (std::size_t j = 0; j < e2.size(); ++j) scores[j] = cosine(e1[a], e2[j]);
    hits += ranked_first(scores, gold);
  }
  return static_cast<double>(hits) / static_cast<double>(val_pairs.size());
}

TrainStats TranslationalModel::train(const PairList& train_pairs,
                                     const PairList& val_pairs,
                                     std::uint64_t rng_seed) {
  if (train_pairs.empty() || val_pairs.empty()) {
    throw argument_error("translational train: empty train or val set");
  }
  init(train_pairs, rng_seed);
  std::mt19937_64 rng(rng_seed ^ 0x7261696eULL);
  const std::size_t d = cfg_.embed_dim;
  const int n1 = kg1_.num_entities();

  Matrix best_e = entity_embeds_, best_r = relation_embeds_;
  EarlyStopper stopper(cfg_.patience);
  stopper.seed_best(validate_h1(val_pairs));
  TrainStats stats;

  auto train_triples = [&](const KnowledgeGraph& g, int side, int rel_offset) {
    std::uniform_int_distribution<int> pick(0, g.num_entities() - 1);
    std::bernoulli_distribution corrupt_head(0.5);
    for (const auto& t : g.relation_triples) {
      int h = slot_[global_id(side, t[0])];
      int r = t[1] + rel_offset;
      int tl = slot_[global_id(side, t[2])];
      int ch = t[0], ct = t[2];
      if (corrupt_head(rng)) {
        do { ch = pick(rng); } while (ch == t[0] && g.num_entities() > 1);
      } else {
        do { ct = pick(rng); } while (ct == t[2] && g.num_entities() > 1);
      }
      int nh = slot_[global_id(side, ch)];
      int nt = slot_[global_id(side, ct)];

      std::vector<double> dp(d), dn(d);
      double dist_p = 0.0, dist_n = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        dp[k] = entity_embeds_(h, k) + relation_embeds_(r, k) - entity_embeds_(tl, k);
        dn[k] = entity_embeds_(nh, k) + relation_embeds_(r, k) - entity_embeds_(nt, k);
        dist_p += dp[k] * dp[k];
        dist_n += dn[k] * dn[k];
      }
      dist_p = std::sqrt(dist_p);
      dist_n = std::sqrt(dist_n);
      if (cfg_.margin + dist_p - dist_n <= 0.0) continue;

      double lr = cfg_.learning_rate;
      if (dist_p > kDistEps) {
        for (std::size_t k = 0; k < d; ++k) {
          double gkk = lr * dp[k] / dist_p;
          entity_embeds_(h, k) -= gkk;
          relation_embeds_(r, k) -= gkk;
          entity_embeds_(tl, k) += gkk;
        }
      }
      if (dist_n > kDistEps) {
        for (std::size_t k = 0; k < d; ++k) {
          double gkk = lr * dn[k] / dist_n;
          entity_embeds_(nh, k) += gkk;
          relation_embeds_(r, k) += gkk;
          entity_embeds_(nt, k) -= gkk;
        }
      }
    }
  };

  for (int epoch = 1; epoch <= cfg_.max_epochs; ++epoch) {
    stats.epochs = epoch;
    // Classic unit-norm projection of entity embeddings.
    for (std::size_t s = 0; s < entity_embeds_.rows; ++s) {
      double n = std::sqrt(dot(entity_embeds_.row(s), entity_embeds_.row(s), d));
      if (n > 0) {
        for (std::size_t k = 0; k < d; ++k) entity_embeds_(s, k) /= n;
      }
    }
    train_triples(kg1_, 0, 0);
    train_triples(kg2_, 1, static_cast<int>(kg1_.relations.size()));
    if (!std::isfinite(entity_embeds_.data[0])) {
      throw std::runtime_error("translational train: non-finite embeddings; "
                               "try a smaller learning_rate");
    }

    if (epoch % cfg_.eval_every == 0) {
      bool stop = stopper.observe(validate_h1(val_pairs));
      if (stopper.improved()) {
        best_e = entity_embeds_;
        best_r = relation_embeds_;
      }
      if (stop && epoch >= cfg_.min_epochs) break;
    }
  }

  entity_embeds_ = std::move(best_e);
  relation_embeds_ = std::move(best_r);
  stats.best_val_h1 = stopper.best();
  (void)n1;
  return stats;
}

SimilarityMatrix TranslationalModel::similarity() const {
  auto e1 = entity_vectors(0);
  auto e2 = entity_vectors(1);
  SimilarityMatrix sm(e1.size(), e2.size(), name());
  for (std::size_t i = 0; i < e1.size(); ++i) {
    for (std::size_t j = 0; j < e2.size(); ++j) {
      sm.at(i, j) = cosine(e1[i], e2[j]);
    }
  }
  return sm;
}

// ---------------------------------------------------------------------------
// NeighborAggModel

NeighborAggModel::NeighborAggModel(const KnowledgeGraph& kg1,
                                   const KnowledgeGraph& kg2, StructuralConfig cfg)
    : kg1_(kg1), kg2_(kg2), cfg_(cfg) {}

void NeighborAggModel::set_initial_vectors(std::vector<std::vector<double>> init1,
                                           std::vector<std::vector<double>> init2) {
  init1_ = std::move(init1);
  init2_ = std::move(init2);
}

const std::vector<int>& NeighborAggModel::neighbors(int gid) const {
  // Adjacency is stored per graph with local ids; translation to global ids
  // happens in the forward/backward loops via the side offset.
  int n1 = kg1_.num_entities();
  return gid < n1 ? kg1_.adjacency[gid] : kg2_.adjacency[gid - n1];
}

void NeighborAggModel::init(const PairList& tied_pairs, std::uint64_t seed) {
  const int n1 = kg1_.num_entities();
  const int total = total_entities();
  const std::size_t d = cfg_.embed_dim;
  slot_ = build_slots(total, n1, tied_pairs);
  auto sizes = slot_sizes(slot_);
  int slots = static_cast<int>(sizes.size());

  base_embeds_ = Matrix(slots, d);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> small(-0.01, 0.01);
  std::vector<char> filled(slots, 0);
  for (int v = 0; v < total; ++v) {
    int s = slot_[v];
    if (filled[s]) continue;
    filled[s] = 1;
    double* row = base_embeds_.row(s);
    if (sizes[s] > 1) {
      // Tied (seed) slots get a distinguishable unit vector so that seed
      // identity propagates through aggregation from the first epoch.
      std::mt19937_64 beacon_rng(seed ^ (0xBEAC000000000000ULL + static_cast<std::uint64_t>(s)));
      std::normal_distribution<double> gauss(0.0, 1.0);
      double n = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        row[k] = gauss(beacon_rng);
        n += row[k] * row[k];
      }
      n = std::sqrt(n);
      for (std::size_t k = 0; k < d; ++k) row[k] /= n;
    } else if (init1_ && init2_) {
      const auto& vec = v < n1 ? (*init1_)[v] : (*init2_)[v - n1];
      if (vec.size() == d) {
        std::copy(vec.begin(), vec.end(), row);
      } else {
        for (std::size_t k = 0; k < d; ++k) row[k] = small(rng);
      }
    } else {
      for (std::size_t k = 0; k < d; ++k) row[k] = small(rng);
    }
  }

  layer_weights_.assign(cfg_.layers, Matrix(d, d));
  for (auto& W : layer_weights_) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        W(i, j) = (i == j ? 1.0 : 0.0) + small(rng);
      }
    }
  }
}

void NeighborAggModel::forward_layers(std::vector<Matrix>& acts,
                                      const std::vector<Matrix>* masks) const {
  const int total = total_entities();
  const int n1 = kg1_.num_entities();
  const std::size_t d = cfg_.embed_dim;
  acts.assign(cfg_.layers + 1, Matrix());
  acts[0] = Matrix(total, d);
  for (int v = 0; v < total; ++v) {
    const double* row = base_embeds_.row(slot_[v]);
    std::copy(row, row + d, acts[0].row(v));
  }

  std::vector<double> agg(d), z(d);
  for (int l = 0; l < cfg_.layers; ++l) {
    const Matrix& h = acts[l];
    Matrix next(total, d);
    const Matrix& W = layer_weights_[l];
    for (int v = 0; v < total; ++v) {
      const auto& nbrs = neighbors(v);
      int offset = v < n1 ? 0 : n1;
      std::copy(h.row(v), h.row(v) + d, agg.begin());
      for (int u : nbrs) {
        const double* hu = h.row(u + offset);
        for (std::size_t k = 0; k < d; ++k) agg[k] += hu[k];
      }
      double inv = 1.0 / (1.0 + static_cast<double>(nbrs.size()));
      for (std::size_t k = 0; k < d; ++k) agg[k] *= inv;
      if (masks) {
        double keep = 1.0 - cfg_.dropout;
        for (std::size_t k = 0; k < d; ++k) agg[k] *= (*masks)[l](v, k) / keep;
      }
      for (std::size_t r = 0; r < d; ++r) {
        z[r] = dot(W.row(r), agg.data(), d);
      }
      double* out = next.row(v);
      for (std::size_t k = 0; k < d; ++k) out[k] = std::tanh(z[k]);
    }
    acts[l + 1] = std::move(next);
  }
}

Matrix NeighborAggModel::forward() const {
  std::vector<Matrix> acts;
  forward_layers(acts, nullptr);
  return std::move(acts.back());
}

double NeighborAggModel::loss_and_gradient(const PairList& positives,
                                           const PairList& negatives,
                                           std::vector<Matrix>& grad_layers,
                                           Matrix& grad_base,
                                           const std::vector<Matrix>* masks) const {
  const int total = total_entities();
  const int n1 = kg1_.num_entities();
  const std::size_t d = cfg_.embed_dim;

  std::vector<Matrix> acts;
  forward_layers(acts, masks);
  const Matrix& final_h = acts.back();

  Matrix G(total, d);
  double loss = 0.0;
  auto accumulate_pair = [&](int e1, int e2, bool positive) {
    int a = e1, b = n1 + e2;
    double dist = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      double x = final_h(a, k) - final_h(b, k);
      dist += x * x;
    }
    dist = std::sqrt(dist);
    double coef;
    if (positive) {
      loss += (1.0 - cfg_.alpha) * dist;
      coef = (1.0 - cfg_.alpha);
    } else {
      double hinge = cfg_.margin - dist;
      if (hinge <= 0.0) return;
      loss += cfg_.alpha * hinge;
      coef = -cfg_.alpha;
    }
    if (dist <= kDistEps) return;
    double s = coef / dist;
    for (std::size_t k = 0; k < d; ++k) {
      double x = final_h(a, k) - final_h(b, k);
      G(a, k) += s * x;
      G(b, k) -= s * x;
    }
  };
  for (const auto& [e1, e2] : positives) accumulate_pair(e1, e2, true);
  for (const auto& [e1, e2] : negatives) accumulate_pair(e1, e2, false);

  grad_layers.assign(cfg_.layers, Matrix(d, d));
  grad_base = Matrix(base_embeds_.rows, d);

  std::vector<double> agg(d), dz(d), dagg(d);
  for (int l = cfg_.layers - 1; l >= 0; --l) {
    const Matrix& h = acts[l];
    const Matrix& hn = acts[l + 1];
    const Matrix& W = layer_weights_[l];
    Matrix Gprev(total, d);
    for (int v = 0; v < total; ++v) {
      bool all_zero = true;
      for (std::size_t k = 0; k < d; ++k) {
        dz[k] = G(v, k) * (1.0 - hn(v, k) * hn(v, k));
        if (dz[k] != 0.0) all_zero = false;
      }
      if (all_zero) continue;

      const auto& nbrs = neighbors(v);
      int offset = v < n1 ? 0 : n1;
      std::copy(h.row(v), h.row(v) + d, agg.begin());
      for (int u : nbrs) {
        const double* hu = h.row(u + offset);
        for (std::size_t k = 0; k < d; ++k) agg[k] += hu[k];
      }
      double inv = 1.0 / (1.0 + static_cast<double>(nbrs.size()));
      for (std::size_t k = 0; k < d; ++k) agg[k] *= inv;
      if (masks) {
        double keep = 1.0 - cfg_.dropout;
        for (std::size_t k = 0; k < d; ++k) agg[k] *= (*masks)[l](v, k) / keep;
      }

      Matrix& gW = grad_layers[l];
      for (std::size_t r = 0; r < d; ++r) {
        if (dz[r] == 0.0) continue;
        double* grow = gW.row(r);
        for (std::size_t c = 0; c < d; ++c) grow[c] += dz[r] * agg[c];
      }
      for (std::size_t c = 0; c < d; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < d; ++r) s += W(r, c) * dz[r];
        dagg[c] = s;
      }
      if (masks) {
        double keep = 1.0 - cfg_.dropout;
        for (std::size_t k = 0; k < d; ++k) dagg[k] *= (*masks)[l](v, k) / keep;
      }
      for (std::size_t k = 0; k < d; ++k) Gprev(v, k) += inv * dagg[k];
      for (int u : nbrs) {
        double* gp = Gprev.row(u + offset);
        for (std::size_t k = 0; k < d; ++k) gp[k] += inv * dagg[k];
      }
    }
    G = std::move(Gprev);
  }

  for (int v = 0; v < total; ++v) {
    double* gb = grad_base.row(slot_[v]);
    const double* gv = G.row(v);
    for (std::size_t k = 0; k < d; ++k) gb[k] += gv[k];
  }
  return loss;
}

double NeighborAggModel::validate_h1(const PairList& val_pairs) const {
  if (val_pairs.empty()) return 0.0;
  Matrix h = forward();
  const int n1 = kg1_.num_entities();
  const int n2 = kg2_.num_entities();
  const std::size_t d = cfg_.embed_dim;
  std::vector<double> scores(n2);
  std::size_t hits = 0;
  for (const auto& [a, gold] : val_pairs) {
    std::vector<double> va(h.row(a), h.row(a) + d);
    for (int j = 0; j < n2; ++j) {
      std::vector<double> vj(h.row(n1 + j), h.row(n1 + j) + d);
      scores[j] = cosine(va, vj);
    }
    hits += ranked_first(scores, gold);
  }
  return static_cast<double>(hits) / static_cast<double>(val_pairs.size());
}

TrainStats NeighborAggModel::train(const PairList& train_pairs,
                                   const PairList& val_pairs,
                                   std::uint64_t rng_seed) {
  if (train_pairs.empty() || val_pairs.empty()) {
    throw argument_error("neighbor-agg train: empty train or val set");
  }
  init(train_pairs, rng_seed);
  std::mt19937_64 rng(rng_seed ^ 0x616767ULL);
  const int n1 = kg1_.num_entities();
  const int n2 = kg2_.num_entities();
  const std::size_t d = cfg_.embed_dim;

  std::vector<Matrix> best_w = layer_weights_;
  Matrix best_b = base_embeds_;
  EarlyStopper stopper(cfg_.patience);
  stopper.seed_best(validate_h1(val_pairs));
  TrainStats stats;

  std::vector<Matrix> gW;
  Matrix gB;
  for (int epoch = 1; epoch <= cfg_.max_epochs; ++epoch) {
    stats.epochs = epoch;
    Matrix h = forward();
    std::vector<std::vector<double>> e1(n1), e2(n2);
    for (int v = 0; v < n1; ++v) e1[v].assign(h.row(v), h.row(v) + d);
    for (int v = 0; v < n2; ++v) e2[v].assign(h.row(n1 + v), h.row(n1 + v) + d);
    auto negatives = sample_negatives(train_pairs, e1, e2,
                                      cfg_.negatives_per_positive,
                                      cfg_.truncation_fraction, rng());

    std::vector<Matrix> masks;
    const std::vector<Matrix>* masks_ptr = nullptr;
    if (cfg_.dropout > 0.0) {
      std::bernoulli_distribution keep(1.0 - cfg_.dropout);
      masks.assign(cfg_.layers, Matrix(total_entities(), d));
      for (auto& m : masks) {
        for (double& x : m.data) x = keep(rng) ? 1.0 : 0.0;
      }
      masks_ptr = &masks;
    }

    double loss = loss_and_gradient(train_pairs, negatives, gW, gB, masks_ptr);
    if (!std::isfinite(loss)) {
      throw std::runtime_error("neighbor-agg train: non-finite loss at epoch " +
                               std::to_string(epoch) +
                               "; try a smaller learning_rate");
    }
    for (int l = 0; l < cfg_.layers; ++l) {
      for (std::size_t i = 0; i < gW[l].data.size(); ++i) {
        layer_weights_[l].data[i] -= cfg_.learning_rate * gW[l].data[i];
      }
    }
    for (std::size_t i = 0; i < gB.data.size(); ++i) {
      base_embeds_.data[i] -= cfg_.learning_rate * gB.data[i];
    }

    if (epoch % cfg_.eval_every == 0) {
      bool stop = stopper.observe(validate_h1(val_pairs));
      if (stopper.improved()) {
        best_w = layer_weights_;
        best_b = base_embeds_;
      }
      if (stop && epoch >= cfg_.min_epochs) break;
    }
  }

  layer_weights_ = std::move(best_w);
  base_embeds_ = std::move(best_b);
  stats.best_val_h1 = stopper.best();
  return stats;
}

SimilarityMatrix NeighborAggModel::similarity() const {
  Matrix h = forward();
  const int n1 = kg1_.num_entities();
  const int n2 = kg2_.num_entities();
  const std::size_t d = cfg_.embed_dim;
  SimilarityMatrix sm(n1, n2, name());
  std::vector<double> norm1(n1), norm2(n2);
  for (int i = 0; i < n1; ++i) norm1[i] = std::sqrt(dot(h.row(i), h.row(i), d));
  for (int j = 0; j < n2; ++j) {
    norm2[j] = std::sqrt(dot(h.row(n1 + j), h.row(n1 + j), d));
  }
  parallel_for(n1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (int j = 0; j < n2; ++j) {
        if (norm1[i] == 0.0 || norm2[j] == 0.0) {
          sm.at(i, j) = 0.0;
        } else {
          sm.at(i, j) = dot(h.row(i), h.row(n1 + j), d) / (norm1[i] * norm2[j]);
        }
      }
    }
  });
  return sm;
}

// ---------------------------------------------------------------------------

std::unique_ptr<AlignmentComponent> make_structural_model(
    const KnowledgeGraph& kg1, const KnowledgeGraph& kg2,
    const StructuralConfig& cfg, std::vector<std::vector<double>> init1,
    std::vector<std::vector<double>> init2) {
  switch (cfg.variant) {
    case StructuralVariant::translational: {
      auto m = std::make_unique<TranslationalModel>(kg1, kg2, cfg);
      if (!init1.empty()) m->set_initial_vectors(std::move(init1), std::move(init2));
      return m;
    }
    case StructuralVariant::neighbor_agg: {
      auto m = std::make_unique<NeighborAggModel>(kg1, kg2, cfg);
      if (!init1.empty()) m->set_initial_vectors(std::move(init1), std::move(init2));
      return m;
    }
    case StructuralVariant::external: {
      SimilarityMatrix sm = import_similarity(cfg.external_path);
      if (sm.rows() != static_cast<std::size_t>(kg1.num_entities()) ||
          sm.cols() != static_cast<std::size_t>(kg2.num_entities())) {
        throw argument_error("external similarity matrix dimensions do not match the dataset");
      }
      return std::make_unique<ExternalMatrixModel>(std::move(sm));
    }
  }
  throw argument_error("unknown structural variant");
}

}  // namespace kgalign
