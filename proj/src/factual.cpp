#include "kgalign/factual.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <random>
#include <unordered_map>

#include "kgalign/early_stop.hpp"
#include "kgalign/errors.hpp"
#include "kgalign/parallel.hpp"
#include "kgalign/sampling.hpp"
#include "kgalign/vecmath.hpp"

namespace kgalign {

namespace {
constexpr double kDistEps = 1e-12;

// Stable softmax over a row written in place.
void softmax_inplace(std::vector<double>& row) {
  double mx = *std::max_element(row.begin(), row.end());
  double sum = 0.0;
  for (double& x : row) {
    x = std::exp(x - mx);
    sum += x;
  }
  for (double& x : row) x /= sum;
}
}  // namespace

std::vector<double> attention_weights(const KnowledgeGraph& kg, int entity,
                                      const Matrix& attr_embeds) {
  const auto& triple_ids = kg.entity_attr_triples[entity];
  if (triple_ids.empty()) return {};

  const std::size_t n = attr_embeds.rows;
  const std::size_t d = attr_embeds.cols;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));

  std::vector<double> weights;
  weights.reserve(triple_ids.size());
  std::vector<double> row(n);
  double total = 0.0;
  for (int tid : triple_ids) {
    int type = kg.attribute_triples[tid][1];
    for (std::size_t k = 0; k < n; ++k) {
      row[k] = dot(attr_embeds.row(type), attr_embeds.row(k), d) * scale;
    }
    softmax_inplace(row);
    weights.push_back(row[type]);
    total += row[type];
  }
  for (double& w : weights) w /= total;
  return weights;
}

std::vector<double> entity_embedding(const KnowledgeGraph& kg, int entity,
                                     const std::vector<double>& weights,
                                     const std::vector<std::vector<double>>& value_embeds,
                                     std::size_t dim) {
  const auto& triple_ids = kg.entity_attr_triples[entity];
  if (weights.size() != triple_ids.size()) {
    throw std::logic_error("entity_embedding: weight list does not match triples");
  }
  std::vector<double> e(dim, 0.0);
  for (std::size_t i = 0; i < triple_ids.size(); ++i) {
    int lit = kg.attribute_triples[triple_ids[i]][2];
    const auto& u = value_embeds[lit];
    for (std::size_t k = 0; k < dim; ++k) e[k] += weights[i] * u[k];
  }
  return e;
}

double contrastive_loss(std::span<const double> positive_distances,
                        std::span<const double> negative_distances,
                        const FactualConfig& cfg) {
  double pos = 0.0, neg = 0.0;
  for (double d : positive_distances) pos += d;
  for (double d : negative_distances) neg += std::max(0.0, cfg.lambda_margin - d);
  return (1.0 - cfg.alpha) * pos + cfg.alpha * neg;
}

FactualModel::FactualModel(const KnowledgeGraph& kg1, const KnowledgeGraph& kg2,
                           const VectorTable* vectors, FactualConfig cfg)
    : kg1_(kg1), kg2_(kg2), vectors_(vectors), cfg_(cfg) {
  params_.dim = cfg_.dim;
  auto encode_all = [&](const std::vector<std::string>& texts) {
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(encode(t, vectors_, cfg_.dim));
    return out;
  };
  params_.value_embeds1 = encode_all(kg1_.literals);
  params_.value_embeds2 = encode_all(kg2_.literals);

  auto encode_attrs = [&](const std::vector<std::string>& attrs) {
    Matrix m(attrs.size(), cfg_.dim);
    for (std::size_t i = 0; i < attrs.size(); ++i) {
      auto v = encode(attrs[i], vectors_, cfg_.dim);
      std::copy(v.begin(), v.end(), m.row(i));
    }
    return m;
  };
  init_attr1_ = encode_attrs(kg1_.attributes);
  init_attr2_ = encode_attrs(kg2_.attributes);
  init_params();
}

void FactualModel::init_params() {
  params_.attr_embeds1 = init_attr1_;
  params_.attr_embeds2 = init_attr2_;
}

std::vector<double> FactualModel::embed_entity(int side, int entity) const {
  auto w = attention_weights(kg(side), entity, attr_embeds(side));
  if (w.empty()) return std::vector<double>(params_.dim, 0.0);
  return entity_embedding(kg(side), entity, w, value_embeds(side), params_.dim);
}

std::vector<std::vector<double>> FactualModel::embed_all(int side) const {
  std::vector<std::vector<double>> out;
  int n = kg(side).num_entities();
  out.reserve(n);
  for (int e = 0; e < n; ++e) out.push_back(embed_entity(side, e));
  return out;
}

std::size_t FactualModel::zero_evidence_count(int side) const {
  std::size_t c = 0;
  for (const auto& t : kg(side).entity_attr_triples) c += t.empty();
  return c;
}

void FactualModel::backprop_entity(int side, int entity,
                                   const std::vector<double>& grad_out,
                                   Matrix& grad) const {
  const KnowledgeGraph& g = kg(side);
  const Matrix& A = attr_embeds(side);
  const auto& triple_ids = g.entity_attr_triples[entity];
  const std::size_t m = triple_ids.size();
  if (m == 0) return;
  const std::size_t n = A.rows;
  const std::size_t d = A.cols;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));

  // Forward recomputation: softmax rows, diagonal readout p, renormalization.
  std::vector<std::vector<double>> W(m, std::vector<double>(n));
  std::vector<int> types(m);
  std::vector<double> p(m);
  double P = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    types[i] = g.attribute_triples[triple_ids[i]][1];
    for (std::size_t k = 0; k < n; ++k) {
      W[i][k] = dot(A.row(types[i]), A.row(k), d) * scale;
    }
    softmax_inplace(W[i]);
    p[i] = W[i][types[i]];
    P += p[i];
  }

  // dL/dw_i through the embedding sum, then through the renormalization.
  const auto& values = value_embeds(side);
  std::vector<double> c(m), w(m);
  double dot_wc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    int lit = g.attribute_triples[triple_ids[i]][2];
    c[i] = dot(grad_out.data(), values[lit].data(), d);
    w[i] = p[i] / P;
    dot_wc += w[i] * c[i];
  }

  // Through the softmax diagonal readout into the logits, then into the
  // attribute-type rows (logit s_ik = A[t_i] . A[k] / sqrt(d)).
  for (std::size_t i = 0; i < m; ++i) {
    double b = (c[i] - dot_wc) / P;
    for (std::size_t k = 0; k < n; ++k) {
      double gs = b * p[i] * ((k == static_cast<std::size_t>(types[i]) ? 1.0 : 0.0) - W[i][k]);
      if (gs == 0.0) continue;
      double* gt = grad.row(types[i]);
      double* gk = grad.row(k);
      const double* at = A.row(types[i]);
      const double* ak = A.row(k);
      double gsc = gs * scale;
      for (std::size_t x = 0; x < d; ++x) {
        gt[x] += gsc * ak[x];
        gk[x] += gsc * at[x];
      }
    }
  }
}

double FactualModel::loss_and_gradient(const PairList& positives,
                                       const PairList& negatives, Matrix& grad1,
                                       Matrix& grad2) const {
  grad1 = Matrix(params_.attr_embeds1.rows, params_.dim);
  grad2 = Matrix(params_.attr_embeds2.rows, params_.dim);

  std::unordered_map<int, std::vector<double>> cache1, cache2;
  auto embed_cached = [&](int side, int e) -> const std::vector<double>& {
    auto& cache = side == 0 ? cache1 : cache2;
    auto it = cache.find(e);
    if (it == cache.end()) it = cache.emplace(e, embed_entity(side, e)).first;
    return it->second;
  };

  std::unordered_map<int, std::vector<double>> gout1, gout2;
  auto add_grad = [&](int side, int e, const std::vector<double>& diff, double coef,
                      double dist) {
    if (dist <= kDistEps) return;
    auto& gout = side == 0 ? gout1 : gout2;
    auto it = gout.find(e);
    if (it == gout.end()) {
      it = gout.emplace(e, std::vector<double>(params_.dim, 0.0)).first;
    }
    double s = coef / dist;
    for (std::size_t k = 0; k < params_.dim; ++k) it->second[k] += s * diff[k];
  };

  double loss = 0.0;
  std::vector<double> diff(params_.dim);
  auto pair_distance = [&](int e1, int e2) {
    const auto& a = embed_cached(0, e1);
    const auto& b = embed_cached(1, e2);
    double s = 0.0;
    for (std::size_t k = 0; k < params_.dim; ++k) {
      diff[k] = a[k] - b[k];
      s += diff[k] * diff[k];
    }
    return std::sqrt(s);
  };

  for (const auto& [e1, e2] : positives) {
    double dist = pair_distance(e1, e2);
    loss += (1.0 - cfg_.alpha) * dist;
    add_grad(0, e1, diff, (1.0 - cfg_.alpha), dist);
    for (double& x : diff) x = -x;
    add_grad(1, e2, diff, (1.0 - cfg_.alpha), dist);
  }
  for (const auto& [e1, e2] : negatives) {
    double dist = pair_distance(e1, e2);
    double hinge = cfg_.lambda_margin - dist;
    if (hinge <= 0.0) continue;
    loss += cfg_.alpha * hinge;
    add_grad(0, e1, diff, -cfg_.alpha, dist);
    for (double& x : diff) x = -x;
    add_grad(1, e2, diff, -cfg_.alpha, dist);
  }

  for (const auto& [e, g] : gout1) backprop_entity(0, e, g, grad1);
  for (const auto& [e, g] : gout2) backprop_entity(1, e, g, grad2);
  return loss;
}

double FactualModel::validate_h1(const PairList& val_pairs) const {
  if (val_pairs.empty()) return 0.0;
  auto embeds2 = embed_all(1);
  std::size_t hits = 0;
  for (const auto& [e1, gold] : val_pairs) {
    auto v = embed_entity(0, e1);
    double gold_d = euclidean(v, embeds2[gold]);
    bool hit = true;
    for (int j = 0; j < static_cast<int>(embeds2.size()); ++j) {
      if (j == gold) continue;
      double dj = euclidean(v, embeds2[j]);
      if (dj < gold_d || (dj == gold_d && j < gold)) {
        hit = false;
        break;
      }
    }
    hits += hit;
  }
  return static_cast<double>(hits) / static_cast<double>(val_pairs.size());
}

TrainStats FactualModel::train(const PairList& train_pairs, const PairList& val_pairs,
                               std::uint64_t rng_seed) {
  if (train_pairs.empty() || val_pairs.empty()) {
    throw argument_error("factual train: empty train or val set");
  }
  init_params();

  FactualParams best = params_;
  EarlyStopper stopper(cfg_.patience);
  stopper.seed_best(validate_h1(val_pairs));
  std::mt19937_64 rng(rng_seed);
  Matrix g1, g2;
  TrainStats stats;

  for (int epoch = 1; epoch <= cfg_.max_epochs; ++epoch) {
    stats.epochs = epoch;

    auto embeds1 = embed_all(0);
    auto embeds2 = embed_all(1);
    auto negatives = sample_negatives(train_pairs, embeds1, embeds2,
                                      cfg_.negatives_per_positive,
                                      cfg_.truncation_fraction, rng());

    std::vector<std::size_t> order(train_pairs.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg_.batch_size)) {
      std::size_t end = std::min(order.size(), start + cfg_.batch_size);
      PairList batch_pos, batch_neg;
      for (std::size_t i = start; i < end; ++i) {
        std::size_t p = order[i];
        batch_pos.push_back(train_pairs[p]);
        for (int k = 0; k < cfg_.negatives_per_positive; ++k) {
          batch_neg.push_back(negatives[p * cfg_.negatives_per_positive + k]);
        }
      }
      double loss = loss_and_gradient(batch_pos, batch_neg, g1, g2);
      if (!std::isfinite(loss)) {
        throw std::runtime_error(
            "factual train: non-finite loss at epoch " + std::to_string(epoch) +
            "; try a smaller learning_rate");
      }
      for (std::size_t i = 0; i < g1.data.size(); ++i) {
        params_.attr_embeds1.data[i] -= cfg_.learning_rate * g1.data[i];
      }
      for (std::size_t i = 0; i < g2.data.size(); ++i) {
        params_.attr_embeds2.data[i] -= cfg_.learning_rate * g2.data[i];
      }
    }

    if (epoch % cfg_.eval_every == 0) {
      bool stop = stopper.observe(validate_h1(val_pairs));
      if (stopper.improved()) best = params_;
      if (stop && epoch >= cfg_.min_epochs) break;
    }
  }

  params_ = std::move(best);
  stats.best_val_h1 = stopper.best();
  return stats;
}

SimilarityMatrix FactualModel::similarity() const {
  auto embeds1 = embed_all(0);
  auto embeds2 = embed_all(1);
  SimilarityMatrix sm(embeds1.size(), embeds2.size(), "factual");
  parallel_for(embeds1.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < embeds2.size(); ++j) {
        sm.at(i, j) = -euclidean(embeds1[i], embeds2[j]);
      }
    }
  });
  return sm;
}

void FactualModel::save_checkpoint(const std::filesystem::path& file) const {
  std::ofstream out(file);
  out << "kgalign-factual-ckpt 1\n";
  out << params_.dim << ' ' << params_.attr_embeds1.rows << ' '
      << params_.attr_embeds2.rows << ' ' << params_.value_embeds1.size() << ' '
      << params_.value_embeds2.size() << '\n';
  // Doubles are stored as hex bit patterns so the round trip is bit-exact.
  out << std::hex;
  auto dump_value = [&](double x) { out << std::bit_cast<std::uint64_t>(x); };
  auto dump_matrix = [&](const Matrix& m) {
    for (std::size_t i = 0; i < m.rows; ++i) {
      for (std::size_t j = 0; j < m.cols; ++j) {
        if (j) out << ' ';
        dump_value(m(i, j));
      }
      out << '\n';
    }
  };
  auto dump_vecs = [&](const std::vector<std::vector<double>>& vs) {
    for (const auto& v : vs) {
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (j) out << ' ';
        dump_value(v[j]);
      }
      out << '\n';
    }
  };
  dump_matrix(params_.attr_embeds1);
  dump_matrix(params_.attr_embeds2);
  dump_vecs(params_.value_embeds1);
  dump_vecs(params_.value_embeds2);
}

void FactualModel::load_checkpoint(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw parse_error("cannot open checkpoint: " + file.string());
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "kgalign-factual-ckpt" || version != 1) {
    throw parse_error("unrecognized checkpoint header in " + file.string());
  }
  std::size_t dim, n1, n2, l1, l2;
  if (!(in >> dim >> n1 >> n2 >> l1 >> l2)) {
    throw parse_error("truncated checkpoint header in " + file.string());
  }
  if (n1 != params_.attr_embeds1.rows || n2 != params_.attr_embeds2.rows) {
    throw parse_error("checkpoint shape does not match the loaded dataset");
  }
  in >> std::hex;
  auto read_val = [&]() {
    std::uint64_t bits;
    if (!(in >> bits)) throw parse_error("truncated checkpoint: " + file.string());
    return std::bit_cast<double>(bits);
  };
  params_.dim = dim;
  params_.attr_embeds1 = Matrix(n1, dim);
  params_.attr_embeds2 = Matrix(n2, dim);
  for (double& x : params_.attr_embeds1.data) x = read_val();
  for (double& x : params_.attr_embeds2.data) x = read_val();
  params_.value_embeds1.assign(l1, std::vector<double>(dim));
  params_.value_embeds2.assign(l2, std::vector<double>(dim));
  for (auto& v : params_.value_embeds1)
    for (double& x : v) x = read_val();
  for (auto& v : params_.value_embeds2)
    for (double& x : v) x = read_val();
}

}  // namespace kgalign
