#include <doctest.h>

#include <cmath>
#include <random>

#include "kgalign/early_stop.hpp"
#include "kgalign/errors.hpp"
#include "kgalign/factual.hpp"
#include "kgalign/sampling.hpp"
#include "kgalign/vecmath.hpp"

#include "helpers.hpp"

using namespace kgalign;
using kgtest::TempDir;
using kgtest::make_kg;

namespace {

// A random KG with n_ent entities, each holding 1..3 attribute triples drawn
// from n_attr types with random literals.
KnowledgeGraph random_attr_kg(int n_ent, int n_attr, std::mt19937_64& rng,
                              const std::string& tag) {
  std::vector<std::array<std::string, 3>> attrs;
  for (int e = 0; e < n_ent; ++e) {
    int m = 1 + static_cast<int>(rng() % 3);
    for (int t = 0; t < m; ++t) {
      attrs.push_back({"e" + std::to_string(e) + tag,
                       "attr" + std::to_string(rng() % n_attr) + tag,
                       "lit-" + tag + std::to_string(rng() % 1000)});
    }
  }
  return make_kg({}, attrs);
}

FactualConfig small_config(std::size_t dim = 8) {
  FactualConfig cfg;
  cfg.dim = dim;
  return cfg;
}

}  // namespace

TEST_CASE("attention_weights: single attribute renormalizes to 1") {
  KnowledgeGraph kg = make_kg({}, {{"e", "name", "x"}});
  Matrix attr(1, 8);
  attr(0, 0) = 1.0;
  auto w = attention_weights(kg, 0, attr);
  REQUIRE(w.size() == 1);
  CHECK(w[0] == doctest::Approx(1.0));
}

TEST_CASE("attention_weights: hand softmax with two attribute types") {
  // d=4, rows k1=[1,0,0,0], k2=[0,1,0,0]. For the triple of type 1 the row
  // logits are (0.5, 0), softmax -> (0.6225, 0.3775); diagonal readout 0.6225.
  KnowledgeGraph kg = make_kg({}, {{"e", "A", "x"}, {"e", "B", "y"}});
  Matrix attr(2, 4);
  attr(0, 0) = 1.0;
  attr(1, 1) = 1.0;
  auto w = attention_weights(kg, 0, attr);
  REQUIRE(w.size() == 2);
  double p = std::exp(0.5) / (std::exp(0.5) + 1.0);  // 0.6225...
  CHECK(p == doctest::Approx(0.62245933).epsilon(1e-6));
  // Both diagonals equal p by symmetry, so renormalization gives 0.5 / 0.5.
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[1] == doctest::Approx(0.5));

  // Asymmetric keys: verify the raw softmax diagonal against an independent
  // scalar computation before renormalization.
  Matrix attr2(2, 4);
  attr2(0, 0) = 1.0;
  attr2(1, 0) = 0.5;
  attr2(1, 1) = 1.0;
  auto w2 = attention_weights(kg, 0, attr2);
  auto softmax_diag = [&](int type) {
    double s0 = dot(attr2.row(type), attr2.row(0), 4) / 2.0;
    double s1 = dot(attr2.row(type), attr2.row(1), 4) / 2.0;
    double m = std::max(s0, s1);
    double e0 = std::exp(s0 - m), e1 = std::exp(s1 - m);
    return (type == 0 ? e0 : e1) / (e0 + e1);
  };
  double p0 = softmax_diag(0), p1 = softmax_diag(1);
  CHECK(w2[0] == doctest::Approx(p0 / (p0 + p1)).epsilon(1e-12));
  CHECK(w2[1] == doctest::Approx(p1 / (p0 + p1)).epsilon(1e-12));
}

TEST_CASE("attention_weights: duplicate attribute types split evenly") {
  KnowledgeGraph kg = make_kg({}, {{"e", "A", "x"}, {"e", "A", "y"}});
  Matrix attr(1, 8);
  attr(0, 2) = 1.0;
  auto w = attention_weights(kg, 0, attr);
  REQUIRE(w.size() == 2);
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[1] == doctest::Approx(0.5));
}

TEST_CASE("attention_weights: zero-evidence entity signals empty") {
  KnowledgeGraph kg = make_kg({{"e", "r", "f"}});
  Matrix attr(1, 8);
  CHECK(attention_weights(kg, 0, attr).empty());
}

TEST_CASE("attention weights sum to 1 and stay finite under scaling") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    KnowledgeGraph kg = random_attr_kg(4, 3, rng, "s");
    Matrix attr(kg.attributes.size(), 8);
    std::normal_distribution<double> g(0.0, 1.0);
    for (double& x : attr.data) x = g(rng);
    for (double scale : {1.0, 10.0, 100.0}) {
      Matrix scaled = attr;
      for (double& x : scaled.data) x *= scale;
      for (int e = 0; e < kg.num_entities(); ++e) {
        auto w = attention_weights(kg, e, scaled);
        double sum = 0.0;
        for (double x : w) {
          REQUIRE(std::isfinite(x));
          CHECK(x >= 0.0);
          sum += x;
        }
        if (!w.empty()) CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("entity_embedding: weighted sums and convex-hull norm bound") {
  KnowledgeGraph kg = make_kg({}, {{"e", "A", "x"}, {"e", "B", "y"}});
  std::vector<std::vector<double>> values = {{1, 0, 0, 0}, {0, 1, 0, 0}};
  auto e1 = entity_embedding(kg, 0, {1.0, 0.0}, values, 4);
  CHECK(e1 == values[0]);
  auto e2 = entity_embedding(kg, 0, {0.5, 0.5}, values, 4);
  CHECK(e2 == std::vector<double>{0.5, 0.5, 0, 0});
  CHECK(norm2(e2) <= 1.0 + 1e-12);  // within the scaled span of unit values
  CHECK_THROWS_AS(entity_embedding(kg, 0, {1.0}, values, 4), std::logic_error);
}

TEST_CASE("contrastive_loss: plugged constants") {
  FactualConfig cfg;  // alpha 0.8, lambda 3
  double pos0[] = {0.0};
  CHECK(contrastive_loss(pos0, {}, cfg) == doctest::Approx(0.0));
  double neg0[] = {0.0};
  CHECK(contrastive_loss({}, neg0, cfg) == doctest::Approx(2.4));
  double negfar[] = {5.0};
  CHECK(contrastive_loss({}, negfar, cfg) == doctest::Approx(0.0));
  double pos[] = {1.0, 2.0};
  double neg[] = {1.0};
  CHECK(contrastive_loss(pos, neg, cfg) ==
        doctest::Approx(0.2 * 3.0 + 0.8 * 2.0));
}

TEST_CASE("sample_negatives: counts, exclusion, determinism") {
  std::mt19937_64 rng(1);
  int n = 30;
  std::vector<std::vector<double>> e1(n), e2(n);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    e1[i] = {g(rng), g(rng)};
    e2[i] = {g(rng), g(rng)};
  }
  PairList positives;
  for (int i = 0; i < 10; ++i) positives.emplace_back(i, i);

  auto negs = sample_negatives(positives, e1, e2, 2, 0.1, 99);
  CHECK(negs.size() == 20);
  for (std::size_t i = 0; i < negs.size(); ++i) {
    const auto& pos = positives[i / 2];
    CHECK(negs[i] != pos);  // never the gold pair itself
  }
  auto negs2 = sample_negatives(positives, e1, e2, 2, 0.1, 99);
  CHECK(negs == negs2);
  auto negs3 = sample_negatives(positives, e1, e2, 2, 0.1, 100);
  CHECK(negs != negs3);
}

TEST_CASE("factual gradient matches central finite differences") {
  std::mt19937_64 rng(2718);
  int checked = 0;
  for (int trial = 0; trial < 25; ++trial) {
    KnowledgeGraph kg1 = random_attr_kg(2 + static_cast<int>(rng() % 4), 3, rng, "x");
    KnowledgeGraph kg2 = random_attr_kg(2 + static_cast<int>(rng() % 4), 4, rng, "y");
    FactualModel model(kg1, kg2, nullptr, small_config(8));

    // Random positives/negatives over the entity ids.
    PairList pos, neg;
    for (int i = 0; i < 3; ++i) {
      pos.emplace_back(static_cast<int>(rng() % kg1.num_entities()),
                       static_cast<int>(rng() % kg2.num_entities()));
      neg.emplace_back(static_cast<int>(rng() % kg1.num_entities()),
                       static_cast<int>(rng() % kg2.num_entities()));
    }

    Matrix g1, g2;
    model.loss_and_gradient(pos, neg, g1, g2);

    const double h = 1e-5;
    auto check_param = [&](Matrix& param, const Matrix& grad) {
      for (std::size_t i = 0; i < param.data.size(); ++i) {
        double saved = param.data[i];
        param.data[i] = saved + h;
        Matrix t1, t2;
        double lp = model.loss_and_gradient(pos, neg, t1, t2);
        param.data[i] = saved - h;
        double lm = model.loss_and_gradient(pos, neg, t1, t2);
        param.data[i] = saved;
        double fd = (lp - lm) / (2.0 * h);
        double denom = std::max({std::abs(fd), std::abs(grad.data[i]), 1e-6});
        REQUIRE(std::abs(fd - grad.data[i]) / denom < 1e-4);
        ++checked;
      }
    };
    check_param(model.params().attr_embeds1, g1);
    check_param(model.params().attr_embeds2, g2);
  }
  CHECK(checked > 0);
}

TEST_CASE("training loss decreases on the first step for small learning rates") {
  std::mt19937_64 rng(4242);
  KnowledgeGraph kg1 = random_attr_kg(5, 3, rng, "p");
  KnowledgeGraph kg2 = random_attr_kg(5, 3, rng, "q");
  FactualModel model(kg1, kg2, nullptr, small_config(16));
  PairList pos = {{0, 0}, {1, 1}, {2, 2}};
  PairList neg = {{0, 3}, {1, 4}, {3, 0}};
  Matrix g1, g2;
  double before = model.loss_and_gradient(pos, neg, g1, g2);
  double lr = 1e-4;
  for (std::size_t i = 0; i < g1.data.size(); ++i) {
    model.params().attr_embeds1.data[i] -= lr * g1.data[i];
  }
  for (std::size_t i = 0; i < g2.data.size(); ++i) {
    model.params().attr_embeds2.data[i] -= lr * g2.data[i];
  }
  Matrix t1, t2;
  double after = model.loss_and_gradient(pos, neg, t1, t2);
  CHECK(after <= before + 1e-12);
}

TEST_CASE("factual training: separable fixture reaches val H@1 = 1 quickly") {
  // Matched entities share a unique literal, so distances vanish at the gold
  // pair before any training; H@1 must be 1.0 well within 50 epochs.
  std::vector<std::array<std::string, 3>> attrs1, attrs2;
  for (int i = 0; i < 10; ++i) {
    attrs1.push_back({"e" + std::to_string(i) + "/1", "name",
                      "unique-" + std::to_string(i)});
    attrs2.push_back({"e" + std::to_string(i) + "/2", "name",
                      "unique-" + std::to_string(i)});
  }
  KnowledgeGraph kg1 = make_kg({}, attrs1);
  KnowledgeGraph kg2 = make_kg({}, attrs2);
  FactualConfig cfg = small_config(32);
  cfg.max_epochs = 50;
  FactualModel model(kg1, kg2, nullptr, cfg);
  PairList train = {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}};
  PairList val = {{6, 6}, {7, 7}, {8, 8}, {9, 9}};
  TrainStats stats = model.train(train, val, 7);
  CHECK(stats.best_val_h1 == doctest::Approx(1.0));
  CHECK(stats.epochs <= 50);
}

TEST_CASE("factual training: empty train or val rejected; epochs bounded") {
  std::mt19937_64 rng(5);
  KnowledgeGraph kg1 = random_attr_kg(4, 2, rng, "a");
  KnowledgeGraph kg2 = random_attr_kg(4, 2, rng, "b");
  FactualConfig cfg = small_config(8);
  cfg.max_epochs = 12;
  FactualModel model(kg1, kg2, nullptr, cfg);
  CHECK_THROWS_AS(model.train({}, {{0, 0}}, 1), argument_error);
  CHECK_THROWS_AS(model.train({{0, 0}}, {}, 1), argument_error);
  TrainStats stats = model.train({{0, 0}, {1, 1}}, {{2, 2}}, 1);
  CHECK(stats.epochs <= 12);
}

TEST_CASE("factual similarity: negated Euclidean, matches scalar oracle") {
  std::mt19937_64 rng(6);
  KnowledgeGraph kg1 = random_attr_kg(3, 2, rng, "m");
  KnowledgeGraph kg2 = random_attr_kg(3, 2, rng, "n");
  FactualModel model(kg1, kg2, nullptr, small_config(16));
  SimilarityMatrix sm = model.similarity();
  REQUIRE(sm.rows() == 3);
  REQUIRE(sm.cols() == 3);
  for (int i = 0; i < 3; ++i) {
    auto a = model.embed_entity(0, i);
    for (int j = 0; j < 3; ++j) {
      auto b = model.embed_entity(1, j);
      double dist = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        dist += (a[k] - b[k]) * (a[k] - b[k]);
      }
      REQUIRE(sm.at(i, j) == doctest::Approx(-std::sqrt(dist)).epsilon(1e-12));
      CHECK(sm.at(i, j) <= 0.0);
    }
  }
}

TEST_CASE("factual similarity: identical graphs put the maximum on the diagonal") {
  std::vector<std::array<std::string, 3>> attrs;
  for (int i = 0; i < 4; ++i) {
    attrs.push_back({"e" + std::to_string(i), "name", "v" + std::to_string(i)});
  }
  KnowledgeGraph kg1 = make_kg({}, attrs);
  KnowledgeGraph kg2 = make_kg({}, attrs);
  FactualModel model(kg1, kg2, nullptr, small_config(16));
  SimilarityMatrix sm = model.similarity();
  for (int i = 0; i < 4; ++i) CHECK(sm.at(i, i) == doctest::Approx(0.0));
}

TEST_CASE("zero-evidence entities embed as zero and are counted") {
  KnowledgeGraph kg1 = make_kg({{"a", "r", "b"}}, {{"a", "name", "x"}});
  KnowledgeGraph kg2 = make_kg({}, {{"c", "name", "x"}});
  FactualModel model(kg1, kg2, nullptr, small_config(8));
  CHECK(model.zero_evidence_count(0) == 1);  // entity b
  CHECK(model.zero_evidence_count(1) == 0);
  auto v = model.embed_entity(0, kg1.entity_index.at("b"));
  CHECK(norm2(v) == 0.0);
}

TEST_CASE("checkpoint round trip is bit-exact") {
  std::mt19937_64 rng(8);
  KnowledgeGraph kg1 = random_attr_kg(4, 3, rng, "c");
  KnowledgeGraph kg2 = random_attr_kg(4, 3, rng, "d");
  FactualModel model(kg1, kg2, nullptr, small_config(8));
  // Perturb away from the deterministic init so the round trip is nontrivial.
  std::normal_distribution<double> g(0.0, 1.0);
  for (double& x : model.params().attr_embeds1.data) x += 1e-3 * g(rng);

  TempDir tmp;
  auto ckpt = tmp.path() / "factual.ckpt";
  model.save_checkpoint(ckpt);

  FactualModel other(kg1, kg2, nullptr, small_config(8));
  other.load_checkpoint(ckpt);
  REQUIRE(other.params().attr_embeds1.data == model.params().attr_embeds1.data);
  REQUIRE(other.params().attr_embeds2.data == model.params().attr_embeds2.data);
  REQUIRE(other.params().value_embeds1 == model.params().value_embeds1);
  REQUIRE(other.params().value_embeds2 == model.params().value_embeds2);

  // Re-saving produces an identical file.
  auto ckpt2 = tmp.path() / "factual2.ckpt";
  other.save_checkpoint(ckpt2);
  std::ifstream f1(ckpt), f2(ckpt2);
  std::string s1((std::istreambuf_iterator<char>(f1)), {});
  std::string s2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(s1 == s2);

  CHECK_THROWS_AS(other.load_checkpoint(tmp.path() / "missing.ckpt"), parse_error);
}

TEST_CASE("early stopper: patience contract on the injected sequence") {
  EarlyStopper stopper(3);
  stopper.seed_best(0.9);
  CHECK_FALSE(stopper.observe(0.8));
  CHECK_FALSE(stopper.observe(0.8));
  CHECK(stopper.observe(0.8));  // third consecutive reading below best
  CHECK(stopper.best() == doctest::Approx(0.9));
}

TEST_CASE("early stopper: improvement resets patience") {
  EarlyStopper stopper(2);
  stopper.seed_best(0.5);
  CHECK_FALSE(stopper.observe(0.4));
  CHECK_FALSE(stopper.observe(0.6));  // new best
  CHECK(stopper.improved());
  CHECK_FALSE(stopper.observe(0.55));
  CHECK(stopper.observe(0.55));
  CHECK(stopper.best() == doctest::Approx(0.6));
}
