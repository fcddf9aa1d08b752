#include <doctest.h>

#include <cmath>

#include "kgalign/encoder.hpp"
#include "kgalign/errors.hpp"
#include "kgalign/vecmath.hpp"

#include "helpers.hpp"

using namespace kgalign;
using kgtest::TempDir;
using kgtest::write_file;

TEST_CASE("load_vectors: basic parse with escaped spaces") {
  TempDir tmp;
  auto file = tmp.path() / "vecs.txt";
  write_file(file, "2 3\nhello 1 0 0\nwo\\srld 0 1 0\n");
  VectorTable t = load_vectors(file);
  CHECK(t.dim == 3);
  CHECK(t.entries.size() == 2);
  REQUIRE(t.entries.count("hello") == 1);
  REQUIRE(t.entries.count("wo rld") == 1);
  CHECK(t.entries.at("wo rld") == std::vector<double>{0, 1, 0});
}

TEST_CASE("load_vectors: arity mismatch names the line") {
  TempDir tmp;
  auto file = tmp.path() / "vecs.txt";
  write_file(file, "1 3\nhello 1 0\n");
  CHECK_THROWS_AS(load_vectors(file), parse_error);
  try {
    load_vectors(file);
  } catch (const parse_error& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}

TEST_CASE("load_vectors: empty file / bad header / duplicate key") {
  TempDir tmp;
  auto file = tmp.path() / "vecs.txt";
  write_file(file, "");
  CHECK_THROWS_AS(load_vectors(file), parse_error);
  write_file(file, "oops\n");
  CHECK_THROWS_AS(load_vectors(file), parse_error);
  write_file(file, "2 2\na 1 0\na 0 1\n");
  CHECK_THROWS_AS(load_vectors(file), parse_error);
  write_file(file, "3 2\na 1 0\nb 0 1\n");  // header count mismatch
  CHECK_THROWS_AS(load_vectors(file), parse_error);
}

TEST_CASE("encode: table lookup returns the stored vector, normalized") {
  VectorTable t;
  t.dim = 4;
  t.entries["x"] = {2, 0, 0, 0};
  auto v = encode("x", &t, 4);
  CHECK(v == std::vector<double>{1, 0, 0, 0});
}

TEST_CASE("encode: lookup wins over fallback when the table covers the text") {
  VectorTable t;
  t.dim = 16;
  t.entries["alignment"] = std::vector<double>(16, 0.0);
  t.entries["alignment"][3] = 5.0;
  auto from_table = encode("alignment", &t, 16);
  auto from_hash = encode("alignment", nullptr, 16);
  CHECK(from_table[3] == doctest::Approx(1.0));
  CHECK(from_table != from_hash);
}

TEST_CASE("encode: deterministic, unit norm for nonempty, zero for empty") {
  auto a = encode("abc", nullptr, 32);
  auto b = encode("abc", nullptr, 32);
  CHECK(a == b);
  CHECK(norm2(a) == doctest::Approx(1.0).epsilon(1e-12));
  auto z = encode("", nullptr, 32);
  CHECK(norm2(z) == 0.0);
  for (const char* s : {"a", "ab", "abc", "some longer text", "Ünïcodé"}) {
    auto v = encode(s, nullptr, 64);
    CHECK(norm2(v) == doctest::Approx(1.0).epsilon(1e-12));
    for (double x : v) CHECK(std::isfinite(x));
  }
}

TEST_CASE("encode: dim mismatch with a table is rejected") {
  VectorTable t;
  t.dim = 4;
  CHECK_THROWS_AS(encode("x", &t, 8), argument_error);
}

TEST_CASE("hash_ngram_encode: empty text and dim floor") {
  CHECK(norm2(hash_ngram_encode("", 16)) == 0.0);
  CHECK_THROWS_AS(hash_ngram_encode("abc", 4), argument_error);
}

TEST_CASE("hash_ngram_encode: shared 3-grams order the cosines") {
  // Identical > overlapping > disjoint gram sets.
  auto base = encode("alignment", nullptr, 64);
  auto near_vec = encode("alignmen", nullptr, 64);  // shares most 3-grams
  auto far = encode("zqkwpv", nullptr, 64);
  double same = cosine(base, base);
  double near_cos = cosine(base, near_vec);
  double far_cos = cosine(base, far);
  CHECK(same == doctest::Approx(1.0));
  CHECK(near_cos < same);
  CHECK(near_cos > far_cos);
}

TEST_CASE("hash_ngram_encode: case-insensitive, permutation-sensitive") {
  CHECK(hash_ngram_encode("AbC", 32) == hash_ngram_encode("abc", 32));
  CHECK(hash_ngram_encode("ab cd", 32) != hash_ngram_encode("cd ab", 32));
}
