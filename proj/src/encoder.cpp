#include "kgalign/encoder.hpp"

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "kgalign/errors.hpp"
#include "kgalign/vecmath.hpp"

namespace kgalign {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = kFnvOffset) {
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::string unescape_key(const std::string& key) {
  std::string out;
  out.reserve(key.size());
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (key[i] == '\\' && i + 1 < key.size() && key[i + 1] == 's') {
      out.push_back(' ');
      ++i;
    } else {
      out.push_back(key[i]);
    }
  }
  return out;
}

}  // namespace

VectorTable load_vectors(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw parse_error("cannot open vector file: " + file.string());

  std::string line;
  if (!std::getline(in, line)) {
    throw parse_error(file.string() + ":1: missing header line");
  }
  std::istringstream header(line);
  std::size_t n = 0, d = 0;
  if (!(header >> n >> d) || d == 0) {
    throw parse_error(file.string() + ":1: header must be \"N d\"");
  }

  VectorTable table;
  table.dim = d;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string key;
    row >> key;
    std::vector<double> vec;
    vec.reserve(d);
    double x;
    while (row >> x) vec.push_back(x);
    if (vec.size() != d) {
      throw parse_error(file.string() + ":" + std::to_string(lineno) +
                        ": expected " + std::to_string(d) + " floats, got " +
                        std::to_string(vec.size()));
    }
    auto [it, inserted] = table.entries.emplace(unescape_key(key), std::move(vec));
    if (!inserted) {
      throw parse_error(file.string() + ":" + std::to_string(lineno) +
                        ": duplicate key '" + it->first + "'");
    }
  }
  if (table.entries.size() != n) {
    throw parse_error(file.string() + ": header declares " + std::to_string(n) +
                      " rows, file has " + std::to_string(table.entries.size()));
  }
  return table;
}

std::vector<double> hash_ngram_encode(std::string_view text, std::size_t dim) {
  if (dim < 8) throw argument_error("hash_ngram_encode: dim must be >= 8");
  std::vector<double> vec(dim, 0.0);
  if (text.empty()) return vec;

  std::string lower(text);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

  auto add_gram = [&](std::string_view gram) {
    std::uint64_t h = fnv1a(gram);
    std::uint64_t sign_bit = fnv1a(gram, h * kFnvPrime + 0x9e3779b97f4a7c15ULL);
    double sign = (sign_bit & 1) ? 1.0 : -1.0;
    vec[h % dim] += sign;
  };

  if (lower.size() < 3) {
    add_gram(lower);
  } else {
    for (std::size_t i = 0; i + 3 <= lower.size(); ++i) {
      add_gram(std::string_view(lower).substr(i, 3));
    }
  }
  // Sign cancellation can zero everything out; fall back to a single bucket
  // so nonempty text always has a nonzero encoding.
  double n = norm2(vec);
  if (n == 0.0) vec[fnv1a(lower) % dim] = 1.0;
  return vec;
}

std::vector<double> encode(std::string_view text, const VectorTable* table,
                           std::size_t dim) {
  if (table != nullptr) {
    if (table->dim != dim) {
      throw argument_error("encode: requested dim does not match vector table dim");
    }
    auto it = table->entries.find(std::string(text));
    if (it != table->entries.end()) {
      std::vector<double> v = it->second;
      normalize(v);
      return v;
    }
  }
  std::vector<double> v = hash_ngram_encode(text, dim);
  normalize(v);
  return v;
}

}  // namespace kgalign
