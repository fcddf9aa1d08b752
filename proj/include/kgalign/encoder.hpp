#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kgalign {

// Precomputed text embeddings, typically exported from a sentence-embedding
// model. Keys are raw strings; spaces in keys are stored escaped as "\s" in
// the file format only.
struct VectorTable {
  std::size_t dim = 0;
  std::unordered_map<std::string, std::vector<double>> entries;
};

// Text word2vec format: first line "N d", then N lines "text v1 ... vd".
VectorTable load_vectors(const std::filesystem::path& file);

// Deterministic hashed character-3-gram embedding of the lowercased text.
// Grams are hashed (FNV-1a 64) into dim buckets with +/-1 signs from a second
// hash. Empty text yields the zero vector. Not normalized.
std::vector<double> hash_ngram_encode(std::string_view text, std::size_t dim);

// Exact table lookup when available, hashed-n-gram fallback otherwise.
// Result is L2-normalized; empty text yields the zero vector.
std::vector<double> encode(std::string_view text, const VectorTable* table,
                           std::size_t dim);

}  // namespace kgalign
