#pragma once

#include <filesystem>
#include <string>

#include "kgalign/matrix.hpp"

namespace kgalign {

// Dense score matrix over E1 x E2. Larger scores mean more similar.
struct SimilarityMatrix {
  Matrix scores;
  std::string provenance;

  SimilarityMatrix() = default;
  SimilarityMatrix(std::size_t rows, std::size_t cols, std::string prov = {})
      : scores(rows, cols), provenance(std::move(prov)) {}

  std::size_t rows() const { return scores.rows; }
  std::size_t cols() const { return scores.cols; }
  double at(std::size_t i, std::size_t j) const { return scores(i, j); }
  double& at(std::size_t i, std::size_t j) { return scores(i, j); }
};

// Interchange format: header "rows cols", then row-major whitespace-separated
// floats written with 17 significant digits.
SimilarityMatrix import_similarity(const std::filesystem::path& file);
void export_similarity(const SimilarityMatrix& sm, const std::filesystem::path& file);

}  // namespace kgalign
