#include "kgalign/similarity.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "kgalign/errors.hpp"

namespace kgalign {

SimilarityMatrix import_similarity(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw parse_error("cannot open similarity file: " + file.string());

  std::size_t rows = 0, cols = 0;
  if (!(in >> rows >> cols)) {
    throw parse_error(file.string() + ": header must be \"rows cols\"");
  }
  SimilarityMatrix sm(rows, cols, "external:" + file.filename().string());
  for (std::size_t i = 0; i < rows * cols; ++i) {
    double x;
    if (!(in >> x)) {
      throw parse_error(file.string() + ": expected " +
                        std::to_string(rows * cols) + " values, got " +
                        std::to_string(i));
    }
    if (!std::isfinite(x)) {
      throw parse_error(file.string() + ": non-finite value at position " +
                        std::to_string(i));
    }
    sm.scores.data[i] = x;
  }
  double extra;
  if (in >> extra) {
    throw parse_error(file.string() + ": trailing values beyond rows*cols");
  }
  return sm;
}

void export_similarity(const SimilarityMatrix& sm, const std::filesystem::path& file) {
  std::ofstream out(file);
  out << sm.rows() << ' ' << sm.cols() << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < sm.rows(); ++i) {
    for (std::size_t j = 0; j < sm.cols(); ++j) {
      if (j) out << ' ';
      out << sm.at(i, j);
    }
    out << '\n';
  }
}

}  // namespace kgalign
