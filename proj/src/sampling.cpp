#include "kgalign/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

#include "kgalign/errors.hpp"
#include "kgalign/vecmath.hpp"

namespace kgalign {

namespace {

// Indices of the `window` entities nearest to `anchor`, excluding `exclude`.
std::vector<int> nearest_window(const std::vector<double>& anchor,
                                const std::vector<std::vector<double>>& embeds,
                                int exclude, std::size_t window) {
  std::vector<int> idx;
  idx.reserve(embeds.size());
  for (int i = 0; i < static_cast<int>(embeds.size()); ++i) {
    if (i != exclude) idx.push_back(i);
  }
  window = std::min(window, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + window, idx.end(), [&](int a, int b) {
    double da = euclidean(anchor, embeds[a]);
    double db = euclidean(anchor, embeds[b]);
    if (da != db) return da < db;
    return a < b;
  });
  idx.resize(window);
  return idx;
}

}  // namespace

std::vector<std::pair<int, int>> sample_negatives(
    const std::vector<std::pair<int, int>>& positives,
    const std::vector<std::vector<double>>& embeds1,
    const std::vector<std::vector<double>>& embeds2,
    int negatives_per_positive, double truncation_fraction,
    std::uint64_t rng_seed) {
  if (embeds1.size() < 2 || embeds2.size() < 2) {
    throw argument_error("sample_negatives: need at least 2 entities per side");
  }
  std::mt19937_64 rng(rng_seed);
  std::vector<std::pair<int, int>> negatives;
  negatives.reserve(positives.size() * negatives_per_positive);

  auto window_size = [&](std::size_t n) {
    auto w = static_cast<std::size_t>(
        std::ceil(truncation_fraction * static_cast<double>(n)));
    return std::max<std::size_t>(w, 1);
  };

  for (const auto& [e1, e2] : positives) {
    std::vector<int> win2, win1;
    for (int k = 0; k < negatives_per_positive; ++k) {
      if (k % 2 == 0) {
        if (win2.empty()) {
          win2 = nearest_window(embeds1[e1], embeds2, e2, window_size(embeds2.size()));
        }
        std::uniform_int_distribution<std::size_t> d(0, win2.size() - 1);
        negatives.emplace_back(e1, win2[d(rng)]);
      } else {
        if (win1.empty()) {
          win1 = nearest_window(embeds2[e2], embeds1, e1, window_size(embeds1.size()));
        }
        std::uniform_int_distribution<std::size_t> d(0, win1.size() - 1);
        negatives.emplace_back(win1[d(rng)], e2);
      }
    }
  }
  return negatives;
}

}  // namespace kgalign
