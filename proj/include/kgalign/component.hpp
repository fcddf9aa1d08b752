#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kgalign/similarity.hpp"

namespace kgalign {

using PairList = std::vector<std::pair<int, int>>;

struct TrainStats {
  int epochs = 0;
  double best_val_h1 = 0.0;
};

// Common contract for the factual model and any structural model: train on
// seed pairs, then emit a similarity matrix over E1 x E2. Implementations
// consuming the same inputs are interchangeable in the co-training loop.
class AlignmentComponent {
 public:
  virtual ~AlignmentComponent() = default;

  // Re-initializes parameters deterministically from rng_seed and trains.
  virtual TrainStats train(const PairList& train_pairs, const PairList& val_pairs,
                           std::uint64_t rng_seed) = 0;

  virtual SimilarityMatrix similarity() const = 0;

  virtual std::string name() const = 0;
};

}  // namespace kgalign
