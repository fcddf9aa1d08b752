#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace kgalign {

// Truncated negative sampling: for each positive (e1, e2), corrupted pairs are
// drawn uniformly from the ceil(truncation_fraction * |E|) entities nearest to
// the anchor under current embedding distance, excluding the gold counterpart.
// Corruption alternates sides (even draws replace e2, odd draws replace e1).
// The window is widened to the minimum feasible size when too small.
std::vector<std::pair<int, int>> sample_negatives(
    const std::vector<std::pair<int, int>>& positives,
    const std::vector<std::vector<double>>& embeds1,
    const std::vector<std::vector<double>>& embeds2,
    int negatives_per_positive, double truncation_fraction,
    std::uint64_t rng_seed);

}  // namespace kgalign
