#pragma once

#include <cstdint>
#include <vector>

#include "mpfs/data_matrix.hpp"

namespace mpfs {

/// Per-feature sampled/selected counters. Selection frequencies are derived
/// on demand from the integer counters, so the incremental update is exactly
/// equivalent to recomputing the batch ratio over the full minipatch trace.
///
/// Single-writer mutation; independent workers may accumulate into local
/// trackers and combine them with merge().
class SelectionTracker {
public:
    explicit SelectionTracker(int n_features);

    /// Record one minipatch outcome: every feature in the patch was sampled,
    /// every feature in `support` (global indices) was additionally selected.
    /// `support` must be a subset of the patch's feature set.
    void update(const Minipatch& patch, const std::vector<int>& support);

    /// Pointwise counter addition. Both trackers must cover the same
    /// feature count.
    void merge(const SelectionTracker& other);

    /// selected / max(1, sampled); always in [0, 1].
    double frequency(int j) const;
    std::vector<double> frequencies() const;

    int n_features() const { return static_cast<int>(sampled_.size()); }
    const std::vector<std::int64_t>& sampled_counts() const { return sampled_; }
    const std::vector<std::int64_t>& selected_counts() const { return selected_; }

private:
    std::vector<std::int64_t> sampled_;
    std::vector<std::int64_t> selected_;
};

}  // namespace mpfs
