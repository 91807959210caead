#include "mpfs/tracker.hpp"

#include <algorithm>
#include <string>

#include "mpfs/errors.hpp"

namespace mpfs {

SelectionTracker::SelectionTracker(int n_features)
    : sampled_(n_features, 0), selected_(n_features, 0) {
    if (n_features < 1) throw ConfigError("tracker needs at least one feature");
}

void SelectionTracker::update(const Minipatch& patch,
                              const std::vector<int>& support) {
    const auto& feats = patch.feat_idx;
    if (!feats.empty() && feats.back() >= n_features())
        throw ContractError("minipatch feature index out of tracker range");
    if (!std::is_sorted(support.begin(), support.end()))
        throw ContractError("selector support must be sorted");
    if (!std::includes(feats.begin(), feats.end(), support.begin(),
                       support.end()))
        throw ContractError(
            "selector support contains a feature outside its minipatch");

    for (int j : feats) ++sampled_[j];
    for (int j : support) ++selected_[j];
}

void SelectionTracker::merge(const SelectionTracker& other) {
    if (other.n_features() != n_features())
        throw ContractError("cannot merge trackers of different widths");
    for (int j = 0; j < n_features(); ++j) {
        sampled_[j] += other.sampled_[j];
        selected_[j] += other.selected_[j];
    }
}

double SelectionTracker::frequency(int j) const {
    return static_cast<double>(selected_[j]) /
           static_cast<double>(std::max<std::int64_t>(1, sampled_[j]));
}

std::vector<double> SelectionTracker::frequencies() const {
    std::vector<double> out(sampled_.size());
    for (int j = 0; j < n_features(); ++j) out[j] = frequency(j);
    return out;
}

}  // namespace mpfs
