#pragma once

#include <vector>

namespace mpfs {

struct KdeConfig {
    int grid_points = 512;      ///< uniform grid over [0, 1]
    double fallback_thr = 0.5;  ///< returned when no local minimum exists
};

/// Data-driven threshold: fit a Gaussian KDE to the M selection frequencies
/// (bandwidth = their sample standard deviation), evaluate it on a uniform
/// grid over [0, 1], and return the leftmost strict discrete local minimum.
/// Falls back to fallback_thr when the bandwidth is zero or no interior
/// local minimum exists. Requires M >= 2.
double kde_threshold(const std::vector<double>& frequencies,
                     const KdeConfig& config = {});

/// { j : frequencies[j] >= pi_thr }, ascending. pi_thr must lie in (0, 1).
std::vector<int> fixed_select(const std::vector<double>& frequencies,
                              double pi_thr);

/// The s features with the highest frequencies (ties broken by ascending
/// index), returned sorted ascending. Requires 1 <= s <= M.
std::vector<int> oracle_select(const std::vector<double>& frequencies, int s);

}  // namespace mpfs
