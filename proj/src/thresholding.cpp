#include "mpfs/thresholding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mpfs/errors.hpp"

namespace mpfs {

double kde_threshold(const std::vector<double>& frequencies,
                     const KdeConfig& config) {
    const int M = static_cast<int>(frequencies.size());
    if (M < 2) throw ConfigError("kde_threshold needs at least two frequencies");
    if (config.grid_points < 16)
        throw ConfigError("kde grid must have at least 16 points");

    const double mean =
        std::accumulate(frequencies.begin(), frequencies.end(), 0.0) / M;
    double ss = 0.0;
    for (double f : frequencies) ss += (f - mean) * (f - mean);
    const double h = std::sqrt(ss / (M - 1));
    if (h <= 0.0) return config.fallback_thr;

    const int G = config.grid_points;
    std::vector<double> density(G);
    const double inv_2h2 = 1.0 / (2.0 * h * h);
    for (int i = 0; i < G; ++i) {
        const double x = static_cast<double>(i) / (G - 1);
        double acc = 0.0;
        for (double f : frequencies) {
            const double d = x - f;
            acc += std::exp(-d * d * inv_2h2);
        }
        density[i] = acc / M;
    }

    // Leftmost strict discrete local minimum (both neighbors higher).
    for (int i = 1; i + 1 < G; ++i) {
        if (density[i] < density[i - 1] && density[i] < density[i + 1])
            return static_cast<double>(i) / (G - 1);
    }
    return config.fallback_thr;
}

std::vector<int> fixed_select(const std::vector<double>& frequencies,
                              double pi_thr) {
    if (!(pi_thr > 0.0) || !(pi_thr < 1.0))
        throw ConfigError("pi_thr must lie in (0, 1)");
    std::vector<int> out;
    for (int j = 0; j < static_cast<int>(frequencies.size()); ++j)
        if (frequencies[j] >= pi_thr) out.push_back(j);
    return out;
}

std::vector<int> oracle_select(const std::vector<double>& frequencies, int s) {
    const int M = static_cast<int>(frequencies.size());
    if (s < 1 || s > M)
        throw ConfigError("oracle cardinality " + std::to_string(s) +
                          " out of range [1, " + std::to_string(M) + "]");
    std::vector<int> order(M);
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + s, order.end(),
                      [&](int a, int b) {
                          if (frequencies[a] != frequencies[b])
                              return frequencies[a] > frequencies[b];
                          return a < b;
                      });
    order.resize(s);
    std::sort(order.begin(), order.end());
    return order;
}

}  // namespace mpfs
