#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mpfs {

/// Immutable (y, X) pair: N observations and M features with optional
/// column names. Construction validates shape and finiteness; instances
/// are safe to share across concurrent workers.
class DataMatrix {
public:
    DataMatrix(Eigen::VectorXd y, Eigen::MatrixXd X,
               std::vector<std::string> feature_names = {});

    int n_obs() const { return static_cast<int>(X_.rows()); }
    int n_features() const { return static_cast<int>(X_.cols()); }

    const Eigen::VectorXd& y() const { return y_; }
    const Eigen::MatrixXd& X() const { return X_; }

    /// Column names as loaded, or empty if the source carried none.
    const std::vector<std::string>& feature_names() const { return names_; }

    /// Name of column j, falling back to "f<j>" for anonymous sources.
    std::string feature_name(int j) const;

private:
    Eigen::VectorXd y_;
    Eigen::MatrixXd X_;
    std::vector<std::string> names_;
};

/// A minipatch: the index pair selecting a tiny submatrix of the data.
/// Indices are 0-based, sorted, and distinct.
struct Minipatch {
    std::vector<int> obs_idx;
    std::vector<int> feat_idx;
    std::int64_t iteration = 1;

    Minipatch() = default;
    Minipatch(std::vector<int> obs, std::vector<int> feat, std::int64_t iter);

    int n() const { return static_cast<int>(obs_idx.size()); }
    int m() const { return static_cast<int>(feat_idx.size()); }
};

/// Materialize (y_sub, X_sub) for a minipatch. Entry (a, b) of the result
/// equals X(obs_idx[a], feat_idx[b]). Throws on out-of-range indices.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> extract_minipatch(
    const DataMatrix& data, const Minipatch& patch);

}  // namespace mpfs
