#include "mpfs/data_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "mpfs/errors.hpp"

namespace mpfs {

DataMatrix::DataMatrix(Eigen::VectorXd y, Eigen::MatrixXd X,
                       std::vector<std::string> feature_names)
    : y_(std::move(y)), X_(std::move(X)), names_(std::move(feature_names)) {
    if (X_.rows() < 1 || X_.cols() < 1)
        throw DataError("data matrix must have at least one row and one column");
    if (y_.size() != X_.rows())
        throw DataError("response length " + std::to_string(y_.size()) +
                        " does not match observation count " +
                        std::to_string(X_.rows()));
    if (!names_.empty() && static_cast<Eigen::Index>(names_.size()) != X_.cols())
        throw DataError("feature name count does not match feature count");
    if (!y_.allFinite() || !X_.allFinite())
        throw DataError("data contains non-finite values (NaN or Inf)");
}

std::string DataMatrix::feature_name(int j) const {
    if (j >= 0 && j < static_cast<int>(names_.size())) return names_[j];
    return "f" + std::to_string(j);
}

namespace {

void check_index_set(const std::vector<int>& idx, const char* what) {
    if (idx.empty())
        throw ContractError(std::string("minipatch ") + what + " set is empty");
    if (!std::is_sorted(idx.begin(), idx.end()))
        throw ContractError(std::string("minipatch ") + what +
                            " indices are not sorted");
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
        throw ContractError(std::string("minipatch ") + what +
                            " indices contain duplicates");
    if (idx.front() < 0)
        throw ContractError(std::string("minipatch ") + what +
                            " indices contain negative entries");
}

}  // namespace

Minipatch::Minipatch(std::vector<int> obs, std::vector<int> feat,
                     std::int64_t iter)
    : obs_idx(std::move(obs)), feat_idx(std::move(feat)), iteration(iter) {
    check_index_set(obs_idx, "observation");
    check_index_set(feat_idx, "feature");
    if (iteration < 1) throw ContractError("minipatch iteration must be >= 1");
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> extract_minipatch(
    const DataMatrix& data, const Minipatch& patch) {
    check_index_set(patch.obs_idx, "observation");
    check_index_set(patch.feat_idx, "feature");
    if (patch.obs_idx.back() >= data.n_obs())
        throw std::out_of_range("minipatch observation index " +
                                std::to_string(patch.obs_idx.back()) +
                                " out of range for N=" +
                                std::to_string(data.n_obs()));
    if (patch.feat_idx.back() >= data.n_features())
        throw std::out_of_range("minipatch feature index " +
                                std::to_string(patch.feat_idx.back()) +
                                " out of range for M=" +
                                std::to_string(data.n_features()));

    const int n = patch.n();
    const int m = patch.m();
    Eigen::VectorXd y_sub(n);
    Eigen::MatrixXd X_sub(n, m);
    for (int a = 0; a < n; ++a) y_sub(a) = data.y()(patch.obs_idx[a]);
    for (int b = 0; b < m; ++b) {
        const auto col = data.X().col(patch.feat_idx[b]);
        for (int a = 0; a < n; ++a) X_sub(a, b) = col(patch.obs_idx[a]);
    }
    return {std::move(y_sub), std::move(X_sub)};
}

}  // namespace mpfs
