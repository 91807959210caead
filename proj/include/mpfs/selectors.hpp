#pragma once

#include <Eigen/Dense>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace mpfs {

enum class SelectorKind { thresholded_ols, univariate_topk, custom };

/// Signature for pluggable per-minipatch selectors: given the minipatch
/// response and design, return the selected local column indices (a sorted
/// subset of {0,...,m-1}). Must be pure and reentrant.
using SelectorFn = std::function<std::vector<int>(
    const Eigen::VectorXd& y_sub, const Eigen::MatrixXd& X_sub,
    std::mt19937_64& rng)>;

struct SelectorSpec {
    SelectorKind kind = SelectorKind::thresholded_ols;
    double alpha_sel = 0.05;  ///< thresholded_ols: Bonferroni family level
    int top_k = 1;            ///< univariate_topk: columns to keep
    SelectorFn custom;        ///< kind == custom
};

const char* to_string(SelectorKind k);

/// Full OLS fit of y on the columns of X, both centered within the call.
/// Exposed so the inference pieces can be tested against direct
/// normal-equation solutions.
struct OlsFit {
    Eigen::VectorXd beta;      ///< coefficient per column (0 for aliased)
    Eigen::VectorXd std_err;   ///< standard error per column (inf for aliased)
    Eigen::VectorXd t_stat;    ///< beta / std_err (0 for aliased)
    Eigen::VectorXd p_value;   ///< two-sided t-test p-value (1 for aliased)
    std::vector<bool> identifiable;  ///< false for columns aliased by rank loss
    int rank = 0;
    int dof = 0;               ///< residual degrees of freedom
    double sigma2 = 0.0;       ///< RSS / dof
};

OlsFit ols_fit(const Eigen::VectorXd& y_sub, const Eigen::MatrixXd& X_sub);

/// Thresholded OLS: centered least squares via column-pivoted QR, two-sided
/// t-tests with n - m - 1 residual degrees of freedom, and selection of the
/// columns whose p-value clears the Bonferroni bound alpha_sel / m.
/// Requires n > m + 1. Aliased (non-identifiable) columns are never selected.
std::vector<int> select_thresholded_ols(const Eigen::VectorXd& y_sub,
                                        const Eigen::MatrixXd& X_sub,
                                        double alpha_sel);

/// Rank columns by |Pearson correlation with y| descending (ties broken by
/// ascending column index; zero-variance columns count as correlation 0)
/// and keep the top min(top_k, m).
std::vector<int> select_univariate_topk(const Eigen::VectorXd& y_sub,
                                        const Eigen::MatrixXd& X_sub,
                                        int top_k);

/// Bind a spec to a callable selector.
SelectorFn make_selector(const SelectorSpec& spec);

}  // namespace mpfs
