#include "mpfs/selectors.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <numeric>

#include "mpfs/errors.hpp"

namespace mpfs {

const char* to_string(SelectorKind k) {
    switch (k) {
        case SelectorKind::thresholded_ols: return "thresholded_ols";
        case SelectorKind::univariate_topk: return "univariate_topk";
        case SelectorKind::custom: return "custom";
    }
    return "?";
}

OlsFit ols_fit(const Eigen::VectorXd& y_sub, const Eigen::MatrixXd& X_sub) {
    const int n = static_cast<int>(X_sub.rows());
    const int m = static_cast<int>(X_sub.cols());
    if (y_sub.size() != n)
        throw ContractError("response/design row mismatch in OLS fit");
    if (n <= m + 1)
        throw ConfigError("thresholded OLS needs n > m + 1 (got n=" +
                          std::to_string(n) + ", m=" + std::to_string(m) + ")");

    // Center within the minipatch; the intercept is absorbed here and one
    // residual degree of freedom is charged for it below.
    Eigen::VectorXd yc = y_sub.array() - y_sub.mean();
    Eigen::MatrixXd Xc = X_sub.rowwise() - X_sub.colwise().mean();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xc);
    const int rank = static_cast<int>(qr.rank());

    OlsFit fit;
    fit.rank = rank;
    fit.beta = Eigen::VectorXd::Zero(m);
    fit.std_err = Eigen::VectorXd::Constant(
        m, std::numeric_limits<double>::infinity());
    fit.t_stat = Eigen::VectorXd::Zero(m);
    fit.p_value = Eigen::VectorXd::Ones(m);
    fit.identifiable.assign(m, false);
    fit.dof = n - rank - 1;
    if (rank == 0 || fit.dof < 1) return fit;

    // Pivot position k corresponds to original column perm[k]; the first
    // `rank` pivots form a maximal linearly independent column set. Columns
    // beyond the rank are aliased and keep beta = 0, p = 1.
    const auto& perm = qr.colsPermutation().indices();
    for (int k = 0; k < rank; ++k) fit.identifiable[perm[k]] = true;

    // diag_inv[k] = [(X_id' X_id)^-1]_kk where X_id holds the identifiable
    // columns in pivot order.
    Eigen::VectorXd diag_inv(rank);
    if (rank == m) {
        fit.beta = qr.solve(yc);
        Eigen::MatrixXd R =
            qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
        Eigen::MatrixXd Rinv = R.triangularView<Eigen::Upper>().solve(
            Eigen::MatrixXd::Identity(m, m));
        for (int k = 0; k < m; ++k) diag_inv(k) = Rinv.row(k).squaredNorm();
    } else {
        // Rank-deficient design: inference runs on the reduced full-rank
        // design; aliased columns cannot be tested.
        Eigen::MatrixXd Xr(n, rank);
        for (int k = 0; k < rank; ++k) Xr.col(k) = Xc.col(perm[k]);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_r(Xr);
        const Eigen::VectorXd beta_r = qr_r.solve(yc);
        for (int k = 0; k < rank; ++k) fit.beta(perm[k]) = beta_r(k);
        const Eigen::MatrixXd gram_inv = (Xr.transpose() * Xr).ldlt().solve(
            Eigen::MatrixXd::Identity(rank, rank));
        diag_inv = gram_inv.diagonal();
    }

    const Eigen::VectorXd residual = yc - Xc * fit.beta;
    const double rss = residual.squaredNorm();
    fit.sigma2 = rss / fit.dof;

    const double eps = std::numeric_limits<double>::epsilon();
    const bool exact_fit = rss <= 1e-24 * std::max(yc.squaredNorm(), eps);
    boost::math::students_t_distribution<double> tdist(fit.dof);

    const double beta_scale = fit.beta.cwiseAbs().maxCoeff();
    for (int k = 0; k < rank; ++k) {
        const int col = perm[k];
        const double var_k = fit.sigma2 * diag_inv(k);
        if (exact_fit) {
            // Machine-exact interpolation: the t statistics degenerate to
            // 0/0 noise. Nonzero coefficients are infinitely significant.
            const bool nonzero = std::abs(fit.beta(col)) >
                                 1e-10 * std::max(beta_scale, eps);
            fit.std_err(col) = 0.0;
            fit.t_stat(col) = nonzero
                                  ? std::numeric_limits<double>::infinity()
                                  : 0.0;
            fit.p_value(col) = nonzero ? 0.0 : 1.0;
            continue;
        }
        fit.std_err(col) = std::sqrt(std::max(var_k, 0.0));
        if (fit.std_err(col) > 0.0) {
            fit.t_stat(col) = fit.beta(col) / fit.std_err(col);
            fit.p_value(col) =
                2.0 * boost::math::cdf(boost::math::complement(
                          tdist, std::abs(fit.t_stat(col))));
        }
    }
    return fit;
}

std::vector<int> select_thresholded_ols(const Eigen::VectorXd& y_sub,
                                        const Eigen::MatrixXd& X_sub,
                                        double alpha_sel) {
    if (!(alpha_sel > 0.0) || !(alpha_sel < 1.0))
        throw ConfigError("alpha_sel must lie in (0, 1)");
    const int m = static_cast<int>(X_sub.cols());
    const OlsFit fit = ols_fit(y_sub, X_sub);
    const double bound = alpha_sel / m;
    std::vector<int> out;
    for (int b = 0; b < m; ++b)
        if (fit.identifiable[b] && fit.p_value(b) < bound) out.push_back(b);
    return out;
}

std::vector<int> select_univariate_topk(const Eigen::VectorXd& y_sub,
                                        const Eigen::MatrixXd& X_sub,
                                        int top_k) {
    if (top_k < 1) throw ConfigError("top_k must be >= 1");
    const int n = static_cast<int>(X_sub.rows());
    const int m = static_cast<int>(X_sub.cols());
    if (y_sub.size() != n)
        throw ContractError("response/design row mismatch in univariate filter");

    const Eigen::VectorXd yc = y_sub.array() - y_sub.mean();
    const double y_ss = yc.squaredNorm();

    std::vector<double> abs_corr(m, 0.0);
    for (int b = 0; b < m; ++b) {
        const Eigen::VectorXd xc =
            X_sub.col(b).array() - X_sub.col(b).mean();
        const double x_ss = xc.squaredNorm();
        if (x_ss <= 0.0 || y_ss <= 0.0) continue;  // zero variance => corr 0
        abs_corr[b] = std::abs(xc.dot(yc)) / std::sqrt(x_ss * y_ss);
    }

    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (abs_corr[a] != abs_corr[b]) return abs_corr[a] > abs_corr[b];
        return a < b;
    });
    order.resize(std::min(top_k, m));
    std::sort(order.begin(), order.end());
    return order;
}

SelectorFn make_selector(const SelectorSpec& spec) {
    switch (spec.kind) {
        case SelectorKind::thresholded_ols: {
            const double alpha = spec.alpha_sel;
            return [alpha](const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                           std::mt19937_64&) {
                return select_thresholded_ols(y, X, alpha);
            };
        }
        case SelectorKind::univariate_topk: {
            const int k = spec.top_k;
            return [k](const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                       std::mt19937_64&) {
                return select_univariate_topk(y, X, k);
            };
        }
        case SelectorKind::custom:
            if (!spec.custom)
                throw ConfigError("custom selector spec has no callable");
            return spec.custom;
    }
    throw ContractError("unreachable selector kind");
}

}  // namespace mpfs
