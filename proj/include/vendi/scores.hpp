// SPDX-License-Identifier: Apache-2.0

#ifndef VENDI_SCORES_HPP
#define VENDI_SCORES_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "vendi/kernels.hpp"
#include "vendi/spectrum.hpp"

namespace vendi {

/// Sensitivity order q in [0, inf]. q < 1 weighs rare items more, q > 1
/// common items; q = 1 is the Shannon limit, q = inf tracks only the
/// largest weight.
struct Order {
    double value = 1.0;
    bool is_infinity = false;

    static Order infinity() { return {0.0, true}; }
    static Order of(double q) { return {q, false}; }

    [[nodiscard]] bool is_zero() const { return !is_infinity && value == 0.0; }
    [[nodiscard]] bool is_one() const { return !is_infinity && std::abs(value - 1.0) < 1e-8; }
    [[nodiscard]] std::string str() const;
};

enum class ScoreMethod { Exact, Projected, Subsampled };

struct ScoreReport {
    Order q;
    double score = 1.0;
    Eigen::Index support_count = 0;
    ScoreMethod method = ScoreMethod::Exact;
    std::optional<Eigen::Index> m; // basis size for Projected/Subsampled
    double lambda_max = 0.0;
    double lambda_min = 0.0;
    double trace = 0.0;
    bool uninformative = false; // q = 0 counts support only

    [[nodiscard]] std::string method_str() const;
};

/// Exponential of the order-q Renyi entropy of a normalized weight vector.
/// Support is {w_i > support_tol * max w}. Computed in log-space.
[[nodiscard]] double renyi_exponential(const Eigen::VectorXd& weights, Order q,
                                       double support_tol);

/// Hill number D_q of an abundance vector (must sum to 1 within 1e-10).
/// Support is exact zeros.
[[nodiscard]] double hill_number(const Eigen::VectorXd& p, Order q);

[[nodiscard]] ScoreReport vendi_score(const Collection& c, const Kernel& k, Order q,
                                      double support_tol = kDefaultSupportTol);

[[nodiscard]] ScoreReport vendi_score_from_spectrum(const Spectrum& s, Order q);

/// Score a kernel matrix directly (normalize + eigendecompose once).
[[nodiscard]] ScoreReport vendi_score_from_kernel_matrix(const Eigen::MatrixXd& kernel_matrix,
                                                         Order q,
                                                         double support_tol = kDefaultSupportTol);

/// Linear-kernel score of unit-norm embedding rows. With m unset the full
/// N x N path is used; otherwise the O(N^2 m) Gram-Schmidt projection.
[[nodiscard]] ScoreReport vendi_score_from_embeddings(const Eigen::MatrixXd& embeddings, Order q,
                                                      std::optional<Eigen::Index> m = std::nullopt,
                                                      double support_tol = kDefaultSupportTol);

/// One eigendecomposition shared across all orders.
[[nodiscard]] std::vector<ScoreReport> score_profile(const Collection& c, const Kernel& k,
                                                     const std::vector<Order>& qs,
                                                     double support_tol = kDefaultSupportTol);

[[nodiscard]] std::vector<ScoreReport> score_profile_from_spectrum(const Spectrum& s,
                                                                   const std::vector<Order>& qs);

} // namespace vendi

#endif // VENDI_SCORES_HPP
