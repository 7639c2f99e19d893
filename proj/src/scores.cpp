// SPDX-License-Identifier: Apache-2.0

#include "vendi/scores.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

namespace vendi {

std::string Order::str() const {
    if (is_infinity) return "inf";
    return fmt::format("{:g}", value);
}

std::string ScoreReport::method_str() const {
    switch (method) {
        case ScoreMethod::Exact: return "exact";
        case ScoreMethod::Projected: return fmt::format("projected({})", m.value_or(-1));
        case ScoreMethod::Subsampled: return fmt::format("subsampled({})", m.value_or(-1));
    }
    return "?";
}

double renyi_exponential(const Eigen::VectorXd& weights, Order q, double support_tol) {
    if (weights.size() == 0) throw InvalidInput("empty weight vector");
    const double w_max = weights.maxCoeff();
    if (w_max <= 0.0) throw InvalidInput("all-zero weight vector");
    const double threshold = support_tol * w_max;

    if (q.is_zero()) {
        Eigen::Index support = 0;
        for (Eigen::Index i = 0; i < weights.size(); ++i)
            if (weights(i) > threshold) ++support;
        return static_cast<double>(support);
    }
    if (q.is_infinity) return 1.0 / w_max;
    if (q.is_one()) {
        double h = 0.0;
        for (Eigen::Index i = 0; i < weights.size(); ++i)
            if (weights(i) > threshold) h -= weights(i) * std::log(weights(i));
        return std::exp(h);
    }

    // log sum_i w_i^q via log-sum-exp over q * log w_i; w_i can be ~1/C and
    // q large, so the direct power underflows.
    double max_term = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < weights.size(); ++i)
        if (weights(i) > threshold) max_term = std::max(max_term, q.value * std::log(weights(i)));
    double sum = 0.0;
    for (Eigen::Index i = 0; i < weights.size(); ++i)
        if (weights(i) > threshold) sum += std::exp(q.value * std::log(weights(i)) - max_term);
    const double log_power_sum = max_term + std::log(sum);
    return std::exp(log_power_sum / (1.0 - q.value));
}

double hill_number(const Eigen::VectorXd& p, Order q) {
    if (p.size() == 0) throw InvalidInput("empty abundance vector");
    if (p.minCoeff() < 0.0) throw InvalidInput("abundance vector has a negative entry");
    if (std::abs(p.sum() - 1.0) > 1e-10)
        throw InvalidInput(fmt::format("abundance vector sums to {} (expected 1)", p.sum()));
    return renyi_exponential(p, q, 0.0); // exact-zero support for user-given abundances
}

namespace {

ScoreReport report_from_spectrum(const Spectrum& s, Order q) {
    ScoreReport r;
    r.q = q;
    r.score = renyi_exponential(s.eigenvalues, q, s.support_tol);
    r.support_count = s.support_count;
    r.lambda_max = s.lambda_max();
    r.lambda_min = s.lambda_min();
    r.trace = s.trace();
    r.uninformative = q.is_zero();
    return r;
}

} // namespace

ScoreReport vendi_score_from_spectrum(const Spectrum& s, Order q) {
    return report_from_spectrum(s, q);
}

ScoreReport vendi_score_from_kernel_matrix(const Eigen::MatrixXd& kernel_matrix, Order q,
                                           double support_tol) {
    return report_from_spectrum(eigenvalues(normalize(kernel_matrix), support_tol), q);
}

ScoreReport vendi_score(const Collection& c, const Kernel& k, Order q, double support_tol) {
    return vendi_score_from_kernel_matrix(build_kernel_matrix(k, c), q, support_tol);
}

ScoreReport vendi_score_from_embeddings(const Eigen::MatrixXd& embeddings, Order q,
                                        std::optional<Eigen::Index> m, double support_tol) {
    const Eigen::Index n = embeddings.rows();
    if (n == 0) throw InvalidInput("empty embedding matrix");
    for (Eigen::Index i = 0; i < n; ++i) {
        const double norm = embeddings.row(i).norm();
        if (std::abs(norm - 1.0) > 1e-6)
            throw InvalidInput(
                fmt::format("embedding row {} has norm {} (rows must be unit-norm)", i, norm));
    }

    if (!m) {
        Eigen::MatrixXd k = embeddings * embeddings.transpose();
        k.diagonal().setOnes();
        return vendi_score_from_kernel_matrix(k, q, support_tol);
    }

    // O(N^2 m) path: eigenvalues of V^T K-tilde V for the Gram-Schmidt basis
    // of the embedding column space. Exact when m reaches the rank.
    const ProjectionBasis basis = orthogonalize_embeddings(embeddings, *m);
    const Eigen::MatrixXd small =
        (basis.columns.transpose() * embeddings) * (embeddings.transpose() * basis.columns) /
        static_cast<double>(n);
    const Spectrum s = spectrum_from_raw(symmetric_eigenvalues_desc(small), support_tol);
    ScoreReport r = report_from_spectrum(s, q);
    r.method = ScoreMethod::Projected;
    r.m = *m;
    return r;
}

std::vector<ScoreReport> score_profile_from_spectrum(const Spectrum& s,
                                                     const std::vector<Order>& qs) {
    if (qs.empty()) throw InvalidInput("empty order list");
    std::vector<ScoreReport> reports;
    reports.reserve(qs.size());
    for (const Order& q : qs) reports.push_back(report_from_spectrum(s, q));
    return reports;
}

std::vector<ScoreReport> score_profile(const Collection& c, const Kernel& k,
                                       const std::vector<Order>& qs, double support_tol) {
    const Spectrum s = eigenvalues(normalize(build_kernel_matrix(k, c)), support_tol);
    return score_profile_from_spectrum(s, qs);
}

} // namespace vendi
