// SPDX-License-Identifier: Apache-2.0

#ifndef VENDI_TEST_HELPERS_HPP
#define VENDI_TEST_HELPERS_HPP

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "vendi/kernels.hpp"
#include "vendi/scores.hpp"

namespace vendi::testing {

/// Block-structured shape-color collection: class i repeated counts[i]
/// times, zero similarity across classes. Its spectrum is exactly M / C.
inline Collection block_collection(const std::vector<int>& counts) {
    Collection c;
    for (std::size_t i = 0; i < counts.size(); ++i)
        for (int rep = 0; rep < counts[i]; ++rep)
            c.items.emplace_back(
                ShapeColorToken{"shape-" + std::to_string(i), "color-" + std::to_string(i)});
    return c;
}

/// Multiplicities as an abundance vector M / C.
inline Eigen::VectorXd abundances(const std::vector<int>& counts) {
    double total = 0;
    for (int m : counts) total += m;
    Eigen::VectorXd p(static_cast<Eigen::Index>(counts.size()));
    for (std::size_t i = 0; i < counts.size(); ++i)
        p(static_cast<Eigen::Index>(i)) = counts[i] / total;
    return p;
}

/// Random multiplicity vector, N classes in [1, n_max], counts in [1, m_max].
inline std::vector<int> random_counts(std::mt19937_64& rng, int n_max = 8, int m_max = 6) {
    std::uniform_int_distribution<int> n_dist(1, n_max);
    std::uniform_int_distribution<int> m_dist(1, m_max);
    std::vector<int> counts(static_cast<std::size_t>(n_dist(rng)));
    for (auto& m : counts) m = m_dist(rng);
    return counts;
}

/// Random probability vector (normalized exponentials), a stand-in for a
/// PSD spectrum.
inline Eigen::VectorXd random_spectrum(std::mt19937_64& rng, int n) {
    std::exponential_distribution<double> dist(1.0);
    Eigen::VectorXd p(n);
    for (int i = 0; i < n; ++i) p(i) = dist(rng);
    p /= p.sum();
    std::sort(p.data(), p.data() + n, std::greater<>());
    return p;
}

/// Random replica positions in [-2, 2]^d.
inline Eigen::MatrixXd random_positions(std::mt19937_64& rng, int r, int d) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    Eigen::MatrixXd x(r, d);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < d; ++j) x(i, j) = dist(rng);
    return x;
}

/// Random unit-norm embedding rows.
inline Eigen::MatrixXd random_unit_rows(std::mt19937_64& rng, int n, int d) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::MatrixXd e(n, d);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) e(i, j) = dist(rng);
        e.row(i) /= e.row(i).norm();
    }
    return e;
}

/// Brute-force Hill number straight from the definition, the independent
/// oracle for renyi_exponential.
inline double hill_oracle(const Eigen::VectorXd& p, double q) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p(i) > 0.0) sum += std::pow(p(i), q);
    return std::pow(sum, 1.0 / (1.0 - q));
}

inline double shannon_hill_oracle(const Eigen::VectorXd& p) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p(i) > 0.0) h -= p(i) * std::log(p(i));
    return std::exp(h);
}

} // namespace vendi::testing

#endif
