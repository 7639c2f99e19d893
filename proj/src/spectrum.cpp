// SPDX-License-Identifier: Apache-2.0

#include "vendi/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numeric>
#include <random>

namespace vendi {

Eigen::VectorXd symmetric_eigenvalues_desc(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("symmetric eigensolver failed to converge");
    return solver.eigenvalues().reverse();
}

Eigen::MatrixXd normalize(const Eigen::MatrixXd& kernel_matrix) {
    const Eigen::Index c = kernel_matrix.rows();
    if (c == 0 || kernel_matrix.cols() != c)
        throw InvalidInput("kernel matrix must be square and non-empty");
    for (Eigen::Index i = 0; i < c; ++i) {
        if (std::abs(kernel_matrix(i, i) - 1.0) > 1e-9)
            throw InvalidInput(fmt::format(
                "kernel matrix diagonal entry {} is {} (expected 1 within 1e-9)", i,
                kernel_matrix(i, i)));
    }
    return kernel_matrix / static_cast<double>(c);
}

Spectrum spectrum_from_raw(Eigen::VectorXd raw, double support_tol) {
    if (raw.size() == 0) throw InvalidInput("empty spectrum");
    std::sort(raw.data(), raw.data() + raw.size(), std::greater<>());
    const double lambda_max = raw(0);
    if (lambda_max <= 0.0)
        throw IndefiniteKernel("spectrum has no positive eigenvalue", lambda_max);

    const double clamp_floor = -support_tol * lambda_max;
    for (Eigen::Index i = 0; i < raw.size(); ++i) {
        if (raw(i) < clamp_floor)
            throw IndefiniteKernel(
                fmt::format("indefinite kernel: eigenvalue {} = {} below the clamping "
                            "tolerance {}",
                            i, raw(i), clamp_floor),
                raw(i));
        if (raw(i) < 0.0) raw(i) = 0.0;
    }

    const double trace = raw.sum();
    if (trace <= 0.0) throw IndefiniteKernel("spectrum has zero trace after clamping", 0.0);
    raw /= trace;

    Spectrum s;
    s.eigenvalues = std::move(raw);
    s.support_tol = support_tol;
    const double threshold = support_tol * s.eigenvalues(0);
    s.support_count =
        std::count_if(s.eigenvalues.data(), s.eigenvalues.data() + s.eigenvalues.size(),
                      [threshold](double v) { return v > threshold; });
    return s;
}

Spectrum eigenvalues(const Eigen::MatrixXd& normalized_kernel, double support_tol) {
    if (std::abs(normalized_kernel.trace() - 1.0) > 1e-8)
        throw InvalidInput(fmt::format("normalized kernel trace is {} (expected 1)",
                                       normalized_kernel.trace()));
    Eigen::VectorXd raw = symmetric_eigenvalues_desc(normalized_kernel);

    // Re-normalization after clamping is only legitimate for numerical noise.
    const double clamped_mass = -raw.cwiseMin(0.0).sum();
    if (clamped_mass > 1e-8 && raw.minCoeff() >= -support_tol * raw.maxCoeff())
        throw IndefiniteKernel(
            fmt::format("clamping would shift the trace by {}", clamped_mass),
            raw.minCoeff());
    return spectrum_from_raw(std::move(raw), support_tol);
}

ProjectionBasis subsample_basis(Eigen::Index c, Eigen::Index m, std::uint64_t seed) {
    if (m < 1 || m > c)
        throw InvalidInput(fmt::format("subsample size {} out of range [1, {}]", m, c));
    std::vector<Eigen::Index> indices(static_cast<std::size_t>(c));
    std::iota(indices.begin(), indices.end(), Eigen::Index{0});
    // Fisher-Yates prefix; std::shuffle's sequence is not pinned by the
    // standard, this is.
    std::mt19937_64 engine(seed);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto j = i + static_cast<Eigen::Index>(engine() % static_cast<std::uint64_t>(c - i));
        std::swap(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(j)]);
    }
    indices.resize(static_cast<std::size_t>(m));

    ProjectionBasis basis;
    basis.kind = BasisKind::Subsample;
    basis.subsample_indices = indices;
    basis.columns = Eigen::MatrixXd::Zero(c, m);
    for (Eigen::Index k = 0; k < m; ++k)
        basis.columns(indices[static_cast<std::size_t>(k)], k) = 1.0;
    return basis;
}

ProjectionBasis orthogonalize_embeddings(const Eigen::MatrixXd& embeddings, Eigen::Index m) {
    const Eigen::Index n = embeddings.rows();
    const Eigen::Index d = embeddings.cols();
    if (n == 0 || d == 0) throw InvalidInput("empty embedding matrix");
    if (m < 1 || m > std::min(n, d))
        throw InvalidInput(fmt::format("basis size {} out of range [1, {}]", m, std::min(n, d)));

    // Pivoted Gram-Schmidt over the columns of E, with one reorthogonalization
    // pass. Pivoting drops (near-)dependent columns deterministically.
    Eigen::MatrixXd work = embeddings;
    const double rank_tol = 1e-10 * work.colwise().norm().maxCoeff();
    Eigen::MatrixXd q(n, m);
    std::vector<bool> used(static_cast<std::size_t>(d), false);
    Eigen::Index built = 0;
    while (built < m) {
        Eigen::Index pivot = -1;
        double best = rank_tol;
        for (Eigen::Index j = 0; j < d; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            const double norm = work.col(j).norm();
            if (norm > best) {
                best = norm;
                pivot = j;
            }
        }
        if (pivot < 0)
            throw InvalidInput(fmt::format(
                "requested basis size {} exceeds the numerical rank {} of the embeddings", m,
                built));
        used[static_cast<std::size_t>(pivot)] = true;
        Eigen::VectorXd v = work.col(pivot);
        if (built > 0) {
            auto qb = q.leftCols(built);
            v -= qb * (qb.transpose() * v);
            v -= qb * (qb.transpose() * v);
        }
        const double norm = v.norm();
        if (norm <= rank_tol) continue; // dependent after projection, try next pivot
        q.col(built) = v / norm;
        // Remove the accepted direction from the remaining columns so pivot
        // norms reflect residuals.
        for (Eigen::Index j = 0; j < d; ++j)
            if (!used[static_cast<std::size_t>(j)])
                work.col(j) -= q.col(built) * q.col(built).dot(work.col(j));
        ++built;
    }

    ProjectionBasis basis;
    basis.kind = BasisKind::EmbeddingOrthogonalized;
    basis.columns = std::move(q);
    return basis;
}

Eigen::MatrixXd project(const Eigen::MatrixXd& normalized_kernel, const ProjectionBasis& basis) {
    const auto& v = basis.columns;
    if (v.rows() != normalized_kernel.rows())
        throw InvalidInput(fmt::format("basis has {} rows, kernel is {}x{}", v.rows(),
                                       normalized_kernel.rows(), normalized_kernel.cols()));
    const Eigen::MatrixXd gram = v.transpose() * v;
    if (!gram.isApprox(Eigen::MatrixXd::Identity(v.cols(), v.cols()), 1e-8))
        throw InvalidInput("projection basis is not orthonormal");
    Eigen::MatrixXd projected = v.transpose() * normalized_kernel * v;
    projected = 0.5 * (projected + projected.transpose()).eval();
    return projected;
}

} // namespace vendi
