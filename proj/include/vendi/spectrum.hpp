// SPDX-License-Identifier: Apache-2.0

#ifndef VENDI_SPECTRUM_HPP
#define VENDI_SPECTRUM_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "vendi/errors.hpp"

namespace vendi {

/// Relative eigenvalue threshold below which spectral mass is treated as
/// numerical noise. Aggressive on purpose: for q < 1 even tiny spurious
/// eigenvalues contribute non-negligibly.
inline constexpr double kDefaultSupportTol = 1e-12;

/// Eigenvalues of a trace-normalized kernel, sorted descending, clamped
/// nonnegative, with the support convention attached.
struct Spectrum {
    Eigen::VectorXd eigenvalues; // descending, sum 1
    double support_tol = kDefaultSupportTol;
    Eigen::Index support_count = 0;

    [[nodiscard]] double lambda_max() const { return eigenvalues.size() ? eigenvalues(0) : 0.0; }
    [[nodiscard]] double lambda_min() const {
        return eigenvalues.size() ? eigenvalues(eigenvalues.size() - 1) : 0.0;
    }
    [[nodiscard]] double trace() const { return eigenvalues.sum(); }
};

enum class BasisKind { Subsample, EmbeddingOrthogonalized };

/// Orthonormal C x m projection basis for Rayleigh-Ritz.
struct ProjectionBasis {
    Eigen::MatrixXd columns;
    BasisKind kind = BasisKind::Subsample;
    std::vector<Eigen::Index> subsample_indices; // populated for Subsample bases
};

/// K / C. Requires a unit diagonal within 1e-9.
[[nodiscard]] Eigen::MatrixXd normalize(const Eigen::MatrixXd& kernel_matrix);

/// Spectrum of a trace-1 symmetric matrix. Eigenvalues within
/// [-support_tol * lambda_max, 0) are clamped to zero; anything more
/// negative raises IndefiniteKernel.
[[nodiscard]] Spectrum eigenvalues(const Eigen::MatrixXd& normalized_kernel,
                                   double support_tol = kDefaultSupportTol);

/// Spectrum from raw eigenvalues of a (possibly trace-deficient) projected
/// matrix: clamps, renormalizes by trace, sorts, counts support.
[[nodiscard]] Spectrum spectrum_from_raw(Eigen::VectorXd raw, double support_tol);

/// m distinct indicator columns drawn uniformly without replacement.
[[nodiscard]] ProjectionBasis subsample_basis(Eigen::Index c, Eigen::Index m, std::uint64_t seed);

/// Orthonormal basis of the embedding column space, via pivoted
/// Gram-Schmidt with reorthogonalization. Deterministic. Errors if m
/// exceeds the numerical rank of E.
[[nodiscard]] ProjectionBasis orthogonalize_embeddings(const Eigen::MatrixXd& embeddings,
                                                       Eigen::Index m);

/// V^T Kn V. Ritz values lower-approximate the top eigenvalues of Kn and
/// are exact when span(V) contains its range.
[[nodiscard]] Eigen::MatrixXd project(const Eigen::MatrixXd& normalized_kernel,
                                      const ProjectionBasis& basis);

/// Raw symmetric eigenvalues, descending, no clamping. Shared helper.
[[nodiscard]] Eigen::VectorXd symmetric_eigenvalues_desc(const Eigen::MatrixXd& m);

} // namespace vendi

#endif // VENDI_SPECTRUM_HPP
