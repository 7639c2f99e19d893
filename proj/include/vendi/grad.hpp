// SPDX-License-Identifier: Apache-2.0

#ifndef VENDI_GRAD_HPP
#define VENDI_GRAD_HPP

#include <Eigen/Dense>

#include "vendi/kernels.hpp"
#include "vendi/scores.hpp"
#include "vendi/spectrum.hpp"

namespace vendi {

/// Relative spectral gap below which the q = inf top eigenvalue is treated
/// as degenerate and the eigenspace-averaged subgradient is returned.
inline constexpr double kDegenerateGapTol = 1e-8;

struct KernelGradient {
    Eigen::MatrixXd dlog_dK; // d log VS_q / d K-tilde, symmetric
    bool degenerate_top = false; // q = inf with a (near-)degenerate lambda_max
};

/// d log VS_q / d K-tilde from an eigendecomposition of the normalized
/// kernel (eigvals clamped nonnegative). Eigenvalues below
/// support_tol * lambda_max contribute zero.
[[nodiscard]] KernelGradient grad_log_vs_wrt_kernel(const Eigen::VectorXd& eigvals,
                                                    const Eigen::MatrixXd& eigvecs, Order q,
                                                    double support_tol = kDefaultSupportTol);

struct ForceReport {
    Eigen::MatrixXd position_gradients; // R x d, nu * d log VS_q / d x_i
    bool degenerate_top = false;
};

/// The Vendi force: nu * gradient of log VS_q with respect to each replica
/// position, assembled by the chain rule through the kernel matrix.
[[nodiscard]] ForceReport vendi_force(const Eigen::MatrixXd& positions, const Kernel& kernel,
                                      Order q, double nu,
                                      double support_tol = kDefaultSupportTol);

/// log VS_q of a replica configuration (used by the finite-difference check).
[[nodiscard]] double log_vendi_score(const Eigen::MatrixXd& positions, const Kernel& kernel,
                                     Order q, double support_tol = kDefaultSupportTol);

struct FdCheck {
    double max_rel_error = 0.0;
    bool skipped_degenerate = false;
};

/// Central-difference verification of the analytic force (nu = 1), per
/// coordinate. Errors are relative to the largest gradient component
/// (floor 1e-10), so near-zero components do not dominate the report.
/// h = 0 picks the step per coordinate from {1e-6, 1e-5, 1e-4} by best
/// agreement (truncation error grows sharply when the spectrum has small
/// eigenvalues and q < 1); an explicit h must lie in [1e-7, 1e-3].
[[nodiscard]] FdCheck check_gradient_fd(const Eigen::MatrixXd& positions, const Kernel& kernel,
                                        Order q, double h = 0.0,
                                        double support_tol = kDefaultSupportTol);

} // namespace vendi

#endif // VENDI_GRAD_HPP
