// SPDX-License-Identifier: Apache-2.0

#include "vendi/grad.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <vector>

namespace vendi {

namespace {

struct Eigendecomposition {
    Eigen::VectorXd values; // descending, clamped nonnegative
    Eigen::MatrixXd vectors;
};

Eigendecomposition decompose(const Eigen::MatrixXd& normalized_kernel) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(normalized_kernel);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("symmetric eigensolver failed to converge");
    Eigendecomposition d;
    d.values = solver.eigenvalues().reverse().cwiseMax(0.0);
    d.vectors = solver.eigenvectors().rowwise().reverse();
    return d;
}

} // namespace

KernelGradient grad_log_vs_wrt_kernel(const Eigen::VectorXd& eigvals,
                                      const Eigen::MatrixXd& eigvecs, Order q,
                                      double support_tol) {
    const Eigen::Index c = eigvals.size();
    if (c == 0 || eigvecs.rows() != c || eigvecs.cols() != c)
        throw InvalidInput("eigendecomposition dimensions disagree");
    const double lambda_max = eigvals.maxCoeff();
    if (lambda_max <= 0.0) throw IndefiniteKernel("no positive eigenvalue", lambda_max);
    const double threshold = support_tol * lambda_max;

    KernelGradient out;
    if (q.is_infinity) {
        // d(-log lambda_max)/dK-tilde; degenerate tops get the average of
        // u u^T over the top eigenspace (a subgradient), so the force does
        // not jump when eigenvalues cross mid-run.
        Eigen::Index top = 0;
        for (Eigen::Index i = 0; i < c; ++i)
            if (eigvals(i) >= lambda_max * (1.0 - kDegenerateGapTol)) ++top;
        out.degenerate_top = top > 1;
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(c, c);
        Eigen::Index used = 0;
        for (Eigen::Index i = 0; i < c; ++i) {
            if (eigvals(i) < lambda_max * (1.0 - kDegenerateGapTol)) continue;
            g.noalias() -= eigvecs.col(i) * eigvecs.col(i).transpose();
            ++used;
        }
        out.dlog_dK = g / (lambda_max * static_cast<double>(used));
    } else if (q.is_one()) {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(c);
        for (Eigen::Index i = 0; i < c; ++i)
            if (eigvals(i) > threshold) d(i) = -(std::log(eigvals(i)) + 1.0);
        out.dlog_dK = eigvecs * d.asDiagonal() * eigvecs.transpose();
    } else if (q.is_zero()) {
        // VS_0 is the support count, piecewise constant.
        out.dlog_dK = Eigen::MatrixXd::Zero(c, c);
    } else {
        double power_sum = 0.0;
        for (Eigen::Index i = 0; i < c; ++i)
            if (eigvals(i) > threshold) power_sum += std::pow(eigvals(i), q.value);
        Eigen::VectorXd d = Eigen::VectorXd::Zero(c);
        const double scale = q.value / ((1.0 - q.value) * power_sum);
        for (Eigen::Index i = 0; i < c; ++i)
            if (eigvals(i) > threshold) d(i) = scale * std::pow(eigvals(i), q.value - 1.0);
        out.dlog_dK = eigvecs * d.asDiagonal() * eigvecs.transpose();
    }
    out.dlog_dK = 0.5 * (out.dlog_dK + out.dlog_dK.transpose()).eval();
    return out;
}

ForceReport vendi_force(const Eigen::MatrixXd& positions, const Kernel& kernel, Order q,
                        double nu, double support_tol) {
    const Eigen::Index r = positions.rows();
    const Eigen::Index dim = positions.cols();
    ForceReport out;
    out.position_gradients = Eigen::MatrixXd::Zero(r, dim);
    if (nu == 0.0) return out;

    const Eigen::MatrixXd kn = normalize(build_kernel_matrix(kernel, positions));
    const Eigendecomposition d = decompose(kn);
    const KernelGradient g = grad_log_vs_wrt_kernel(d.values, d.vectors, q, support_tol);
    out.degenerate_top = g.degenerate_top;

    // d log VS / dx_i = sum_b (G_ib + G_bi) / C * dk(x_i, x_b)/dx_i;
    // the diagonal never moves (k(x, x) = 1 identically).
    const double inv_c = 1.0 / static_cast<double>(r);
    for (Eigen::Index i = 0; i < r; ++i) {
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
        for (Eigen::Index b = 0; b < r; ++b) {
            if (b == i) continue;
            acc += 2.0 * g.dlog_dK(i, b) * inv_c *
                   kernel_position_gradient(kernel, positions.row(i).transpose(),
                                            positions.row(b).transpose());
        }
        out.position_gradients.row(i) = nu * acc.transpose();
    }
    return out;
}

double log_vendi_score(const Eigen::MatrixXd& positions, const Kernel& kernel, Order q,
                       double support_tol) {
    const Spectrum s = eigenvalues(normalize(build_kernel_matrix(kernel, positions)), support_tol);
    return std::log(renyi_exponential(s.eigenvalues, q, s.support_tol));
}

FdCheck check_gradient_fd(const Eigen::MatrixXd& positions, const Kernel& kernel, Order q,
                          double h, double support_tol) {
    if (h != 0.0 && (h < 1e-7 || h > 1e-3))
        throw InvalidInput("finite-difference step outside [1e-7, 1e-3]");
    const ForceReport analytic = vendi_force(positions, kernel, q, 1.0, support_tol);
    FdCheck check;
    if (analytic.degenerate_top) {
        check.skipped_degenerate = true;
        return check;
    }
    // Errors are measured against the gradient's overall scale: a per-entry
    // ratio turns finite-difference roundoff on near-zero components into
    // spurious O(1) "relative" errors.
    const double scale =
        std::max(analytic.position_gradients.cwiseAbs().maxCoeff(), 1e-10);
    const std::vector<double> steps =
        h != 0.0 ? std::vector<double>{h} : std::vector<double>{1e-6, 1e-5, 1e-4};
    Eigen::MatrixXd perturbed = positions;
    for (Eigen::Index i = 0; i < positions.rows(); ++i) {
        for (Eigen::Index j = 0; j < positions.cols(); ++j) {
            double best = std::numeric_limits<double>::infinity();
            for (const double step : steps) {
                perturbed(i, j) = positions(i, j) + step;
                const double up = log_vendi_score(perturbed, kernel, q, support_tol);
                perturbed(i, j) = positions(i, j) - step;
                const double down = log_vendi_score(perturbed, kernel, q, support_tol);
                perturbed(i, j) = positions(i, j);
                const double fd = (up - down) / (2.0 * step);
                const double rel =
                    std::abs(analytic.position_gradients(i, j) - fd) /
                    std::max({std::abs(fd), std::abs(analytic.position_gradients(i, j)),
                              scale});
                best = std::min(best, rel);
            }
            check.max_rel_error = std::max(check.max_rel_error, best);
        }
    }
    return check;
}

} // namespace vendi
