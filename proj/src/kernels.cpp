// SPDX-License-Identifier: Apache-2.0

#include "vendi/kernels.hpp"

#include <cmath>
#include <fmt/format.h>

namespace vendi {

namespace {

double sign(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

const Eigen::VectorXd& as_vector(const Item& item) {
    const auto* v = std::get_if<Eigen::VectorXd>(&item);
    if (!v) throw InvalidInput("expected a real-vector item for this kernel kind");
    return *v;
}

const ShapeColorToken& as_token(const Item& item) {
    const auto* t = std::get_if<ShapeColorToken>(&item);
    if (!t) throw InvalidInput("expected a shape-color item for this kernel kind");
    return *t;
}

void check_dims(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size())
        throw InvalidInput(fmt::format("dimension mismatch: {} vs {}", a.size(), b.size()));
}

} // namespace

double ratio1d_similarity(double x, double y) {
    if (x == y) return 1.0; // covers the origin convention k(0,0) = 1
    const double s = std::abs(x) + std::abs(y);
    return 1.0 - std::abs(x - y) / s;
}

double eval_kernel(const Kernel& kernel, const Item& a, const Item& b) {
    switch (kernel.kind) {
        case KernelKind::Linear: {
            const auto& va = as_vector(a);
            const auto& vb = as_vector(b);
            check_dims(va, vb);
            return &va == &vb || va == vb ? 1.0 : va.dot(vb);
        }
        case KernelKind::Cosine: {
            const auto& va = as_vector(a);
            const auto& vb = as_vector(b);
            check_dims(va, vb);
            const double denom = va.norm() * vb.norm();
            if (denom == 0.0) throw InvalidInput("cosine kernel: zero-norm item");
            return va == vb ? 1.0 : va.dot(vb) / denom;
        }
        case KernelKind::Rbf: {
            const auto& va = as_vector(a);
            const auto& vb = as_vector(b);
            check_dims(va, vb);
            return std::exp(-kernel.gamma * (va - vb).squaredNorm());
        }
        case KernelKind::Ratio1d: {
            const auto& va = as_vector(a);
            const auto& vb = as_vector(b);
            if (va.size() < 1 || vb.size() < 1)
                throw InvalidInput("ratio1d kernel: empty coordinate vector");
            return ratio1d_similarity(va(0), vb(0));
        }
        case KernelKind::ShapeColor: {
            const auto& ta = as_token(a);
            const auto& tb = as_token(b);
            const bool shape = ta.shape == tb.shape;
            const bool color = ta.color == tb.color;
            if (shape && color) return 1.0;
            if (shape || color) return kernel.partial_match_weight;
            return 0.0;
        }
    }
    throw InvalidInput("unknown kernel kind");
}

Eigen::MatrixXd build_kernel_matrix(const Kernel& kernel, const Collection& c) {
    const Eigen::Index n = c.size();
    if (n == 0) throw InvalidInput("cannot build a kernel matrix over an empty collection");
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        k(i, i) = 1.0; // written, not computed
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = eval_kernel(kernel, c.items[static_cast<std::size_t>(i)],
                                         c.items[static_cast<std::size_t>(j)]);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

Eigen::MatrixXd build_kernel_matrix(const Kernel& kernel, const Eigen::MatrixXd& positions) {
    Collection c;
    c.items.reserve(static_cast<std::size_t>(positions.rows()));
    for (Eigen::Index i = 0; i < positions.rows(); ++i)
        c.items.emplace_back(Eigen::VectorXd(positions.row(i).transpose()));
    return build_kernel_matrix(kernel, c);
}

Eigen::VectorXd kernel_position_gradient(const Kernel& kernel, const Eigen::VectorXd& a,
                                         const Eigen::VectorXd& b) {
    check_dims(a, b);
    switch (kernel.kind) {
        case KernelKind::Rbf: {
            const double k = std::exp(-kernel.gamma * (a - b).squaredNorm());
            return -2.0 * kernel.gamma * k * (a - b);
        }
        case KernelKind::Ratio1d: {
            Eigen::VectorXd g = Eigen::VectorXd::Zero(a.size());
            const double x = a(0);
            const double y = b(0);
            // Non-differentiable at x = y and x = 0: gradient 0 by convention.
            if (x == y || x == 0.0) return g;
            const double s = std::abs(x) + std::abs(y);
            const double d = std::abs(x - y);
            g(0) = -(sign(x - y) * s - d * sign(x)) / (s * s);
            return g;
        }
        default:
            throw InvalidInput("position gradients are defined for rbf and ratio1d kernels only");
    }
}

} // namespace vendi
