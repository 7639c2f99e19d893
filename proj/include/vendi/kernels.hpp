// SPDX-License-Identifier: Apache-2.0

#ifndef VENDI_KERNELS_HPP
#define VENDI_KERNELS_HPP

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

#include "vendi/errors.hpp"

namespace vendi {

/// Categorical item with a shape and a color attribute. Categories are
/// plain strings drawn from whatever alphabet the caller uses.
struct ShapeColorToken {
    std::string shape;
    std::string color;

    bool operator==(const ShapeColorToken&) const = default;
};

/// An element of a collection: either a real coordinate vector or a
/// shape-color token. Collections are homogeneous in the alternative held.
using Item = std::variant<Eigen::VectorXd, ShapeColorToken>;

enum class KernelKind { Linear, Cosine, Rbf, Ratio1d, ShapeColor };

/// Similarity function descriptor. Every kind satisfies k(x,x) = 1 and
/// symmetry; ratio1d at the origin is pinned to 1 by convention.
struct Kernel {
    KernelKind kind = KernelKind::Rbf;
    double gamma = 1.0;               // rbf bandwidth, > 0
    double partial_match_weight = 0.5; // shape-color: similarity when exactly one attribute matches

    static Kernel linear() { return {KernelKind::Linear}; }
    static Kernel cosine() { return {KernelKind::Cosine}; }
    static Kernel rbf(double gamma) { return {KernelKind::Rbf, gamma}; }
    static Kernel ratio1d() { return {KernelKind::Ratio1d}; }
    static Kernel shape_color(double weight = 0.5) { return {KernelKind::ShapeColor, 1.0, weight}; }
};

/// Ordered, non-empty list of items of one kind.
struct Collection {
    std::vector<Item> items;

    [[nodiscard]] Eigen::Index size() const { return static_cast<Eigen::Index>(items.size()); }
};

[[nodiscard]] double eval_kernel(const Kernel& kernel, const Item& a, const Item& b);

/// Scalar ratio kernel 1 - |x-x'| / (|x|+|x'|), with k(0,0) = 1.
/// Applied to the first coordinate when given vectors.
[[nodiscard]] double ratio1d_similarity(double x, double y);

/// C x C symmetric kernel matrix with an exactly-unit diagonal
/// (the diagonal is written, not computed).
[[nodiscard]] Eigen::MatrixXd build_kernel_matrix(const Kernel& kernel, const Collection& c);

/// Convenience overload for row-per-item coordinate matrices.
[[nodiscard]] Eigen::MatrixXd build_kernel_matrix(const Kernel& kernel, const Eigen::MatrixXd& positions);

/// d k(a, b) / d a for differentiable kernel kinds (rbf, ratio1d).
/// Ratio1d acts on coordinate 0 only; at its non-differentiable points
/// (a = b or a = 0) the gradient is 0 by convention.
[[nodiscard]] Eigen::VectorXd kernel_position_gradient(const Kernel& kernel,
                                                       const Eigen::VectorXd& a,
                                                       const Eigen::VectorXd& b);

} // namespace vendi

#endif // VENDI_KERNELS_HPP
