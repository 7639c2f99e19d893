// SPDX-License-Identifier: Apache-2.0

#ifndef VENDI_ERRORS_HPP
#define VENDI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vendi {

/// Input data that violates a precondition (bad dimensions, unnormalized
/// rows, malformed files, ...).
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// A kernel matrix with an eigenvalue more negative than the clamping
/// tolerance allows. Vendi scores are undefined on indefinite kernels.
class IndefiniteKernel : public std::runtime_error {
public:
    IndefiniteKernel(const std::string& what, double eigenvalue)
        : std::runtime_error(what), offending_eigenvalue(eigenvalue) {}
    double offending_eigenvalue;
};

/// A simulation produced a non-finite state.
class Divergence : public std::runtime_error {
public:
    explicit Divergence(const std::string& what) : std::runtime_error(what) {}
};

} // namespace vendi

#endif // VENDI_ERRORS_HPP
