// SPDX-License-Identifier: Apache-2.0

#ifndef VENDI_MATRIX_IO_HPP
#define VENDI_MATRIX_IO_HPP

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "vendi/errors.hpp"

namespace vendi {

/// Binary matrix layout: magic "VNDM1\0", two little-endian uint64
/// (rows, cols), then rows * cols little-endian IEEE-754 doubles,
/// row-major.
inline constexpr char kMatrixMagic[6] = {'V', 'N', 'D', 'M', '1', '\0'};

struct NamedTable {
    std::vector<std::string> columns;
    Eigen::MatrixXd values;
};

/// Reads a matrix file, dispatching on the magic bytes: binary when they
/// match, CSV otherwise (an optional non-numeric header line is skipped).
[[nodiscard]] Eigen::MatrixXd read_matrix(const std::filesystem::path& path);

/// CSV with a required header line of column names.
[[nodiscard]] NamedTable read_named_table(const std::filesystem::path& path);

void write_matrix_binary(const std::filesystem::path& path, const Eigen::MatrixXd& m);
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& header = {});

/// Write-to-temporary-then-rename, so readers never see partial files.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

/// Full round-trip precision for doubles in CSV output.
[[nodiscard]] std::string format_double(double v);

} // namespace vendi

#endif // VENDI_MATRIX_IO_HPP
