// SPDX-License-Identifier: Apache-2.0

#include "vendi/matrix_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

namespace vendi {

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary matrix I/O assumes a little-endian host");

std::vector<double> parse_csv_row(const std::string& line, bool* numeric) {
    std::vector<double> row;
    *numeric = true;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        std::size_t comma = line.find(',', pos);
        if (comma == std::string::npos) comma = line.size();
        std::size_t lo = pos;
        std::size_t hi = comma;
        while (lo < hi && std::isspace(static_cast<unsigned char>(line[lo]))) ++lo;
        while (hi > lo && std::isspace(static_cast<unsigned char>(line[hi - 1]))) --hi;
        if (hi > lo) {
            double v = 0.0;
            const auto res = std::from_chars(line.data() + lo, line.data() + hi, v);
            if (res.ec != std::errc{} || res.ptr != line.data() + hi) {
                *numeric = false;
                return {};
            }
            row.push_back(v);
        } else if (comma < line.size() || !row.empty()) {
            *numeric = false; // empty field
            return {};
        }
        pos = comma + 1;
        if (comma == line.size()) break;
    }
    return row;
}

Eigen::MatrixXd read_matrix_binary(std::ifstream& in, const std::filesystem::path& path) {
    std::array<std::uint64_t, 2> dims{};
    if (!in.read(reinterpret_cast<char*>(dims.data()), sizeof(dims)))
        throw InvalidInput(fmt::format("{}: truncated binary header", path.string()));
    const auto rows = static_cast<Eigen::Index>(dims[0]);
    const auto cols = static_cast<Eigen::Index>(dims[1]);
    if (rows <= 0 || cols <= 0 || dims[0] > (1u << 24) || dims[1] > (1u << 24))
        throw InvalidInput(fmt::format("{}: implausible dimensions {}x{}", path.string(),
                                       dims[0], dims[1]));
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> m(rows, cols);
    if (!in.read(reinterpret_cast<char*>(m.data()),
                 static_cast<std::streamsize>(sizeof(double)) * rows * cols))
        throw InvalidInput(fmt::format("{}: payload shorter than {}x{} doubles", path.string(),
                                       dims[0], dims[1]));
    if (in.get() != std::ifstream::traits_type::eof())
        throw InvalidInput(fmt::format("{}: trailing bytes after {}x{} payload", path.string(),
                                       dims[0], dims[1]));
    return m;
}

} // namespace

Eigen::MatrixXd read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput(fmt::format("cannot open {}", path.string()));

    std::array<char, sizeof(kMatrixMagic)> head{};
    in.read(head.data(), head.size());
    if (in.gcount() == static_cast<std::streamsize>(head.size()) &&
        std::memcmp(head.data(), kMatrixMagic, sizeof(kMatrixMagic)) == 0)
        return read_matrix_binary(in, path);

    // CSV path. Re-open as text.
    in.close();
    std::ifstream text(path);
    std::string line;
    std::vector<std::vector<double>> rows;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(text, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        bool numeric = false;
        auto row = parse_csv_row(line, &numeric);
        if (!numeric) {
            if (first) { first = false; continue; } // optional header line
            throw InvalidInput(fmt::format("{}:{}: non-numeric row", path.string(), lineno));
        }
        first = false;
        if (!rows.empty() && row.size() != rows.front().size())
            throw InvalidInput(fmt::format("{}:{}: ragged row ({} fields, expected {})",
                                           path.string(), lineno, row.size(),
                                           rows.front().size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InvalidInput(fmt::format("{}: no numeric data", path.string()));
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

NamedTable read_named_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput(fmt::format("cannot open {}", path.string()));
    std::string line;
    if (!std::getline(in, line))
        throw InvalidInput(fmt::format("{}: empty file", path.string()));
    if (!line.empty() && line.back() == '\r') line.pop_back();

    NamedTable table;
    {
        std::stringstream header(line);
        std::string name;
        while (std::getline(header, name, ',')) {
            while (!name.empty() && std::isspace(static_cast<unsigned char>(name.front())))
                name.erase(name.begin());
            while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back())))
                name.pop_back();
            table.columns.push_back(name);
        }
    }
    if (table.columns.empty())
        throw InvalidInput(fmt::format("{}: missing header", path.string()));

    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        bool numeric = false;
        auto row = parse_csv_row(line, &numeric);
        if (!numeric || row.size() != table.columns.size())
            throw InvalidInput(
                fmt::format("{}:{}: expected {} numeric fields", path.string(), lineno,
                            table.columns.size()));
        rows.push_back(std::move(row));
    }
    table.values.resize(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(table.columns.size()));
    for (Eigen::Index i = 0; i < table.values.rows(); ++i)
        for (Eigen::Index j = 0; j < table.values.cols(); ++j)
            table.values(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return table;
}

void write_matrix_binary(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput(fmt::format("cannot write {}", path.string()));
    out.write(kMatrixMagic, sizeof(kMatrixMagic));
    const std::array<std::uint64_t, 2> dims{static_cast<std::uint64_t>(m.rows()),
                                            static_cast<std::uint64_t>(m.cols())};
    out.write(reinterpret_cast<const char*>(dims.data()), sizeof(dims));
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
    out.write(reinterpret_cast<const char*>(rm.data()),
              static_cast<std::streamsize>(sizeof(double)) * m.rows() * m.cols());
    if (!out) throw std::runtime_error(fmt::format("short write to {}", path.string()));
}

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& header) {
    std::string content;
    if (!header.empty()) {
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (j) content += ',';
            content += header[j];
        }
        content += '\n';
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) content += ',';
            content += format_double(m(i, j));
        }
        content += '\n';
    }
    write_text_atomic(path, content);
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidInput(fmt::format("cannot write {}", tmp.string()));
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error(fmt::format("short write to {}", tmp.string()));
    }
    std::filesystem::rename(tmp, path);
}

} // namespace vendi
