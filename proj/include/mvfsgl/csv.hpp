#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mvfsgl/types.hpp"

namespace mvfsgl {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline double parse_cell(std::string_view cell, const std::string& path, Index line, Index col) {
    cell = trim(cell);
    double value = 0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
        throw std::runtime_error(path + ":" + std::to_string(line) + ": column " + std::to_string(col) +
                                 ": not a number: '" + std::string(cell) + "'");
    return value;
}

}  // namespace detail

/// Reads a dense matrix from a comma-separated text file, one matrix row per
/// line, '.' as the decimal mark. `skip_header` drops the first line.
template <typename Scalar = double>
Matrix<Scalar> load_matrix_csv(const std::string& path, bool skip_header = false, bool transpose = false) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);

    std::vector<std::vector<Scalar>> rows;
    std::string line;
    Index lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (skip_header && lineno == 1) continue;
        if (detail::trim(line).empty()) {
            if (in.peek() == std::ifstream::traits_type::eof()) break;  // trailing newline
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty row");
        }
        std::vector<Scalar> row;
        std::string_view rest(line);
        Index col = 0;
        for (;;) {
            ++col;
            const size_t comma = rest.find(',');
            const std::string_view cell = comma == std::string_view::npos ? rest : rest.substr(0, comma);
            row.push_back(static_cast<Scalar>(detail::parse_cell(cell, path, lineno, col)));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (!rows.empty() && rows.front().size() != row.size())
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(rows.front().size()) + " columns, found " +
                                     std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path + ": empty file");

    Matrix<Scalar> m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    if (transpose) return m.transpose();
    return m;
}

/// Writes with enough digits that reading the file back reproduces every
/// entry exactly.
template <typename Derived>
void save_matrix_csv(const std::string& path, const Eigen::MatrixBase<Derived>& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    constexpr int digits = std::numeric_limits<typename Derived::Scalar>::max_digits10;
    char buf[64];
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.*g", digits, static_cast<double>(m(i, j)));
            if (j) out << ',';
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

/// One integer label per line.
inline IntVector load_labels_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::vector<int> values;
    std::string line;
    Index lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view cell = detail::trim(line);
        if (cell.empty()) {
            if (in.peek() == std::ifstream::traits_type::eof()) break;
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty label");
        }
        int value = 0;
        const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": not an integer: '" +
                                     std::string(cell) + "'");
        values.push_back(value);
    }
    if (values.empty()) throw std::runtime_error(path + ": empty file");
    return Eigen::Map<const IntVector>(values.data(), static_cast<Index>(values.size()));
}

inline void save_labels_csv(const std::string& path, const IntVector& labels) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    for (Index i = 0; i < labels.size(); ++i) out << labels[i] << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace mvfsgl
