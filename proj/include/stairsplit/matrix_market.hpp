#pragma once

// Matrix Market I/O (array and coordinate formats, real general) plus the
// plain-text block partition sidecar (one block size per line).

#include <cctype>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stairsplit/matrix.hpp"

namespace stairsplit {

namespace detail {

[[noreturn]] inline void parse_error(const std::string& path, std::size_t line,
                                     const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

inline std::string lowercase(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace detail

inline Matrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) detail::parse_error(path, 1, "empty file");
    ++lineno;
    std::istringstream header(detail::lowercase(line));
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%matrixmarket" || object != "matrix")
        detail::parse_error(path, lineno, "not a Matrix Market file");
    if (format != "array" && format != "coordinate")
        detail::parse_error(path, lineno, "unsupported format '" + format + "'");
    if (field != "real" && field != "integer")
        detail::parse_error(path, lineno, "unsupported field '" + field + "'");
    if (symmetry != "general")
        detail::parse_error(path, lineno, "unsupported symmetry '" + symmetry + "'");

    auto next_data_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            std::size_t k = line.find_first_not_of(" \t\r");
            if (k == std::string::npos || line[k] == '%') continue;
            return true;
        }
        return false;
    };

    if (!next_data_line()) detail::parse_error(path, lineno, "missing size line");
    std::istringstream size_line(line);
    std::size_t rows = 0, cols = 0, nnz = 0;
    if (format == "array") {
        if (!(size_line >> rows >> cols)) detail::parse_error(path, lineno, "bad size line");
    } else {
        if (!(size_line >> rows >> cols >> nnz)) detail::parse_error(path, lineno, "bad size line");
    }
    Matrix A(rows, cols);

    if (format == "array") {
        // column-major dense values
        for (std::size_t j = 0; j < cols; ++j)
            for (std::size_t i = 0; i < rows; ++i) {
                if (!next_data_line()) detail::parse_error(path, lineno, "missing value");
                std::istringstream v(line);
                double x;
                if (!(v >> x)) detail::parse_error(path, lineno, "bad value '" + line + "'");
                A(i, j) = x;
            }
    } else {
        for (std::size_t k = 0; k < nnz; ++k) {
            if (!next_data_line()) detail::parse_error(path, lineno, "missing entry");
            std::istringstream v(line);
            std::size_t i, j;
            double x;
            if (!(v >> i >> j >> x)) detail::parse_error(path, lineno, "bad entry '" + line + "'");
            if (i < 1 || i > rows || j < 1 || j > cols)
                detail::parse_error(path, lineno, "index out of range");
            A(i - 1, j - 1) = x;
        }
    }
    if (!A.all_finite()) throw std::runtime_error(path + ": nonfinite entries");
    return A;
}

// Dense array format, 17 significant digits (doubles round-trip exactly).
inline void write_matrix_market(const Matrix& A, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "%%MatrixMarket matrix array real general\n";
    out << A.rows() << " " << A.cols() << "\n";
    char buf[64];
    for (std::size_t j = 0; j < A.cols(); ++j)
        for (std::size_t i = 0; i < A.rows(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", A(i, j));
            out << buf << "\n";
        }
    if (!out) throw std::runtime_error("failed writing " + path);
}

inline BlockPartition read_partition(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::size_t> sizes;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t k = line.find_first_not_of(" \t\r");
        if (k == std::string::npos || line[k] == '#') continue;
        std::istringstream v(line);
        long long size;
        if (!(v >> size) || size <= 0)
            detail::parse_error(path, lineno, "bad block size '" + line + "'");
        sizes.push_back(static_cast<std::size_t>(size));
    }
    if (sizes.empty()) throw std::runtime_error(path + ": empty partition");
    return BlockPartition(sizes);
}

// Matrix plus optional partition sidecar; the sidecar must sum to the
// matrix dimension.
inline std::pair<Matrix, std::optional<BlockPartition>> load_generator(
    const std::string& matrix_path, const std::optional<std::string>& partition_path = std::nullopt) {
    Matrix A = read_matrix_market(matrix_path);
    std::optional<BlockPartition> partition;
    if (partition_path) {
        partition = read_partition(*partition_path);
        if (partition->total() != A.rows())
            throw std::runtime_error(*partition_path + ": partition does not sum to " +
                                     std::to_string(A.rows()));
    }
    return {std::move(A), std::move(partition)};
}

}  // namespace stairsplit
