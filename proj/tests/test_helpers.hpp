#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

#include "stairsplit/matrix.hpp"

namespace stairsplit::testing {

inline Matrix make_matrix(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = rows.begin()->size();
    Matrix A(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        std::size_t j = 0;
        for (double x : row) A(i, j++) = x;
        ++i;
    }
    return A;
}

inline double max_abs_diff(const Matrix& A, const Matrix& B) {
    double worst = 0.0;
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j)
            worst = std::max(worst, std::abs(A(i, j) - B(i, j)));
    return worst;
}

inline double max_abs_diff(const Vector& a, const Vector& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace stairsplit::testing
