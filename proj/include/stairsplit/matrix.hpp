#pragma once

// Dense real matrices and the structural predicates used throughout the
// library: Hessenberg pattern checks, Z-matrix / M-matrix certificates,
// part extraction (diagonal, triangles, tridiagonal) in scalar and block
// granularity.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stairsplit {

using Vector = std::vector<double>;

class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix I(n, n);
        for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
        return I;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(),
                           [](double x) { return std::isfinite(x); });
    }

    Matrix transposed() const {
        Matrix T(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) T(j, i) = (*this)(i, j);
        return T;
    }

    // max |a_ij|
    double max_abs() const {
        double m = 0.0;
        for (double x : data_) m = std::max(m, std::abs(x));
        return m;
    }

    // operator norm induced by the max norm (maximum absolute row sum)
    double inf_norm() const {
        double m = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
            m = std::max(m, s);
        }
        return m;
    }

    Matrix& operator+=(const Matrix& B) {
        require_same_shape(B);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += B.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& B) {
        require_same_shape(B);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= B.data_[k];
        return *this;
    }
    Matrix& operator*=(double s) {
        for (double& x : data_) x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix A, const Matrix& B) { return A += B; }
    friend Matrix operator-(Matrix A, const Matrix& B) { return A -= B; }
    friend Matrix operator*(Matrix A, double s) { return A *= s; }
    friend Matrix operator*(double s, Matrix A) { return A *= s; }

    friend Matrix operator*(const Matrix& A, const Matrix& B) {
        if (A.cols_ != B.rows_) throw std::invalid_argument("matrix product: shape mismatch");
        Matrix C(A.rows_, B.cols_);
        for (std::size_t i = 0; i < A.rows_; ++i)
            for (std::size_t k = 0; k < A.cols_; ++k) {
                const double a = A(i, k);
                if (a == 0.0) continue;
                for (std::size_t j = 0; j < B.cols_; ++j) C(i, j) += a * B(k, j);
            }
        return C;
    }

    friend Vector operator*(const Matrix& A, const Vector& x) {
        if (A.cols_ != x.size()) throw std::invalid_argument("matvec: shape mismatch");
        Vector y(A.rows_, 0.0);
        for (std::size_t i = 0; i < A.rows_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < A.cols_; ++j) s += A(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

    friend bool operator==(const Matrix& A, const Matrix& B) {
        return A.rows_ == B.rows_ && A.cols_ == B.cols_ && A.data_ == B.data_;
    }

private:
    void require_same_shape(const Matrix& B) const {
        if (rows_ != B.rows_ || cols_ != B.cols_)
            throw std::invalid_argument("matrix sum: shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline double max_abs(const Vector& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline Matrix kron(const Matrix& A, const Matrix& B) {
    Matrix C(A.rows() * B.rows(), A.cols() * B.cols());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) {
            const double a = A(i, j);
            if (a == 0.0) continue;
            for (std::size_t p = 0; p < B.rows(); ++p)
                for (std::size_t q = 0; q < B.cols(); ++q)
                    C(i * B.rows() + p, j * B.cols() + q) = a * B(p, q);
        }
    return C;
}

// Relabel states by the reversal permutation: (J A J)_ij = A_{n-1-i, n-1-j}.
// Turns an upper Hessenberg matrix into a lower Hessenberg one and vice versa.
inline Matrix reversed(const Matrix& A) {
    Matrix R(A.rows(), A.cols());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j)
            R(i, j) = A(A.rows() - 1 - i, A.cols() - 1 - j);
    return R;
}

// Ordered block sizes (n_1, ..., n_m) partitioning the index range of a matrix.
struct BlockPartition {
    std::vector<std::size_t> sizes;

    BlockPartition() = default;
    explicit BlockPartition(std::vector<std::size_t> s) : sizes(std::move(s)) {
        for (std::size_t b : sizes)
            if (b == 0) throw std::invalid_argument("block sizes must be positive");
    }

    static BlockPartition uniform(std::size_t blocks, std::size_t block_size) {
        return BlockPartition(std::vector<std::size_t>(blocks, block_size));
    }

    // trivial partition: every index its own block
    static BlockPartition scalar(std::size_t n) {
        return BlockPartition(std::vector<std::size_t>(n, 1));
    }

    std::size_t total() const {
        return std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
    }
    std::size_t block_count() const { return sizes.size(); }

    std::size_t offset(std::size_t b) const {
        std::size_t o = 0;
        for (std::size_t k = 0; k < b; ++k) o += sizes[k];
        return o;
    }

    // block index of scalar index i
    std::size_t block_of(std::size_t i) const {
        std::size_t o = 0;
        for (std::size_t b = 0; b < sizes.size(); ++b) {
            o += sizes[b];
            if (i < o) return b;
        }
        throw std::out_of_range("index outside partition");
    }

    // map each scalar index to its block, for O(1) lookups in hot loops
    std::vector<std::size_t> index_to_block() const {
        std::vector<std::size_t> map(total());
        std::size_t o = 0;
        for (std::size_t b = 0; b < sizes.size(); ++b)
            for (std::size_t k = 0; k < sizes[b]; ++k) map[o++] = b;
        return map;
    }
};

enum class Part { Diag, Tril, Triu, StrictTril, StrictTriu, Tridiag };

namespace detail {

inline bool part_keeps(Part part, std::size_t i, std::size_t j) {
    switch (part) {
        case Part::Diag: return i == j;
        case Part::Tril: return j <= i;
        case Part::Triu: return j >= i;
        case Part::StrictTril: return j < i;
        case Part::StrictTriu: return j > i;
        case Part::Tridiag: return (i >= j ? i - j : j - i) <= 1;
    }
    return false;
}

inline void check_partition(const Matrix& A, const BlockPartition& partition) {
    if (partition.total() != A.rows())
        throw std::invalid_argument("partition mismatch");
}

}  // namespace detail

// Entries of A on the selected pattern, zeros elsewhere. With a partition the
// pattern is applied at block granularity (block diagonal, block triangle, ...).
inline Matrix part_extract(const Matrix& A, Part part,
                           const std::optional<BlockPartition>& partition = std::nullopt) {
    if (!A.is_square()) throw std::invalid_argument("part_extract: matrix not square");
    const std::size_t n = A.rows();
    Matrix R(n, n);
    if (!partition) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (detail::part_keeps(part, i, j)) R(i, j) = A(i, j);
        return R;
    }
    detail::check_partition(A, *partition);
    const auto blk = partition->index_to_block();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (detail::part_keeps(part, blk[i], blk[j])) R(i, j) = A(i, j);
    return R;
}

// |A_ij| <= tol for all j > i+1, blockwise when a partition is given.
inline bool is_lower_hessenberg(const Matrix& A,
                                const std::optional<BlockPartition>& partition = std::nullopt,
                                double tol = 0.0) {
    if (!A.is_square()) throw std::invalid_argument("is_lower_hessenberg: matrix not square");
    const std::size_t n = A.rows();
    if (!partition) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 2; j < n; ++j)
                if (std::abs(A(i, j)) > tol) return false;
        return true;
    }
    detail::check_partition(A, *partition);
    const auto blk = partition->index_to_block();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (blk[j] > blk[i] + 1 && std::abs(A(i, j)) > tol) return false;
    return true;
}

inline bool is_z_matrix(const Matrix& A, double tol = 0.0) {
    if (!A.is_square()) throw std::invalid_argument("is_z_matrix: matrix not square");
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j)
            if (i != j && A(i, j) > tol) return false;
    return true;
}

// Witness that a Z-matrix A is an M-matrix: u > 0 with v = A u >= 0, v != 0.
struct MMatrixCertificate {
    Vector u;
    Vector v;
    double residual_norm = 0.0;
};

namespace detail {

inline std::optional<MMatrixCertificate> try_certificate(const Matrix& A, const Vector& u,
                                                         double tol) {
    for (double ui : u)
        if (!(ui > 0.0)) return std::nullopt;
    Vector v = A * u;
    bool some_positive = false;
    for (double vi : v) {
        if (vi < -tol) return std::nullopt;
        if (vi > tol) some_positive = true;
    }
    if (!some_positive) return std::nullopt;
    return MMatrixCertificate{u, v, 0.0};
}

// A few power-iteration steps on the nonnegative part s*I - A give a
// Perron-like direction; for an irreducible M-matrix it is positive.
inline Vector perron_like_vector(const Matrix& A, int steps = 100) {
    const std::size_t n = A.rows();
    double shift = 0.0;
    for (std::size_t i = 0; i < n; ++i) shift = std::max(shift, A(i, i));
    Vector x(n, 1.0);
    for (int it = 0; it < steps; ++it) {
        Vector y(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double s = (shift + 1.0) * x[i];
            for (std::size_t j = 0; j < n; ++j) s -= A(i, j) * x[j];
            y[i] = s;
        }
        double m = max_abs(y);
        if (m == 0.0) return x;
        for (double& yi : y) yi /= m;
        x = std::move(y);
    }
    return x;
}

}  // namespace detail

// True iff the directed graph with an edge i -> j whenever i != j and
// A_ij != 0 is strongly connected.
inline bool is_irreducible(const Matrix& A) {
    if (!A.is_square()) throw std::invalid_argument("is_irreducible: matrix not square");
    const std::size_t n = A.rows();
    if (n == 0) return true;
    auto reaches_all = [&](bool transpose) {
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        std::size_t count = 1;
        while (!stack.empty()) {
            std::size_t i = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < n; ++j) {
                if (seen[j] || i == j) continue;
                const double a = transpose ? A(j, i) : A(i, j);
                if (a != 0.0) {
                    seen[j] = 1;
                    ++count;
                    stack.push_back(j);
                }
            }
        }
        return count == n;
    };
    return reaches_all(false) && reaches_all(true);
}

}  // namespace stairsplit
