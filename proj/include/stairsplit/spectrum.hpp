#pragma once

// Dense nonsymmetric eigenvalue computation and the spectral quantities
// derived from it: the spectral radius rho(P), the convergence factor
// gamma(P) (largest modulus over eigenvalues != 1), and the iteration
// count needed to push rho^k below a threshold.
//
// The eigensolver is the classical pair orthes/hqr: Householder similarity
// reduction to upper Hessenberg form followed by the Francis double-shift
// QR iteration with deflation (Martin, Peters & Wilkinson; the EISPACK
// organization). Eigenvalues only; no Schur vectors are accumulated.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "stairsplit/matrix.hpp"

namespace stairsplit {

struct SpectrumReport {
    std::vector<std::complex<double>> eigenvalues;
    double rho = 0.0;
    double gamma = 0.0;
    bool one_eigenvalue_present = false;
};

namespace detail {

inline double sign_like(double magnitude, double sign_of) {
    return sign_of >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude);
}

// Householder similarity reduction to upper Hessenberg form, in place.
inline void hessenberg_reduce(Matrix& H) {
    const std::size_t n = H.rows();
    if (n < 3) return;
    std::vector<double> ort(n, 0.0);
    for (std::size_t m = 1; m + 1 < n; ++m) {
        double scale = 0.0;
        for (std::size_t i = m; i < n; ++i) scale += std::abs(H(i, m - 1));
        if (scale == 0.0) continue;

        double h = 0.0;
        for (std::size_t i = n; i-- > m;) {
            ort[i] = H(i, m - 1) / scale;
            h += ort[i] * ort[i];
        }
        double g = -sign_like(std::sqrt(h), ort[m]);
        h -= ort[m] * g;
        ort[m] -= g;

        // apply (I - u u^T / h) on both sides
        for (std::size_t j = m; j < n; ++j) {
            double f = 0.0;
            for (std::size_t i = n; i-- > m;) f += ort[i] * H(i, j);
            f /= h;
            for (std::size_t i = m; i < n; ++i) H(i, j) -= f * ort[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            double f = 0.0;
            for (std::size_t j = n; j-- > m;) f += ort[j] * H(i, j);
            f /= h;
            for (std::size_t j = m; j < n; ++j) H(i, j) -= f * ort[j];
        }
        H(m, m - 1) = scale * g;
        for (std::size_t i = m + 1; i < n; ++i) H(i, m - 1) = 0.0;
    }
}

// Francis double-shift QR on an upper Hessenberg matrix, eigenvalues only.
// Follows the EISPACK hqr organization (translated to 0-based indexing),
// including its exceptional shifts and deflation tests.
inline std::vector<std::complex<double>> hessenberg_eigenvalues(Matrix H) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(H.rows());
    std::vector<std::complex<double>> eig(n);
    if (n == 0) return eig;

    double norm = 0.0;
    for (std::ptrdiff_t i = 0; i < n; ++i)
        for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(i - 1, 0); j < n; ++j)
            norm += std::abs(H(i, j));

    std::ptrdiff_t en = n - 1;
    double t = 0.0;
    long itn = 30L * n;

    while (en >= 0) {
        std::ptrdiff_t its = 0;
        std::ptrdiff_t na = en - 1;
        std::ptrdiff_t enm2 = na - 1;

        for (;;) {
            // look for a single small subdiagonal element
            std::ptrdiff_t l = en;
            while (l > 0) {
                double s = std::abs(H(l - 1, l - 1)) + std::abs(H(l, l));
                if (s == 0.0) s = norm;
                if (s + std::abs(H(l, l - 1)) == s) break;
                --l;
            }

            double x = H(en, en);
            if (l == en) {  // one root found
                eig[en] = {x + t, 0.0};
                en = na;
                break;
            }
            double y = H(na, na);
            double w = H(en, na) * H(na, en);
            if (l == na) {  // two roots found
                double p = (y - x) / 2.0;
                double q = p * p + w;
                double zz = std::sqrt(std::abs(q));
                x += t;
                if (q >= 0.0) {
                    zz = p + sign_like(zz, p);
                    double r1 = x + zz;
                    double r2 = (zz != 0.0) ? x - w / zz : r1;
                    eig[na] = {r1, 0.0};
                    eig[en] = {r2, 0.0};
                } else {
                    eig[na] = {x + p, zz};
                    eig[en] = {x + p, -zz};
                }
                en = enm2;
                break;
            }

            if (itn == 0)
                throw std::runtime_error("QR failed: no convergence within 30n iterations");
            if (its == 10 || its == 20) {
                // exceptional shift
                t += x;
                for (std::ptrdiff_t i = 0; i <= en; ++i) H(i, i) -= x;
                double s = std::abs(H(en, na)) + std::abs(H(na, enm2));
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            ++its;
            --itn;

            // look for two consecutive small subdiagonal elements
            std::ptrdiff_t m = enm2;
            double p = 0.0, q = 0.0, r = 0.0;
            while (true) {
                double zz = H(m, m);
                double rr = x - zz;
                double ss = y - zz;
                p = (rr * ss - w) / H(m + 1, m) + H(m, m + 1);
                q = H(m + 1, m + 1) - zz - rr - ss;
                r = H(m + 2, m + 1);
                double s = std::abs(p) + std::abs(q) + std::abs(r);
                p /= s;
                q /= s;
                r /= s;
                if (m == l) break;
                double tst1 = std::abs(p) *
                              (std::abs(H(m - 1, m - 1)) + std::abs(zz) + std::abs(H(m + 1, m + 1)));
                if (tst1 + std::abs(H(m, m - 1)) * (std::abs(q) + std::abs(r)) == tst1) break;
                --m;
            }

            for (std::ptrdiff_t i = m + 2; i <= en; ++i) {
                H(i, i - 2) = 0.0;
                if (i > m + 2) H(i, i - 3) = 0.0;
            }

            // double QR step on rows l..en, columns m..en
            for (std::ptrdiff_t k = m; k <= na; ++k) {
                const bool notlast = k != na;
                if (k != m) {
                    p = H(k, k - 1);
                    q = H(k + 1, k - 1);
                    r = notlast ? H(k + 2, k - 1) : 0.0;
                    x = std::abs(p) + std::abs(q) + std::abs(r);
                    if (x == 0.0) continue;
                    p /= x;
                    q /= x;
                    r /= x;
                }
                double s = sign_like(std::sqrt(p * p + q * q + r * r), p);
                if (k != m)
                    H(k, k - 1) = -s * x;
                else if (l != m)
                    H(k, k - 1) = -H(k, k - 1);
                p += s;
                x = p / s;
                y = q / s;
                double zz = r / s;
                q /= p;
                r /= p;

                if (notlast) {
                    for (std::ptrdiff_t j = k; j < n; ++j) {  // row modification
                        double f = H(k, j) + q * H(k + 1, j) + r * H(k + 2, j);
                        H(k, j) -= f * x;
                        H(k + 1, j) -= f * y;
                        H(k + 2, j) -= f * zz;
                    }
                    std::ptrdiff_t jmax = std::min(en, k + 3);
                    for (std::ptrdiff_t i = 0; i <= jmax; ++i) {  // column modification
                        double f = x * H(i, k) + y * H(i, k + 1) + zz * H(i, k + 2);
                        H(i, k) -= f;
                        H(i, k + 1) -= f * q;
                        H(i, k + 2) -= f * r;
                    }
                } else {
                    for (std::ptrdiff_t j = k; j < n; ++j) {
                        double f = H(k, j) + q * H(k + 1, j);
                        H(k, j) -= f * x;
                        H(k + 1, j) -= f * y;
                    }
                    std::ptrdiff_t jmax = std::min(en, k + 3);
                    for (std::ptrdiff_t i = 0; i <= jmax; ++i) {
                        double f = x * H(i, k) + y * H(i, k + 1);
                        H(i, k) -= f;
                        H(i, k + 1) -= f * q;
                    }
                }
            }
        }
    }
    return eig;
}

// Collatz-Wielandt bracket for the Perron root of a nonnegative matrix:
// for x > 0, min_i (Bx)_i/x_i <= rho(B) <= max_i (Bx)_i/x_i. Iterating
// x <- Bx tightens the bracket; a unit diagonal shift keeps x positive.
struct PerronBracket {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    bool tight = false;
};

inline PerronBracket perron_root_bracket(const Matrix& B, int max_iters = 400,
                                         double rel_gap = 1e-9) {
    const std::size_t n = B.rows();
    PerronBracket out;
    Vector x(n, 1.0);
    for (int it = 0; it < max_iters; ++it) {
        Vector y(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double s = x[i];  // unit shift
            for (std::size_t j = 0; j < n; ++j) s += B(i, j) * x[j];
            y[i] = s;
        }
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double ratio = y[i] / x[i];
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        out.lo = lo - 1.0;
        out.hi = hi - 1.0;
        if (hi - lo <= rel_gap * hi) {
            out.tight = true;
            return out;
        }
        double m = max_abs(y);
        for (double& yi : y) yi /= m;
        x = std::move(y);
    }
    return out;
}

}  // namespace detail

// All n eigenvalues of a square real matrix, with algebraic multiplicity.
inline std::vector<std::complex<double>> eigenvalues(const Matrix& A) {
    if (!A.is_square()) throw std::invalid_argument("eigenvalues: matrix not square");
    if (!A.all_finite()) throw std::invalid_argument("eigenvalues: nonfinite entries");
    Matrix H = A;
    detail::hessenberg_reduce(H);
    return detail::hessenberg_eigenvalues(std::move(H));
}

inline double spectral_radius_of(const std::vector<std::complex<double>>& eig) {
    double r = 0.0;
    for (const auto& z : eig) r = std::max(r, std::abs(z));
    return r;
}

// Spectral radius of P. For elementwise-nonnegative P the value is
// cross-checked against a Perron-root bracket from power iteration on |P|;
// a definite disagreement raises an error.
inline double spectral_radius(const Matrix& P) {
    const double rho = spectral_radius_of(eigenvalues(P));
    bool nonneg = true;
    for (double x : P.data())
        if (x < 0.0) {
            nonneg = false;
            break;
        }
    if (nonneg && P.rows() > 0) {
        const auto bracket = detail::perron_root_bracket(P);
        if (bracket.tight) {
            const double slack = 1e-8 * std::max(1.0, bracket.hi);
            if (rho < bracket.lo - slack || rho > bracket.hi + slack)
                throw std::runtime_error("spectral radius disagrees with Perron-root bracket");
        }
    }
    return rho;
}

// gamma(P) = max{|lambda| : lambda in spectrum, lambda != 1}; the unit
// eigenvalue is detected within tol_one scaled by the size of P.
inline SpectrumReport convergence_factor(const Matrix& P, double tol_one = 1e-8) {
    SpectrumReport rep;
    rep.eigenvalues = eigenvalues(P);
    const double scale = std::max(1.0, P.inf_norm());
    const double tol = tol_one * scale;
    for (const auto& z : rep.eigenvalues) {
        rep.rho = std::max(rep.rho, std::abs(z));
        if (std::abs(z - 1.0) <= tol)
            rep.one_eigenvalue_present = true;
        else
            rep.gamma = std::max(rep.gamma, std::abs(z));
    }
    return rep;
}

// Smallest k with rho^k <= threshold: k = log(threshold)/log(rho).
inline double iterations_to_threshold(double rho, double threshold = 0.01) {
    if (rho < 0.0) throw std::invalid_argument("iterations_to_threshold: negative radius");
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("iterations_to_threshold: threshold outside (0,1)");
    if (rho == 0.0) return 0.0;
    if (rho >= 1.0) return std::numeric_limits<double>::infinity();
    return std::log(threshold) / std::log(rho);
}

}  // namespace stairsplit
