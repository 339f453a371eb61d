// Independent test oracles. Everything here is deliberately implemented from
// scratch (no Eigen, no rrae kernels beyond plain element access) so that it
// can stand as a second opinion on the library's numerics.
#pragma once

#include "rrae/matrix.hpp"
#include "rrae/rng.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

// Plain triple-loop product.
inline rrae::Matrix matmul_naive(const rrae::Matrix& a, const rrae::Matrix& b) {
    rrae::Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

inline double fro_norm_naive(const rrae::Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * a.data()[i];
    return std::sqrt(s);
}

// Cyclic Jacobi eigenvalue iteration for a symmetric matrix; returns the
// eigenvalues sorted descending. Used to cross-check singular values via
// eig(A^T A) = sigma^2.
inline std::vector<double> symmetric_eigenvalues_jacobi(rrae::Matrix s, int max_sweeps = 100) {
    const std::size_t n = s.rows();
    if (s.cols() != n) throw std::invalid_argument("jacobi: matrix not square");
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += s(p, q) * s(p, q);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (s(p, q) == 0.0) continue;
                double theta = (s(q, q) - s(p, p)) / (2.0 * s(p, q));
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double sn = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    double sip = s(i, p), siq = s(i, q);
                    s(i, p) = c * sip - sn * siq;
                    s(i, q) = sn * sip + c * siq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    double spj = s(p, j), sqj = s(q, j);
                    s(p, j) = c * spj - sn * sqj;
                    s(q, j) = sn * spj + c * sqj;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = s(i, i);
    std::sort(ev.begin(), ev.end(), std::greater<double>());
    return ev;
}

// Singular values of a via the eigenvalues of a^T a (or a a^T, whichever is
// smaller), sorted descending.
inline std::vector<double> singular_values_oracle(const rrae::Matrix& a) {
    rrae::Matrix at(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) at(j, i) = a(i, j);
    rrae::Matrix gram =
        a.rows() >= a.cols() ? matmul_naive(at, a) : matmul_naive(a, at);
    std::vector<double> ev = symmetric_eigenvalues_jacobi(gram);
    for (double& v : ev) v = std::sqrt(std::max(v, 0.0));
    return ev;
}

// Central finite differences of a scalar function of a matrix.
inline rrae::Matrix fd_gradient(const std::function<double(const rrae::Matrix&)>& f,
                                rrae::Matrix x, double step = 1e-6) {
    rrae::Matrix g(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double orig = x.data()[i];
        x.data()[i] = orig + step;
        double fp = f(x);
        x.data()[i] = orig - step;
        double fm = f(x);
        x.data()[i] = orig;
        g.data()[i] = (fp - fm) / (2.0 * step);
    }
    return g;
}

inline double rel_err(double got, double want) {
    double denom = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / denom;
}

// Max relative elementwise mismatch with an absolute floor, for gradient
// comparisons where some entries are ~0.
inline double grad_mismatch(const rrae::Matrix& got, const rrae::Matrix& want,
                            double floor_ = 1e-8) {
    double worst = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        double denom = std::max(std::abs(want.data()[i]), floor_);
        worst = std::max(worst, std::abs(got.data()[i] - want.data()[i]) / denom);
    }
    return worst;
}

inline rrae::Matrix random_matrix(std::size_t rows, std::size_t cols, rrae::SplitMix64& rng,
                                  double lo = -1.0, double hi = 1.0) {
    rrae::Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(lo, hi);
    return m;
}

// Orthonormal columns via modified Gram-Schmidt on a random matrix.
inline rrae::Matrix random_orthonormal(std::size_t rows, std::size_t cols,
                                       rrae::SplitMix64& rng) {
    rrae::Matrix q = random_matrix(rows, cols, rng);
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t p = 0; p < j; ++p) {
            double dot = 0.0;
            for (std::size_t i = 0; i < rows; ++i) dot += q(i, p) * q(i, j);
            for (std::size_t i = 0; i < rows; ++i) q(i, j) -= dot * q(i, p);
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < rows; ++i) nrm += q(i, j) * q(i, j);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-12) return random_orthonormal(rows, cols, rng); // retry, degenerate draw
        for (std::size_t i = 0; i < rows; ++i) q(i, j) /= nrm;
    }
    return q;
}

// Matrix with prescribed singular values (descending) and random singular
// vectors; keeps spectral gaps under the caller's control.
inline rrae::Matrix matrix_with_spectrum(std::size_t rows, std::size_t cols,
                                         const std::vector<double>& sigma,
                                         rrae::SplitMix64& rng) {
    const std::size_t r = sigma.size();
    rrae::Matrix u = random_orthonormal(rows, r, rng);
    rrae::Matrix v = random_orthonormal(cols, r, rng);
    rrae::Matrix out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < r; ++k) s += sigma[k] * u(i, k) * v(j, k);
            out(i, j) = s;
        }
    return out;
}

} // namespace oracle
