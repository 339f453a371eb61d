#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace rrae {

class SplitMix64;

// Dense 2-D real matrix, row-major, 64-bit throughout.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
    static Matrix ones(std::size_t rows, std::size_t cols) { return Matrix(rows, cols, 1.0); }
    static Matrix identity(std::size_t n);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix column(const std::vector<double>& v);
    // Entries i.i.d. uniform in [lo, hi) drawn from rng.
    static Matrix random_uniform(std::size_t rows, std::size_t cols, double lo, double hi,
                                 SplitMix64& rng);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    bool all_finite() const;
    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }
    std::string shape_str() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// ---- value-level kernels -------------------------------------------------

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double s);
Matrix hadamard(const Matrix& a, const Matrix& b);
double frobenius_norm(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);
// Columns of `a` selected by `idx`, in order.
Matrix select_columns(const Matrix& a, const std::vector<std::size_t>& idx);

// ---- singular value decomposition ----------------------------------------

// Thin SVD a = U * diag(sigma) * Vt with r = min(rows, cols) columns.
// sigma is sorted descending; the first nonzero entry of each U column is
// made positive (V row flipped accordingly) so results are deterministic.
struct SvdResult {
    Matrix U;                  // m x r
    std::vector<double> sigma; // r, descending, >= 0
    Matrix Vt;                 // r x n
};

SvdResult svd(const Matrix& a);

// Best rank-k approximation sum_{i<k} sigma_i U_i Vt_i from a precomputed SVD.
Matrix rank_k_reconstruct(const SvdResult& f, std::size_t k);

// Reverse-mode pullback of the map a -> rank_k_reconstruct(svd(a), k).
// `cotangent` is dL/d(output); returns dL/d(a). Denominators sigma_j^2 -
// sigma_i^2 are clamped to magnitude >= eps_gap.
Matrix truncated_svd_vjp(const SvdResult& f, std::size_t k, const Matrix& cotangent,
                         double eps_gap = 1e-12);

// Relative gap (sigma_k - sigma_{k+1}) / sigma_1 below which a truncation is
// reported as degenerate (ties make the top-k subspace ill-defined).
inline constexpr double kDegenerateGapTol = 1e-10;

} // namespace rrae
