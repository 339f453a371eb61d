#include "rrae/matrix.hpp"

#include "rrae/errors.hpp"
#include "rrae/log.hpp"
#include "rrae/rng.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace rrae {

namespace {

using EMat = Eigen::MatrixXd;
using RowMajorMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajorMat> emap(const Matrix& a) {
    return {a.data(), static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols())};
}

Eigen::Map<RowMajorMat> emap(Matrix& a) {
    return {a.data(), static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols())};
}

Matrix from_eigen(const EMat& m) {
    Matrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
    emap(out) = m;
    return out;
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (!a.same_shape(b)) {
        throw DimensionError(std::string(op) + ": shape mismatch " + a.shape_str() + " vs " +
                             b.shape_str());
    }
}

} // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("Matrix: data length " + std::to_string(data_.size()) +
                             " != rows*cols " + std::to_string(rows_ * cols_));
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r ? rows.begin()->size() : 0;
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) throw DimensionError("from_rows: ragged rows");
        std::size_t j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

Matrix Matrix::column(const std::vector<double>& v) {
    Matrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
}

Matrix Matrix::random_uniform(std::size_t rows, std::size_t cols, double lo, double hi,
                              SplitMix64& rng) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(lo, hi);
    return m;
}

bool Matrix::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

std::string Matrix::shape_str() const {
    std::ostringstream os;
    os << "(" << rows_ << "x" << cols_ << ")";
    return os.str();
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: inner dimensions disagree " + a.shape_str() + " x " +
                             b.shape_str());
    }
    Matrix out(a.rows(), b.cols());
    emap(out).noalias() = emap(a) * emap(b);
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    emap(out) = emap(a).transpose();
    return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "add");
    Matrix out(a.rows(), a.cols());
    emap(out) = emap(a) + emap(b);
    return out;
}

Matrix sub(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "sub");
    Matrix out(a.rows(), a.cols());
    emap(out) = emap(a) - emap(b);
    return out;
}

Matrix scale(const Matrix& a, double s) {
    Matrix out(a.rows(), a.cols());
    emap(out) = emap(a) * s;
    return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "hadamard");
    Matrix out(a.rows(), a.cols());
    emap(out) = emap(a).cwiseProduct(emap(b));
    return out;
}

double frobenius_norm(const Matrix& a) { return emap(a).norm(); }

double max_abs_diff(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    return (emap(a) - emap(b)).cwiseAbs().maxCoeff();
}

Matrix select_columns(const Matrix& a, const std::vector<std::size_t>& idx) {
    Matrix out(a.rows(), idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) {
        if (idx[j] >= a.cols()) {
            throw ParameterError("select_columns: index " + std::to_string(idx[j]) +
                                 " out of range for " + a.shape_str());
        }
        for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(i, idx[j]);
    }
    return out;
}

SvdResult svd(const Matrix& a) {
    if (!a.all_finite()) throw NumericalError("svd: input contains non-finite entries");
    EMat m = emap(a);
    Eigen::JacobiSVD<EMat> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success) {
        throw NumericalError("svd: Jacobi iteration failed to converge on " + a.shape_str() +
                             " (sweep limit reached)");
    }
    EMat u = dec.matrixU();
    EMat v = dec.matrixV();
    Eigen::VectorXd s = dec.singularValues();

    // Deterministic sign convention: first nonzero entry of each U column > 0.
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
            double e = u(i, j);
            if (e != 0.0) {
                if (e < 0.0) {
                    u.col(j) = -u.col(j);
                    v.col(j) = -v.col(j);
                }
                break;
            }
        }
    }

    SvdResult out;
    out.U = from_eigen(u);
    out.sigma.assign(s.data(), s.data() + s.size());
    out.Vt = from_eigen(v.transpose());
    return out;
}

Matrix rank_k_reconstruct(const SvdResult& f, std::size_t k) {
    const std::size_t r = f.sigma.size();
    if (k < 1 || k > r) {
        throw ParameterError("rank_k_reconstruct: k=" + std::to_string(k) +
                             " outside [1, " + std::to_string(r) + "]");
    }
    EMat u = emap(f.U);
    EMat vt = emap(f.Vt);
    Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(f.sigma.data(),
                                                          static_cast<Eigen::Index>(r));
    auto kk = static_cast<Eigen::Index>(k);
    EMat out = u.leftCols(kk) * s.head(kk).asDiagonal() * vt.topRows(kk);
    return from_eigen(out);
}

Matrix truncated_svd_vjp(const SvdResult& f, std::size_t k, const Matrix& cotangent,
                         double eps_gap) {
    const auto r = static_cast<Eigen::Index>(f.sigma.size());
    const auto kk = static_cast<Eigen::Index>(k);
    const auto m = static_cast<Eigen::Index>(f.U.rows());
    const auto n = static_cast<Eigen::Index>(f.Vt.cols());
    if (kk < 1 || kk > r) throw ParameterError("truncated_svd_vjp: k out of range");
    if (cotangent.rows() != f.U.rows() || cotangent.cols() != f.Vt.cols()) {
        throw DimensionError("truncated_svd_vjp: cotangent shape " + cotangent.shape_str() +
                             " does not match factorization");
    }

    EMat u = emap(f.U);
    EMat v = emap(f.Vt).transpose(); // n x r
    Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(f.sigma.data(), r);
    EMat g = emap(cotangent);

    // Cotangents of (U, sigma, V) induced by the rank-k reconstruction;
    // columns past k carry no signal.
    EMat ubar = EMat::Zero(m, r);
    EMat vbar = EMat::Zero(n, r);
    Eigen::VectorXd sbar = Eigen::VectorXd::Zero(r);
    ubar.leftCols(kk).noalias() = g * v.leftCols(kk) * s.head(kk).asDiagonal();
    vbar.leftCols(kk).noalias() = g.transpose() * u.leftCols(kk) * s.head(kk).asDiagonal();
    sbar.head(kk) = (u.leftCols(kk).transpose() * g * v.leftCols(kk)).diagonal();

    // F_ij = 1 / (sigma_j^2 - sigma_i^2), denominator clamped away from 0.
    EMat F(r, r);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < r; ++j) {
            if (i == j) {
                F(i, j) = 0.0;
                continue;
            }
            double d = s(j) * s(j) - s(i) * s(i);
            if (std::abs(d) < eps_gap) d = (d < 0.0) ? -eps_gap : eps_gap;
            F(i, j) = 1.0 / d;
        }
    }

    EMat utu = u.transpose() * ubar;
    EMat vtv = v.transpose() * vbar;
    EMat P = F.cwiseProduct(utu - utu.transpose());
    EMat Q = F.cwiseProduct(vtv - vtv.transpose());

    EMat core = P * s.asDiagonal();
    core += EMat(s.asDiagonal()) * Q;
    core += EMat(sbar.asDiagonal());
    EMat abar = u * core * v.transpose();

    // Components orthogonal to the computed subspaces (only present when the
    // factorization is thin on that side). The sigma^-1 is safe here: ubar and
    // vbar columns carry a matching sigma factor.
    Eigen::VectorXd sinv(r);
    for (Eigen::Index i = 0; i < r; ++i) sinv(i) = s(i) > 0.0 ? 1.0 / s(i) : 0.0;
    if (r < m) {
        EMat w = ubar * sinv.asDiagonal(); // m x r
        abar.noalias() += (w - u * (u.transpose() * w)) * v.transpose();
    }
    if (r < n) {
        EMat w = vbar * sinv.asDiagonal(); // n x r
        abar.noalias() += u * (w - v * (v.transpose() * w)).transpose();
    }
    return from_eigen(abar);
}

} // namespace rrae
