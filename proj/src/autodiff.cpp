#include "rrae/autodiff.hpp"

#include "rrae/errors.hpp"
#include "rrae/log.hpp"

#include <cmath>
#include <memory>
#include <string>
#include <utility>

namespace rrae::ad {

namespace {

void require_same_tape(const Var& a, const Var& b, const char* op) {
    if (a.tape() != b.tape()) {
        throw ParameterError(std::string(op) + ": operands live on different tapes");
    }
}

double stable_softplus(double x) {
    // max(x,0) + log1p(exp(-|x|)) never overflows
    return (x > 0.0 ? x : 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

} // namespace

const Matrix& Var::value() const { return tape_->value_of(id_); }
const Matrix& Var::grad() const { return tape_->grad_of(id_); }

Var Tape::input(Matrix value) { return emplace(std::move(value), PullFn{}); }

Var Tape::emplace(Matrix value, PullFn pull) {
    nodes_.push_back(Node{std::move(value), Matrix{}, std::move(pull)});
    return Var(this, static_cast<int>(nodes_.size()) - 1);
}

void Tape::accumulate(int id, const Matrix& g) {
    Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.grad.size() == 0) {
        n.grad = g;
    } else {
        n.grad = add(n.grad, g);
    }
}

const Matrix& Tape::grad_of(int id) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.grad.size() != 0) return n.grad;
    zero_like_ = Matrix::zeros(n.value.rows(), n.value.cols());
    return zero_like_;
}

void Tape::backward(const Var& root) {
    if (root.tape() != this) throw ParameterError("backward: root not on this tape");
    const Node& r = nodes_[static_cast<std::size_t>(root.id())];
    if (r.value.rows() != 1 || r.value.cols() != 1) {
        throw ParameterError("backward: root must be a 1x1 scalar, got " + r.value.shape_str());
    }
    for (auto& n : nodes_) n.grad = Matrix{};
    accumulate(root.id(), Matrix::ones(1, 1));
    for (int id = root.id(); id >= 0; --id) {
        Node& n = nodes_[static_cast<std::size_t>(id)];
        if (n.grad.size() == 0 || !n.pull) continue;
        n.pull(*this, n.grad);
    }
}

void Tape::clear() { nodes_.clear(); }

// ---- operations ------------------------------------------------------------

Var matmul(const Var& a, const Var& b) {
    require_same_tape(a, b, "matmul");
    Tape& t = *a.tape();
    Matrix out = rrae::matmul(a.value(), b.value());
    int ia = a.id(), ib = b.id();
    return t.emplace(std::move(out), [ia, ib](Tape& tp, const Matrix& g) {
        tp.accumulate(ia, rrae::matmul(g, transpose(tp.value_of(ib))));
        tp.accumulate(ib, rrae::matmul(transpose(tp.value_of(ia)), g));
    });
}

Var add(const Var& a, const Var& b) {
    require_same_tape(a, b, "add");
    Tape& t = *a.tape();
    Matrix out = rrae::add(a.value(), b.value());
    int ia = a.id(), ib = b.id();
    return t.emplace(std::move(out), [ia, ib](Tape& tp, const Matrix& g) {
        tp.accumulate(ia, g);
        tp.accumulate(ib, g);
    });
}

Var sub(const Var& a, const Var& b) {
    require_same_tape(a, b, "sub");
    Tape& t = *a.tape();
    Matrix out = rrae::sub(a.value(), b.value());
    int ia = a.id(), ib = b.id();
    return t.emplace(std::move(out), [ia, ib](Tape& tp, const Matrix& g) {
        tp.accumulate(ia, g);
        tp.accumulate(ib, rrae::scale(g, -1.0));
    });
}

Var scale(const Var& a, double s) {
    Tape& t = *a.tape();
    Matrix out = rrae::scale(a.value(), s);
    int ia = a.id();
    return t.emplace(std::move(out), [ia, s](Tape& tp, const Matrix& g) {
        tp.accumulate(ia, rrae::scale(g, s));
    });
}

Var add_col_broadcast(const Var& a, const Var& bias) {
    require_same_tape(a, bias, "add_col_broadcast");
    const Matrix& av = a.value();
    const Matrix& bv = bias.value();
    if (bv.cols() != 1 || bv.rows() != av.rows()) {
        throw DimensionError("add_col_broadcast: bias " + bv.shape_str() + " vs input " +
                             av.shape_str());
    }
    Matrix out(av.rows(), av.cols());
    for (std::size_t i = 0; i < av.rows(); ++i)
        for (std::size_t j = 0; j < av.cols(); ++j) out(i, j) = av(i, j) + bv(i, 0);
    Tape& t = *a.tape();
    int ia = a.id(), ib = bias.id();
    return t.emplace(std::move(out), [ia, ib](Tape& tp, const Matrix& g) {
        tp.accumulate(ia, g);
        Matrix gb(g.rows(), 1);
        for (std::size_t i = 0; i < g.rows(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < g.cols(); ++j) s += g(i, j);
            gb(i, 0) = s;
        }
        tp.accumulate(ib, gb);
    });
}

Var softplus(const Var& a) {
    const Matrix& av = a.value();
    Matrix out(av.rows(), av.cols());
    for (std::size_t i = 0; i < av.size(); ++i) out.data()[i] = stable_softplus(av.data()[i]);
    Tape& t = *a.tape();
    int ia = a.id();
    return t.emplace(std::move(out), [ia](Tape& tp, const Matrix& g) {
        const Matrix& x = tp.value_of(ia);
        Matrix gx(x.rows(), x.cols());
        for (std::size_t i = 0; i < x.size(); ++i)
            gx.data()[i] = g.data()[i] * sigmoid(x.data()[i]);
        tp.accumulate(ia, gx);
    });
}

Var relu(const Var& a) {
    const Matrix& av = a.value();
    Matrix out(av.rows(), av.cols());
    for (std::size_t i = 0; i < av.size(); ++i) out.data()[i] = av.data()[i] > 0.0 ? av.data()[i] : 0.0;
    Tape& t = *a.tape();
    int ia = a.id();
    return t.emplace(std::move(out), [ia](Tape& tp, const Matrix& g) {
        const Matrix& x = tp.value_of(ia);
        Matrix gx(x.rows(), x.cols());
        for (std::size_t i = 0; i < x.size(); ++i)
            gx.data()[i] = x.data()[i] > 0.0 ? g.data()[i] : 0.0;
        tp.accumulate(ia, gx);
    });
}

Var sum(const Var& a) {
    const Matrix& av = a.value();
    double s = 0.0;
    for (std::size_t i = 0; i < av.size(); ++i) s += av.data()[i];
    Matrix out(1, 1);
    out(0, 0) = s;
    Tape& t = *a.tape();
    int ia = a.id();
    return t.emplace(std::move(out), [ia](Tape& tp, const Matrix& g) {
        const Matrix& x = tp.value_of(ia);
        tp.accumulate(ia, Matrix(x.rows(), x.cols(), g(0, 0)));
    });
}

Var frobenius_norm(const Var& a) {
    double nrm = rrae::frobenius_norm(a.value());
    Matrix out(1, 1);
    out(0, 0) = nrm;
    Tape& t = *a.tape();
    int ia = a.id();
    return t.emplace(std::move(out), [ia, nrm](Tape& tp, const Matrix& g) {
        if (nrm == 0.0) return; // subgradient 0 at the origin
        tp.accumulate(ia, rrae::scale(tp.value_of(ia), g(0, 0) / nrm));
    });
}

Var column_slice(const Var& a, std::vector<std::size_t> indices) {
    Matrix out = select_columns(a.value(), indices); // validates indices
    Tape& t = *a.tape();
    int ia = a.id();
    auto idx = std::make_shared<std::vector<std::size_t>>(std::move(indices));
    return t.emplace(std::move(out), [ia, idx](Tape& tp, const Matrix& g) {
        const Matrix& x = tp.value_of(ia);
        Matrix gx = Matrix::zeros(x.rows(), x.cols());
        for (std::size_t j = 0; j < idx->size(); ++j)
            for (std::size_t i = 0; i < x.rows(); ++i) gx(i, (*idx)[j]) += g(i, j);
        tp.accumulate(ia, gx);
    });
}

Var truncated_reconstruct(const Var& a, std::size_t k) {
    const Matrix& av = a.value();
    const std::size_t r = std::min(av.rows(), av.cols());
    if (k < 1 || k > r) {
        throw ParameterError("truncated_reconstruct: k=" + std::to_string(k) + " outside [1, " +
                             std::to_string(r) + "] for " + av.shape_str());
    }
    auto fac = std::make_shared<SvdResult>(svd(av));
    if (k < r && fac->sigma[0] > 0.0 &&
        (fac->sigma[k - 1] - fac->sigma[k]) / fac->sigma[0] < kDegenerateGapTol) {
        log::warn("truncated_reconstruct: degenerate spectrum, gap sigma_" + std::to_string(k) +
                  "-sigma_" + std::to_string(k + 1) + " below tolerance; using safeguarded "
                  "denominators");
    }
    Matrix out = rank_k_reconstruct(*fac, k);
    Tape& t = *a.tape();
    int ia = a.id();
    return t.emplace(std::move(out), [ia, k, fac](Tape& tp, const Matrix& g) {
        tp.accumulate(ia, truncated_svd_vjp(*fac, k, g));
    });
}

Var nuclear_norm(const Var& a) {
    auto fac = std::make_shared<SvdResult>(svd(a.value()));
    double total = 0.0;
    for (double s : fac->sigma) total += s;
    Matrix out(1, 1);
    out(0, 0) = total;
    Tape& t = *a.tape();
    int ia = a.id();
    return t.emplace(std::move(out), [ia, fac](Tape& tp, const Matrix& g) {
        // d(sum sigma)/dA = U V^T
        Matrix uvt = rrae::matmul(fac->U, fac->Vt);
        tp.accumulate(ia, rrae::scale(uvt, g(0, 0)));
    });
}

} // namespace rrae::ad
