#pragma once

#include "rrae/matrix.hpp"

#include <functional>
#include <vector>

namespace rrae::ad {

class Tape;

// Handle to a node on a tape: a value matrix plus its accumulated gradient.
class Var {
public:
    Var() = default;
    Var(Tape* tape, int id) : tape_(tape), id_(id) {}

    const Matrix& value() const;
    // Gradient accumulated by the last backward pass (zeros if untouched).
    const Matrix& grad() const;
    std::size_t rows() const { return value().rows(); }
    std::size_t cols() const { return value().cols(); }

    Tape* tape() const { return tape_; }
    int id() const { return id_; }
    bool valid() const { return tape_ != nullptr; }

private:
    Tape* tape_ = nullptr;
    int id_ = -1;
};

// Single-threaded gradient tape. Nodes are appended in evaluation order, so
// index order is a topological order; backward walks it once in reverse.
class Tape {
public:
    using PullFn = std::function<void(Tape&, const Matrix& self_grad)>;

    Var input(Matrix value);

    // Seeds d(root)/d(root) = 1 (root must be 1x1) and propagates gradients
    // to every node that feeds it. Gradients accumulate across uses.
    void backward(const Var& root);

    void clear();
    std::size_t size() const { return nodes_.size(); }

    // -- used by operations ---------------------------------------------
    Var emplace(Matrix value, PullFn pull);
    void accumulate(int id, const Matrix& g);
    const Matrix& value_of(int id) const { return nodes_[static_cast<std::size_t>(id)].value; }
    const Matrix& grad_of(int id) const;

private:
    struct Node {
        Matrix value;
        Matrix grad; // allocated lazily
        PullFn pull; // empty for leaves
    };
    std::vector<Node> nodes_;
    mutable Matrix zero_like_; // scratch for grad_of on untouched nodes
};

// ---- operations ------------------------------------------------------------
// Operands must live on the same tape.

Var matmul(const Var& a, const Var& b);
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var scale(const Var& a, double s);
// a + bias * ones(1, cols): bias is (rows x 1), added to every column.
Var add_col_broadcast(const Var& a, const Var& bias);
Var softplus(const Var& a);
Var relu(const Var& a);
Var sum(const Var& a);            // 1x1
Var frobenius_norm(const Var& a); // 1x1
Var column_slice(const Var& a, std::vector<std::size_t> indices);
// Best rank-k approximation of the value; gradients flow through the SVD
// restricted to the retained modes.
Var truncated_reconstruct(const Var& a, std::size_t k);
Var nuclear_norm(const Var& a); // 1x1, sum of singular values

} // namespace rrae::ad
