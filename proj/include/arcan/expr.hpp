#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <arcan/scalar.hpp>

namespace arcan {

enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Sqrt, Guard };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Immutable expression node. `value` holds the constant of Const and the
/// default of Guard; `index` holds the variable of Var and the exponent of Pow.
struct Node {
    Op op;
    Rational value{};
    int index = 0;
    NodePtr lhs;
    NodePtr rhs;
};

namespace node {

inline NodePtr constant(const Rational& q) { return std::make_shared<const Node>(Node{Op::Const, q, 0, nullptr, nullptr}); }
inline NodePtr var(int i) { return std::make_shared<const Node>(Node{Op::Var, {}, i, nullptr, nullptr}); }

inline NodePtr binary(Op op, NodePtr a, NodePtr b)
{
    return std::make_shared<const Node>(Node{op, {}, 0, std::move(a), std::move(b)});
}

inline NodePtr add(NodePtr a, NodePtr b) { return binary(Op::Add, std::move(a), std::move(b)); }
inline NodePtr sub(NodePtr a, NodePtr b) { return binary(Op::Sub, std::move(a), std::move(b)); }
inline NodePtr mul(NodePtr a, NodePtr b) { return binary(Op::Mul, std::move(a), std::move(b)); }
inline NodePtr div(NodePtr a, NodePtr b) { return binary(Op::Div, std::move(a), std::move(b)); }

/// Negation; folds into constants so negative literals have a single representation.
inline NodePtr neg(NodePtr a)
{
    if (a->op == Op::Const) {
        return constant(-a->value);
    }
    return std::make_shared<const Node>(Node{Op::Neg, {}, 0, std::move(a), nullptr});
}

inline NodePtr pow(NodePtr a, int exponent)
{
    return std::make_shared<const Node>(Node{Op::Pow, {}, exponent, std::move(a), nullptr});
}

inline NodePtr sqrt(NodePtr a) { return std::make_shared<const Node>(Node{Op::Sqrt, {}, 0, std::move(a), nullptr}); }

inline NodePtr guard(NodePtr body, const Rational& fallback)
{
    return std::make_shared<const Node>(Node{Op::Guard, fallback, 0, std::move(body), nullptr});
}

} // namespace node

inline bool structurally_equal(const NodePtr& a, const NodePtr& b)
{
    if (a == b) {
        return true;
    }
    if (!a || !b || a->op != b->op) {
        return false;
    }
    switch (a->op) {
    case Op::Const:
        return a->value == b->value;
    case Op::Var:
        return a->index == b->index;
    case Op::Pow:
        return a->index == b->index && structurally_equal(a->lhs, b->lhs);
    case Op::Guard:
        return a->value == b->value && structurally_equal(a->lhs, b->lhs);
    case Op::Neg:
    case Op::Sqrt:
        return structurally_equal(a->lhs, b->lhs);
    default:
        return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
    }
}

inline bool contains_op(const NodePtr& n, Op op)
{
    if (!n) {
        return false;
    }
    return n->op == op || contains_op(n->lhs, op) || contains_op(n->rhs, op);
}

inline int max_var_index(const NodePtr& n)
{
    if (!n) {
        return -1;
    }
    if (n->op == Op::Var) {
        return n->index;
    }
    return std::max(max_var_index(n->lhs), max_var_index(n->rhs));
}

/// Name of variable i (0-based) in a space of dimension nvars:
/// x, y, z for nvars <= 3 and x1..xN beyond.
inline std::string variable_name(int i, int nvars)
{
    if (nvars <= 3) {
        return std::string(1, "xyz"[i]);
    }
    return "x" + std::to_string(i + 1);
}

/// An expression over nvars real variables.
class Expr {
public:
    Expr(NodePtr root, int nvars) : root_(std::move(root)), nvars_(nvars)
    {
        if (max_var_index(root_) >= nvars_) {
            throw Error("expression uses a variable beyond its dimension " + std::to_string(nvars_));
        }
    }

    const NodePtr& root() const noexcept { return root_; }
    int nvars() const noexcept { return nvars_; }

    /// Same tree over a larger ambient dimension.
    Expr widened(int nvars) const { return Expr(root_, std::max(nvars, nvars_)); }

    friend bool operator==(const Expr& a, const Expr& b)
    {
        return a.nvars_ == b.nvars_ && structurally_equal(a.root_, b.root_);
    }

private:
    NodePtr root_;
    int nvars_;
};

namespace detail {

inline void print_node(std::string& out, const NodePtr& n, int nvars, const std::string& univariate)
{
    switch (n->op) {
    case Op::Const:
        if (n->value < 0) {
            out += "(-" + scalar_traits<Rational>::to_string(-n->value) + ")";
        } else {
            out += scalar_traits<Rational>::to_string(n->value);
        }
        return;
    case Op::Var:
        out += univariate.empty() ? variable_name(n->index, nvars) : univariate;
        return;
    case Op::Neg:
        out += "(-";
        print_node(out, n->lhs, nvars, univariate);
        out += ")";
        return;
    case Op::Pow:
        out += "(";
        print_node(out, n->lhs, nvars, univariate);
        out += "^" + std::to_string(n->index) + ")";
        return;
    case Op::Sqrt:
        out += "sqrt(";
        print_node(out, n->lhs, nvars, univariate);
        out += ")";
        return;
    case Op::Guard: {
        out += "guard(";
        print_node(out, n->lhs, nvars, univariate);
        out += ", ";
        print_node(out, node::constant(n->value), nvars, univariate);
        out += ")";
        return;
    }
    default:
        break;
    }
    const char* sym = n->op == Op::Add ? " + " : n->op == Op::Sub ? " - " : n->op == Op::Mul ? " * " : " / ";
    out += "(";
    print_node(out, n->lhs, nvars, univariate);
    out += sym;
    print_node(out, n->rhs, nvars, univariate);
    out += ")";
}

} // namespace detail

/// Fully parenthesized canonical form, re-readable by parse().
inline std::string print(const Expr& e)
{
    std::string out;
    detail::print_node(out, e.root(), e.nvars(), "");
    return out;
}

/// Prints a univariate tree using `name` for its single variable.
inline std::string print_univariate(const NodePtr& n, const std::string& name)
{
    std::string out;
    detail::print_node(out, n, 1, name);
    return out;
}

} // namespace arcan
