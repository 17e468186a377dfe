#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include <arcan/errors.hpp>
#include <arcan/expr.hpp>

namespace arcan {

namespace detail {

/// Recursive-descent parser for the expression grammar:
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' INT)?
///   primary := NUMBER | INT '/' INT | VAR | FN '(' args ')' | '(' expr ')'
///
/// An integer literal immediately followed by '/' and another integer, with
/// no whitespace, is a single rational literal. Decimals are read exactly.
class Parser {
public:
    Parser(std::string_view text, std::string_view univariate) : text_(text), univariate_(univariate) {}

    NodePtr parse_all()
    {
        NodePtr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return e;
    }

    /// Dimension implied by the variables seen so far.
    int inferred_nvars() const { return max_index_ + 1; }

private:
    enum class Style { None, Letters, Indexed };

    [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, pos_); }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            if (pos_ >= text_.size()) {
                fail(std::string("expected '") + c + "' before end of input");
            }
            fail(std::string("expected '") + c + "'");
        }
    }

    NodePtr parse_expr()
    {
        NodePtr lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                lhs = node::add(lhs, parse_term());
            } else if (accept('-')) {
                lhs = node::sub(lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term()
    {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = node::mul(lhs, parse_unary());
            } else if (accept('/')) {
                lhs = node::div(lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_unary()
    {
        if (accept('-')) {
            return node::neg(parse_unary());
        }
        if (accept('+')) {
            return parse_unary();
        }
        return parse_power();
    }

    NodePtr parse_power()
    {
        NodePtr base = parse_primary();
        if (accept('^')) {
            skip_ws();
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                fail("exponent must be a nonnegative integer literal");
            }
            const Integer e = read_integer();
            if (e > 1 << 20) {
                fail("exponent too large");
            }
            return node::pow(base, e.convert_to<int>());
        }
        return base;
    }

    Integer read_integer()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        return Integer(std::string(text_.substr(start, pos_ - start)));
    }

    NodePtr parse_number()
    {
        Integer whole = read_integer();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            const std::size_t start = pos_;
            Integer frac = read_integer_or_zero();
            Integer scale = 1;
            for (std::size_t i = start; i < pos_; ++i) {
                scale *= 10;
            }
            return node::constant(Rational(whole * scale + frac, scale));
        }
        // p/q literal: no whitespace on either side of the slash
        if (pos_ + 1 < text_.size() && text_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
            ++pos_;
            const std::size_t at = pos_;
            Integer den = read_integer();
            if (den == 0) {
                pos_ = at;
                fail("zero denominator in rational literal");
            }
            return node::constant(Rational(whole, den));
        }
        return node::constant(Rational(whole));
    }

    Integer read_integer_or_zero()
    {
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            return read_integer();
        }
        return 0;
    }

    NodePtr parse_primary()
    {
        skip_ws();
        if (pos_ >= text_.size()) {
            fail("unexpected end of input");
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            return parse_number();
        }
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_expr();
            expect(')');
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            const std::string name(text_.substr(start, pos_ - start));
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '(') {
                ++pos_;
                return parse_call(name, start);
            }
            return variable(name, start);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr parse_call(const std::string& name, std::size_t at)
    {
        std::vector<NodePtr> args;
        if (!accept(')')) {
            do {
                args.push_back(parse_expr());
            } while (accept(','));
            expect(')');
        }
        if (name == "sqrt") {
            if (args.size() != 1) {
                throw ArityError("sqrt", 1, args.size());
            }
            return node::sqrt(args[0]);
        }
        if (name == "guard") {
            if (args.size() != 2) {
                throw ArityError("guard", 2, args.size());
            }
            Rational fallback;
            if (!fold_constant(args[1], fallback)) {
                pos_ = at;
                fail("guard default must be a rational constant");
            }
            return node::guard(args[0], fallback);
        }
        pos_ = at;
        fail("unknown function '" + name + "'");
    }

    static bool fold_constant(const NodePtr& n, Rational& out)
    {
        Rational a, b;
        switch (n->op) {
        case Op::Const:
            out = n->value;
            return true;
        case Op::Neg:
            if (!fold_constant(n->lhs, a)) {
                return false;
            }
            out = -a;
            return true;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
            if (!fold_constant(n->lhs, a) || !fold_constant(n->rhs, b)) {
                return false;
            }
            if (n->op == Op::Div && b == 0) {
                return false;
            }
            out = n->op == Op::Add ? a + b : n->op == Op::Sub ? a - b : n->op == Op::Mul ? a * b : a / b;
            return true;
        default:
            return false;
        }
    }

    NodePtr variable(const std::string& name, std::size_t at)
    {
        int index = -1;
        Style style = Style::None;
        if (!univariate_.empty()) {
            if (name != univariate_) {
                pos_ = at;
                fail("unknown variable '" + name + "' (expected '" + std::string(univariate_) + "')");
            }
            index = 0;
        } else if (name == "x" || name == "y" || name == "z") {
            style = Style::Letters;
            index = name == "x" ? 0 : name == "y" ? 1 : 2;
        } else if (name.size() >= 2 && name[0] == 'x' && name[1] != '0'
            && name.find_first_not_of("0123456789", 1) == std::string::npos && name.size() < 8) {
            style = Style::Indexed;
            index = std::stoi(name.substr(1)) - 1;
        } else {
            pos_ = at;
            fail("unknown identifier '" + name + "'");
        }
        if (style != Style::None) {
            if (style_ != Style::None && style_ != style) {
                pos_ = at;
                fail("mixed variable naming styles");
            }
            style_ = style;
        }
        max_index_ = std::max(max_index_, index);
        return node::var(index);
    }

    std::string_view text_;
    std::string_view univariate_;
    std::size_t pos_ = 0;
    Style style_ = Style::None;
    int max_index_ = -1;
};

} // namespace detail

/// Parses an expression over x, y, z (or x1..xN). The dimension is the
/// larger of min_nvars and the highest variable used.
inline Expr parse(std::string_view text, int min_nvars = 0)
{
    detail::Parser p(text, "");
    NodePtr root = p.parse_all();
    return Expr(root, std::max({min_nvars, p.inferred_nvars(), 1}));
}

/// Parses an expression in a single named variable (index 0).
inline NodePtr parse_univariate(std::string_view text, std::string_view variable)
{
    detail::Parser p(text, variable);
    return p.parse_all();
}

} // namespace arcan
