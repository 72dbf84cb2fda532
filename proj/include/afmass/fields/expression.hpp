#pragma once

#include <cctype>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "afmass/core.hpp"
#include "afmass/fields/scalar_field.hpp"

namespace afmass::fields {

//! Parse failure with the byte offset of the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : std::runtime_error(message + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

namespace ast {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

//! Immutable expression tree. sqrt is normalized to pow(., 0.5) at parse
//! time so differentiation has one power rule.
struct Node {
    enum class Kind { number, coord, radius, add, sub, mul, div, neg, pow, exp_fn, log_fn, abs_fn };
    Kind kind;
    double num = 0.0; // literal value, or the exponent for pow
    int index = 0;    // coordinate for Kind::coord, 0-based
    NodePtr a, b;
};

inline NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

inline NodePtr number(double v) { return make({Node::Kind::number, v, 0, nullptr, nullptr}); }
inline NodePtr coord(int i) { return make({Node::Kind::coord, 0.0, i, nullptr, nullptr}); }
inline NodePtr radius() { return make({Node::Kind::radius, 0.0, 0, nullptr, nullptr}); }

inline bool is_number(const NodePtr& n, double v) {
    return n->kind == Node::Kind::number && n->num == v;
}

// Smart constructors fold constants and drop identity operands; this keeps
// third-derivative trees of nested powers from exploding.
inline NodePtr add(NodePtr a, NodePtr b) {
    if (a->kind == Node::Kind::number && b->kind == Node::Kind::number) return number(a->num + b->num);
    if (is_number(a, 0.0)) return b;
    if (is_number(b, 0.0)) return a;
    return make({Node::Kind::add, 0.0, 0, std::move(a), std::move(b)});
}

inline NodePtr neg(NodePtr a) {
    if (a->kind == Node::Kind::number) return number(-a->num);
    if (a->kind == Node::Kind::neg) return a->a;
    return make({Node::Kind::neg, 0.0, 0, std::move(a), nullptr});
}

inline NodePtr sub(NodePtr a, NodePtr b) {
    if (a->kind == Node::Kind::number && b->kind == Node::Kind::number) return number(a->num - b->num);
    if (is_number(b, 0.0)) return a;
    if (is_number(a, 0.0)) return neg(std::move(b));
    return make({Node::Kind::sub, 0.0, 0, std::move(a), std::move(b)});
}

inline NodePtr mul(NodePtr a, NodePtr b) {
    if (a->kind == Node::Kind::number && b->kind == Node::Kind::number) return number(a->num * b->num);
    if (is_number(a, 0.0) || is_number(b, 0.0)) return number(0.0);
    if (is_number(a, 1.0)) return b;
    if (is_number(b, 1.0)) return a;
    return make({Node::Kind::mul, 0.0, 0, std::move(a), std::move(b)});
}

inline NodePtr div(NodePtr a, NodePtr b) {
    if (is_number(a, 0.0)) return number(0.0);
    if (is_number(b, 1.0)) return a;
    if (a->kind == Node::Kind::number && b->kind == Node::Kind::number) return number(a->num / b->num);
    return make({Node::Kind::div, 0.0, 0, std::move(a), std::move(b)});
}

inline NodePtr pow(NodePtr a, double p) {
    if (p == 0.0) return number(1.0);
    if (p == 1.0) return a;
    if (a->kind == Node::Kind::number) return number(std::pow(a->num, p));
    return make({Node::Kind::pow, p, 0, std::move(a), nullptr});
}

inline NodePtr call(Node::Kind k, NodePtr a) {
    if (a->kind == Node::Kind::number) {
        switch (k) {
            case Node::Kind::exp_fn: return number(std::exp(a->num));
            case Node::Kind::log_fn: return number(std::log(a->num));
            case Node::Kind::abs_fn: return number(std::abs(a->num));
            default: break;
        }
    }
    return make({k, 0.0, 0, std::move(a), nullptr});
}

inline double eval(const Node& n, const Vec& x, double r) {
    switch (n.kind) {
        case Node::Kind::number: return n.num;
        case Node::Kind::coord: return x[n.index];
        case Node::Kind::radius: return r;
        case Node::Kind::add: return eval(*n.a, x, r) + eval(*n.b, x, r);
        case Node::Kind::sub: return eval(*n.a, x, r) - eval(*n.b, x, r);
        case Node::Kind::mul: return eval(*n.a, x, r) * eval(*n.b, x, r);
        case Node::Kind::div: return eval(*n.a, x, r) / eval(*n.b, x, r);
        case Node::Kind::neg: return -eval(*n.a, x, r);
        case Node::Kind::pow: return std::pow(eval(*n.a, x, r), n.num);
        case Node::Kind::exp_fn: return std::exp(eval(*n.a, x, r));
        case Node::Kind::log_fn: return std::log(eval(*n.a, x, r));
        case Node::Kind::abs_fn: return std::abs(eval(*n.a, x, r));
    }
    return 0.0;
}

//! Partial derivative with respect to coordinate i, as a new shared tree.
inline NodePtr derivative(const NodePtr& n, int i) {
    using K = Node::Kind;
    switch (n->kind) {
        case K::number: return number(0.0);
        case K::coord: return number(n->index == i ? 1.0 : 0.0);
        case K::radius: return div(coord(i), radius()); // d|x|/dx_i = x_i / |x|
        case K::add: return add(derivative(n->a, i), derivative(n->b, i));
        case K::sub: return sub(derivative(n->a, i), derivative(n->b, i));
        case K::mul:
            return add(mul(derivative(n->a, i), n->b), mul(n->a, derivative(n->b, i)));
        case K::div:
            return sub(div(derivative(n->a, i), n->b),
                       div(mul(n->a, derivative(n->b, i)), mul(n->b, n->b)));
        case K::neg: return neg(derivative(n->a, i));
        case K::pow:
            return mul(mul(number(n->num), pow(n->a, n->num - 1.0)), derivative(n->a, i));
        case K::exp_fn: return mul(call(K::exp_fn, n->a), derivative(n->a, i));
        case K::log_fn: return div(derivative(n->a, i), n->a);
        case K::abs_fn: // d|u| = sign(u) du, written as (u/|u|) du
            return mul(div(n->a, call(K::abs_fn, n->a)), derivative(n->a, i));
    }
    return number(0.0);
}

} // namespace ast

namespace detail {

struct Token {
    enum class Type { number, identifier, plus, minus, star, slash, caret, lparen, rparen, end };
    Type type;
    std::size_t offset;
    double num = 0.0;
    std::string text;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::size_t at = pos_;
        if (pos_ >= src_.size()) return {Token::Type::end, at};
        const char c = src_[pos_];
        switch (c) {
            case '+': ++pos_; return {Token::Type::plus, at};
            case '-': ++pos_; return {Token::Type::minus, at};
            case '*': ++pos_; return {Token::Type::star, at};
            case '/': ++pos_; return {Token::Type::slash, at};
            case '^': ++pos_; return {Token::Type::caret, at};
            case '(': ++pos_; return {Token::Type::lparen, at};
            case ')': ++pos_; return {Token::Type::rparen, at};
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            std::size_t end = pos_;
            while (end < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[end])) || src_[end] == '.'))
                ++end;
            if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
                std::size_t e = end + 1;
                if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
                if (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) {
                    ++e;
                    while (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) ++e;
                    end = e;
                }
            }
            Token t{Token::Type::number, at};
            try {
                t.num = std::stod(src_.substr(pos_, end - pos_));
            } catch (const std::exception&) {
                throw ParseError("malformed number literal", at);
            }
            pos_ = end;
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t end = pos_;
            while (end < src_.size() && std::isalnum(static_cast<unsigned char>(src_[end]))) ++end;
            Token t{Token::Type::identifier, at};
            t.text = src_.substr(pos_, end - pos_);
            pos_ = end;
            return t;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", at);
    }

private:
    const std::string& src_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    Parser(const std::string& src, int n) : lexer_(src), n_(n) { advance(); }

    ast::NodePtr parse() {
        ast::NodePtr e = parse_expr();
        if (tok_.type != Token::Type::end) throw ParseError("unexpected trailing input", tok_.offset);
        return e;
    }

private:
    void advance() { tok_ = lexer_.next(); }

    ast::NodePtr parse_expr() {
        ast::NodePtr e = parse_term();
        while (tok_.type == Token::Type::plus || tok_.type == Token::Type::minus) {
            const bool plus = tok_.type == Token::Type::plus;
            advance();
            ast::NodePtr rhs = parse_term();
            e = plus ? ast::add(std::move(e), std::move(rhs)) : ast::sub(std::move(e), std::move(rhs));
        }
        return e;
    }

    ast::NodePtr parse_term() {
        ast::NodePtr e = parse_factor();
        while (tok_.type == Token::Type::star || tok_.type == Token::Type::slash) {
            const bool star = tok_.type == Token::Type::star;
            advance();
            ast::NodePtr rhs = parse_factor();
            e = star ? ast::mul(std::move(e), std::move(rhs)) : ast::div(std::move(e), std::move(rhs));
        }
        return e;
    }

    ast::NodePtr parse_factor() {
        bool negate = false;
        if (tok_.type == Token::Type::minus) { // unary minus, e.g. "-r^2" = -(r^2)
            negate = true;
            advance();
        }
        ast::NodePtr e = parse_base();
        if (tok_.type == Token::Type::caret) {
            advance();
            double sign = 1.0;
            if (tok_.type == Token::Type::minus) {
                sign = -1.0;
                advance();
            }
            if (tok_.type != Token::Type::number)
                throw ParseError("exponent must be a number literal", tok_.offset);
            e = ast::pow(std::move(e), sign * tok_.num);
            advance();
        }
        return negate ? ast::neg(std::move(e)) : e;
    }

    ast::NodePtr parse_base() {
        using K = ast::Node::Kind;
        switch (tok_.type) {
            case Token::Type::number: {
                ast::NodePtr e = ast::number(tok_.num);
                advance();
                return e;
            }
            case Token::Type::lparen: {
                advance();
                ast::NodePtr e = parse_expr();
                expect(Token::Type::rparen, "expected ')'");
                return e;
            }
            case Token::Type::identifier: {
                const Token id = tok_;
                advance();
                if (id.text == "r") return ast::radius();
                if (id.text.size() >= 2 && id.text[0] == 'x') {
                    int k = 0;
                    for (std::size_t p = 1; p < id.text.size(); ++p) {
                        if (!std::isdigit(static_cast<unsigned char>(id.text[p])))
                            throw ParseError("unknown identifier '" + id.text + "'", id.offset);
                        k = k * 10 + (id.text[p] - '0');
                    }
                    if (k < 1 || k > n_)
                        throw ParseError("coordinate " + id.text + " out of range for dimension " +
                                             std::to_string(n_),
                                         id.offset);
                    return ast::coord(k - 1);
                }
                if (id.text == "sqrt" || id.text == "exp" || id.text == "log" || id.text == "abs") {
                    expect(Token::Type::lparen, "expected '(' after function name");
                    ast::NodePtr arg = parse_expr();
                    expect(Token::Type::rparen, "expected ')'");
                    if (id.text == "sqrt") return ast::pow(std::move(arg), 0.5);
                    if (id.text == "exp") return ast::call(K::exp_fn, std::move(arg));
                    if (id.text == "log") return ast::call(K::log_fn, std::move(arg));
                    return ast::call(K::abs_fn, std::move(arg));
                }
                throw ParseError("unknown identifier '" + id.text + "'", id.offset);
            }
            default:
                throw ParseError("expected a value", tok_.offset);
        }
    }

    void expect(Token::Type t, const char* message) {
        if (tok_.type != t) throw ParseError(message, tok_.offset);
        advance();
    }

    Lexer lexer_;
    Token tok_{};
    int n_;
};

} // namespace detail

//! Field backed by a parsed expression with symbolic derivatives. First and
//! second derivative trees are built eagerly; third-order trees on demand
//! (they are only needed by the flux-divergence identity checks).
class ExpressionField final : public ScalarField {
public:
    ExpressionField(int n, ast::NodePtr root) : ScalarField(n), root_(std::move(root)) {
        grads_.resize(n);
        for (int i = 0; i < n; ++i) grads_[i] = ast::derivative(root_, i);
        hess_.resize(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                hess_[idx2(i, j)] = hess_[idx2(j, i)] = ast::derivative(grads_[i], j);
    }

    double value(const Vec& x) const override { return ast::eval(*root_, x, norm(x)); }

    bool has_analytic_derivatives() const override { return true; }

    Vec gradient(const Vec& x) const override {
        const double r = norm(x);
        Vec g(dim());
        for (int i = 0; i < dim(); ++i) g[i] = ast::eval(*grads_[i], x, r);
        return g;
    }

    Mat hessian(const Vec& x) const override {
        const double r = norm(x);
        Mat h(dim());
        for (int i = 0; i < dim(); ++i)
            for (int j = i; j < dim(); ++j) h(i, j) = h(j, i) = ast::eval(*hess_[idx2(i, j)], x, r);
        return h;
    }

    Ten3 third(const Vec& x) const override {
        build_third();
        const double r = norm(x);
        Ten3 t(dim());
        for (int i = 0; i < dim(); ++i)
            for (int j = i; j < dim(); ++j)
                for (int k = j; k < dim(); ++k) {
                    const double v = ast::eval(*third_[idx3(i, j, k)], x, r);
                    t(i, j, k) = t(i, k, j) = t(j, i, k) = v;
                    t(j, k, i) = t(k, i, j) = t(k, j, i) = v;
                }
        return t;
    }

    //! Declare that the field is singular on the sphere |x - c| = rho
    //! (difference stencils and quadrature keep clear of it).
    void declare_singular_sphere(Vec center, double rho) {
        singular_.push_back({std::move(center), rho});
    }

    double singular_distance(const Vec& x) const override {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& s : singular_) d = std::min(d, std::abs(norm(x - s.first) - s.second));
        return d;
    }

private:
    std::size_t idx2(int i, int j) const { return static_cast<std::size_t>(i) * dim() + j; }
    std::size_t idx3(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * dim() + j) * dim() + k;
    }

    void build_third() const {
        std::call_once(third_once_, [this] {
            const int n = dim();
            third_.resize(static_cast<std::size_t>(n) * n * n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j)
                    for (int k = j; k < n; ++k) {
                        ast::NodePtr d = ast::derivative(hess_[idx2(i, j)], k);
                        third_[idx3(i, j, k)] = third_[idx3(i, k, j)] = third_[idx3(j, i, k)] = d;
                        third_[idx3(j, k, i)] = third_[idx3(k, i, j)] = third_[idx3(k, j, i)] = d;
                    }
        });
    }

    ast::NodePtr root_;
    std::vector<ast::NodePtr> grads_;
    std::vector<ast::NodePtr> hess_;
    mutable std::vector<ast::NodePtr> third_;
    mutable std::once_flag third_once_;
    std::vector<std::pair<Vec, double>> singular_;
};

//! Parse `expr` over coordinates x1..xn (r = |x|) into a field with symbolic
//! derivatives. Throws ParseError with the byte offset on syntax errors and
//! unknown identifiers.
inline std::shared_ptr<ExpressionField> parse_field(const std::string& expr, int n) {
    check_dim(n, 1, 9, "parse_field");
    detail::Parser parser(expr, n);
    return std::make_shared<ExpressionField>(n, parser.parse());
}

} // namespace afmass::fields
