#pragma once

// Expression language for the key function f(x, t): parser, evaluator, printer and
// symbolic partial derivatives.
//
//   expr  := term (('+' | '-') term)*
//   term  := unary (('*' | '/') unary)*
//   unary := ('-' | '+') unary | power
//   power := primary ('^' unary)?
//   primary := number | 'x' | 't' | 'pi' | func '(' expr ')' | '(' expr ')'
//   func  := sin | cos | exp | sqrt | log
//
// Presets: "zero", "linear:a,b" (a*x + b*t), "bent:c" (c*x*t).

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "fttsim/errors.hpp"

namespace fttsim {

enum class Variable { x, t };

namespace phase {

enum class Op { constant, variable, negate, add, subtract, multiply, divide, power, function };
enum class Func { sin, cos, exp, sqrt, log };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Op op;
    double value = 0.0;
    Variable var = Variable::x;
    Func func = Func::sin;
    NodePtr lhs;
    NodePtr rhs;
};

inline NodePtr make_node(Op op, double value = 0.0, Variable var = Variable::x, Func func = Func::sin,
                         NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    return std::make_shared<const Node>(Node{op, value, var, func, std::move(lhs), std::move(rhs)});
}

inline bool is_const(const NodePtr& n) { return n->op == Op::constant; }
inline bool is_const(const NodePtr& n, double v) { return n->op == Op::constant && n->value == v; }

inline NodePtr constant(double v) { return make_node(Op::constant, v); }
inline NodePtr variable(Variable v) { return make_node(Op::variable, 0.0, v); }

inline NodePtr negate(NodePtr a) {
    if (is_const(a)) return constant(-a->value);
    if (a->op == Op::negate) return a->lhs;
    return make_node(Op::negate, 0.0, Variable::x, Func::sin, std::move(a));
}

inline NodePtr binary(Op op, NodePtr a, NodePtr b) {
    return make_node(op, 0.0, Variable::x, Func::sin, std::move(a), std::move(b));
}

inline NodePtr add(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return constant(a->value + b->value);
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    return binary(Op::add, std::move(a), std::move(b));
}

inline NodePtr subtract(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return constant(a->value - b->value);
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return negate(std::move(b));
    return binary(Op::subtract, std::move(a), std::move(b));
}

inline NodePtr multiply(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return constant(a->value * b->value);
    if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (is_const(a, -1.0)) return negate(std::move(b));
    if (is_const(b, -1.0)) return negate(std::move(a));
    return binary(Op::multiply, std::move(a), std::move(b));
}

inline NodePtr divide(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0) && !is_const(b, 0.0)) return constant(0.0);
    if (is_const(b, 1.0)) return a;
    if (is_const(a) && is_const(b) && b->value != 0.0) return constant(a->value / b->value);
    return binary(Op::divide, std::move(a), std::move(b));
}

inline NodePtr power(NodePtr a, NodePtr b) {
    if (is_const(b, 0.0)) return constant(1.0);
    if (is_const(b, 1.0)) return a;
    if (is_const(a) && is_const(b)) {
        const double v = std::pow(a->value, b->value);
        if (std::isfinite(v)) return constant(v);
    }
    return binary(Op::power, std::move(a), std::move(b));
}

inline NodePtr apply(Func f, NodePtr a) {
    return make_node(Op::function, 0.0, Variable::x, f, std::move(a));
}

inline const char* func_name(Func f) {
    switch (f) {
        case Func::sin: return "sin";
        case Func::cos: return "cos";
        case Func::exp: return "exp";
        case Func::sqrt: return "sqrt";
        case Func::log: return "log";
    }
    return "?";
}

inline double evaluate(const Node& n, double x, double t) {
    switch (n.op) {
        case Op::constant: return n.value;
        case Op::variable: return n.var == Variable::x ? x : t;
        case Op::negate: return -evaluate(*n.lhs, x, t);
        case Op::add: return evaluate(*n.lhs, x, t) + evaluate(*n.rhs, x, t);
        case Op::subtract: return evaluate(*n.lhs, x, t) - evaluate(*n.rhs, x, t);
        case Op::multiply: return evaluate(*n.lhs, x, t) * evaluate(*n.rhs, x, t);
        case Op::divide: {
            const double d = evaluate(*n.rhs, x, t);
            if (d == 0.0) throw DomainError("phase: division by zero");
            return evaluate(*n.lhs, x, t) / d;
        }
        case Op::power: {
            const double v = std::pow(evaluate(*n.lhs, x, t), evaluate(*n.rhs, x, t));
            if (!std::isfinite(v)) throw DomainError("phase: power undefined or overflowing");
            return v;
        }
        case Op::function: {
            const double a = evaluate(*n.lhs, x, t);
            switch (n.func) {
                case Func::sin: return std::sin(a);
                case Func::cos: return std::cos(a);
                case Func::exp: {
                    const double v = std::exp(a);
                    if (!std::isfinite(v)) throw DomainError("phase: exp overflow");
                    return v;
                }
                case Func::sqrt:
                    if (a < 0.0) throw DomainError("phase: sqrt of negative argument");
                    return std::sqrt(a);
                case Func::log:
                    if (a <= 0.0) throw DomainError("phase: log of non-positive argument");
                    return std::log(a);
            }
        }
    }
    return 0.0;
}

inline NodePtr differentiate(const NodePtr& n, Variable v) {
    switch (n->op) {
        case Op::constant: return constant(0.0);
        case Op::variable: return constant(n->var == v ? 1.0 : 0.0);
        case Op::negate: return negate(differentiate(n->lhs, v));
        case Op::add: return add(differentiate(n->lhs, v), differentiate(n->rhs, v));
        case Op::subtract: return subtract(differentiate(n->lhs, v), differentiate(n->rhs, v));
        case Op::multiply:
            return add(multiply(differentiate(n->lhs, v), n->rhs), multiply(n->lhs, differentiate(n->rhs, v)));
        case Op::divide:
            return divide(subtract(multiply(differentiate(n->lhs, v), n->rhs),
                                   multiply(n->lhs, differentiate(n->rhs, v))),
                          power(n->rhs, constant(2.0)));
        case Op::power: {
            const auto da = differentiate(n->lhs, v);
            const auto db = differentiate(n->rhs, v);
            if (is_const(db, 0.0))  // a^c: c a^(c-1) a'
                return multiply(multiply(n->rhs, power(n->lhs, subtract(n->rhs, constant(1.0)))), da);
            // a^b (b' log a + b a'/a)
            return multiply(n, add(multiply(db, apply(Func::log, n->lhs)), divide(multiply(n->rhs, da), n->lhs)));
        }
        case Op::function: {
            const auto da = differentiate(n->lhs, v);
            if (is_const(da, 0.0)) return constant(0.0);
            switch (n->func) {
                case Func::sin: return multiply(apply(Func::cos, n->lhs), da);
                case Func::cos: return negate(multiply(apply(Func::sin, n->lhs), da));
                case Func::exp: return multiply(n, da);
                case Func::sqrt: return divide(da, multiply(constant(2.0), n));
                case Func::log: return divide(da, n->lhs);
            }
        }
    }
    return constant(0.0);
}

inline int precedence(const Node& n) {
    switch (n.op) {
        case Op::add:
        case Op::subtract: return 1;
        case Op::multiply:
        case Op::divide: return 2;
        case Op::negate: return 3;
        case Op::power: return 4;
        case Op::constant: return n.value < 0.0 ? 0 : 5;
        default: return 5;
    }
}

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string print(const Node& n);

inline std::string print_wrapped(const Node& n, bool wrap) { return wrap ? "(" + print(n) + ")" : print(n); }

inline std::string print(const Node& n) {
    const int p = precedence(n);
    switch (n.op) {
        case Op::constant: return format_number(n.value);
        case Op::variable: return n.var == Variable::x ? "x" : "t";
        case Op::negate: return "-" + print_wrapped(*n.lhs, precedence(*n.lhs) < 3);
        case Op::function: return std::string(func_name(n.func)) + "(" + print(*n.lhs) + ")";
        case Op::power:
            return print_wrapped(*n.lhs, precedence(*n.lhs) <= 4) + "^" +
                   print_wrapped(*n.rhs, precedence(*n.rhs) < 4);
        default: {
            const char* sym = n.op == Op::add ? " + " : n.op == Op::subtract ? " - " : n.op == Op::multiply ? "*" : "/";
            // right operands of equal precedence keep their parentheses: floating-point + and *
            // are not associative, and the printed form must re-evaluate bit for bit
            return print_wrapped(*n.lhs, precedence(*n.lhs) < p) + sym + print_wrapped(*n.rhs, precedence(*n.rhs) <= p);
        }
    }
}

inline bool depends_on(const Node& n, Variable v) {
    if (n.op == Op::variable) return n.var == v;
    if (n.lhs && depends_on(*n.lhs, v)) return true;
    if (n.rhs && depends_on(*n.rhs, v)) return true;
    return false;
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse() {
        skip_space();
        if (pos_ >= src_.size()) fail({"expression"}, "empty input");
        auto n = expr();
        skip_space();
        if (pos_ < src_.size()) fail({"operator", "end of input"}, "unexpected character '" + std::string(1, src_[pos_]) + "'");
        return n;
    }

private:
    [[noreturn]] void fail(std::vector<std::string> expected, const std::string& detail) const {
        throw ParseError(pos_, std::move(expected), detail);
    }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        auto n = term();
        while (true) {
            if (accept('+')) n = binary(Op::add, n, term());
            else if (accept('-')) n = binary(Op::subtract, n, term());
            else return n;
        }
    }

    NodePtr term() {
        auto n = unary();
        while (true) {
            if (accept('*')) n = binary(Op::multiply, n, unary());
            else if (accept('/')) n = binary(Op::divide, n, unary());
            else return n;
        }
    }

    NodePtr unary() {
        if (accept('-')) {
            auto a = unary();
            return is_const(a) ? constant(-a->value) : make_node(Op::negate, 0.0, Variable::x, Func::sin, a);
        }
        if (accept('+')) return unary();
        return pow_expr();
    }

    NodePtr pow_expr() {
        auto base = primary();
        if (accept('^')) return binary(Op::power, base, unary());
        return base;
    }

    NodePtr primary() {
        skip_space();
        if (pos_ >= src_.size()) fail({"number", "identifier", "("}, "unexpected end of input");
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        if (accept('(')) {
            auto n = expr();
            if (!accept(')')) fail({")"}, "unbalanced parenthesis");
            return n;
        }
        fail({"number", "identifier", "("}, "unexpected character '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
                pos_ = p;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            }
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
        if (ec != std::errc() || ptr != src_.data() + pos_) {
            pos_ = start;
            fail({"number"}, "malformed number");
        }
        return constant(v);
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);
        if (name == "x") return variable(Variable::x);
        if (name == "t") return variable(Variable::t);
        if (name == "pi") return constant(std::numbers::pi);
        static constexpr Func funcs[] = {Func::sin, Func::cos, Func::exp, Func::sqrt, Func::log};
        for (Func f : funcs) {
            if (name == func_name(f)) {
                if (!accept('(')) fail({"("}, "function '" + std::string(name) + "' requires an argument list");
                auto arg = expr();
                if (!accept(')')) fail({")"}, "unbalanced parenthesis");
                return apply(f, arg);
            }
        }
        pos_ = start;
        fail({"x", "t", "pi", "sin", "cos", "exp", "sqrt", "log"}, "unknown identifier '" + std::string(name) + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

inline double parse_preset_number(std::string_view s, std::string_view preset) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError(0, {"number"}, "bad parameter in preset '" + std::string(preset) + "'");
    return v;
}

}  // namespace phase

/// Parsed key function f(x, t) with its first partial derivatives, which are
/// built once at construction. Immutable and cheap to copy.
class PhaseExpr {
public:
    PhaseExpr() : PhaseExpr(phase::constant(0.0), "0") {}

    explicit PhaseExpr(phase::NodePtr root, std::string source = {})
        : root_(std::move(root)),
          dx_(phase::differentiate(root_, Variable::x)),
          dt_(phase::differentiate(root_, Variable::t)),
          source_(source.empty() ? phase::print(*root_) : std::move(source)) {}

    static PhaseExpr parse(std::string_view src) {
        if (src == "zero") return PhaseExpr(phase::constant(0.0), std::string(src));
        if (src.starts_with("linear:")) {
            const auto body = src.substr(7);
            const auto comma = body.find(',');
            if (comma == std::string_view::npos)
                throw ParseError(src.size(), {","}, "preset 'linear:a,b' needs two coefficients");
            const double a = phase::parse_preset_number(body.substr(0, comma), src);
            const double b = phase::parse_preset_number(body.substr(comma + 1), src);
            using namespace phase;
            return PhaseExpr(add(multiply(constant(a), variable(Variable::x)), multiply(constant(b), variable(Variable::t))),
                             std::string(src));
        }
        if (src.starts_with("bent:")) {
            const double c = phase::parse_preset_number(src.substr(5), src);
            using namespace phase;
            return PhaseExpr(multiply(multiply(constant(c), variable(Variable::x)), variable(Variable::t)),
                             std::string(src));
        }
        return PhaseExpr(phase::Parser(src).parse(), std::string(src));
    }

    double operator()(double x, double t) const { return phase::evaluate(*root_, x, t); }
    double dx(double x, double t) const { return phase::evaluate(*dx_, x, t); }
    double dt(double x, double t) const { return phase::evaluate(*dt_, x, t); }

    PhaseExpr derivative(Variable v) const { return PhaseExpr(v == Variable::x ? dx_ : dt_); }

    bool depends_on(Variable v) const { return phase::depends_on(*root_, v); }
    bool is_zero() const { return phase::is_const(root_, 0.0); }

    const std::string& source() const noexcept { return source_; }
    std::string to_string() const { return phase::print(*root_); }
    const phase::NodePtr& root() const noexcept { return root_; }

private:
    phase::NodePtr root_;
    phase::NodePtr dx_;
    phase::NodePtr dt_;
    std::string source_;
};

inline PhaseExpr parse_phase(std::string_view src) {
    if (src.empty()) throw ParseError(0, {"expression"}, "empty input");
    return PhaseExpr::parse(src);
}

inline double eval_phase(const PhaseExpr& e, double x, double t) {
    if (!std::isfinite(x) || !std::isfinite(t)) throw DomainError("eval_phase: non-finite input");
    return e(x, t);
}

inline PhaseExpr diff_phase(const PhaseExpr& e, Variable v) { return e.derivative(v); }

}  // namespace fttsim
