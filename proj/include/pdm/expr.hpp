#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pdm/dual.hpp"
#include "pdm/errors.hpp"

// Symbolic expressions in one variable `x` plus named parameters, parsed
// from text.  Supported forms: numeric literals, + - * / ^ (right
// associative), unary minus, parentheses, and the functions exp, ln, sqrt,
// sin, cos, sinh, cosh, asinh, abs.  Evaluation is generic over the scalar
// type so the same tree yields values, first or second derivatives.

namespace pdm {

enum class FuncId { Exp, Ln, Sqrt, Sin, Cos, Sinh, Cosh, Asinh, Abs };

namespace expr_detail {

inline const std::map<std::string, FuncId>& function_table() {
    static const std::map<std::string, FuncId> table = {
        {"exp", FuncId::Exp},   {"ln", FuncId::Ln},     {"sqrt", FuncId::Sqrt},
        {"sin", FuncId::Sin},   {"cos", FuncId::Cos},   {"sinh", FuncId::Sinh},
        {"cosh", FuncId::Cosh}, {"asinh", FuncId::Asinh}, {"abs", FuncId::Abs},
    };
    return table;
}

inline const char* function_name(FuncId id) {
    switch (id) {
        case FuncId::Exp: return "exp";
        case FuncId::Ln: return "ln";
        case FuncId::Sqrt: return "sqrt";
        case FuncId::Sin: return "sin";
        case FuncId::Cos: return "cos";
        case FuncId::Sinh: return "sinh";
        case FuncId::Cosh: return "cosh";
        case FuncId::Asinh: return "asinh";
        case FuncId::Abs: return "abs";
    }
    return "?";
}

template <class T>
T apply_function(FuncId id, const T& a) {
    switch (id) {
        case FuncId::Exp: return smath::exp(a);
        case FuncId::Ln: return smath::ln(a);
        case FuncId::Sqrt: return smath::sqrt(a);
        case FuncId::Sin: return smath::sin(a);
        case FuncId::Cos: return smath::cos(a);
        case FuncId::Sinh: return smath::sinh(a);
        case FuncId::Cosh: return smath::cosh(a);
        case FuncId::Asinh: return smath::asinh(a);
        case FuncId::Abs: return smath::abs(a);
    }
    throw ConfigError("unreachable function id");
}

template <class T>
T constant_of(double c);
template <>
inline double constant_of<double>(double c) { return c; }
template <>
inline Dual constant_of<Dual>(double c) { return {c, 0.0}; }
template <>
inline Dual2 constant_of<Dual2>(double c) { return {c, 0.0, 0.0}; }

inline bool all_finite(double x) { return std::isfinite(x); }
inline bool all_finite(const Dual& x) {
    return std::isfinite(x.v) && std::isfinite(x.d);
}
inline bool all_finite(const Dual2& x) {
    return std::isfinite(x.v) && std::isfinite(x.d) && std::isfinite(x.dd);
}

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace expr_detail

class Expr {
public:
    static Expr parse(const std::string& source) {
        Parser p(source);
        Expr e;
        e.root_ = p.parse_all(e.nodes_);
        return e;
    }

    // Evaluate at x with the given parameter bindings.  T is double, Dual
    // or Dual2; for the dual types the derivative tracks x, parameters are
    // held constant.  Unbound parameters raise ConfigError; a non-finite
    // result raises NumericError.
    template <class T>
    T eval(T x, const std::map<std::string, double>& params = {}) const {
        T r = eval_node<T>(root_, x, params);
        if (!expr_detail::all_finite(r))
            throw NumericError("expression produced a non-finite value");
        return r;
    }

    // Names of all parameters appearing in the tree (everything that is not
    // the variable x, a literal or a function).
    std::set<std::string> parameters() const {
        std::set<std::string> out;
        for (const Node& n : nodes_)
            if (n.kind == Kind::Parameter) out.insert(n.name);
        return out;
    }

    // Copy of the tree with the listed parameters replaced by literals.
    Expr substitute(const std::map<std::string, double>& params) const {
        Expr e(*this);
        for (Node& n : e.nodes_) {
            if (n.kind != Kind::Parameter) continue;
            auto it = params.find(n.name);
            if (it == params.end()) continue;
            n.kind = Kind::Number;
            n.number = it->second;
            n.name.clear();
        }
        return e;
    }

    // Text form that parses back to an identical tree.  Parentheses are
    // emitted only where precedence demands them.
    std::string serialize() const { return print(root_, 0); }

private:
    enum class Kind { Number, Variable, Parameter, Unary, Binary, Call };
    enum class Op { Add, Sub, Mul, Div, Pow, Neg };

    struct Node {
        Kind kind{};
        double number = 0.0;
        std::string name;
        Op op{};
        FuncId func{};
        int a = -1;
        int b = -1;
    };

    std::vector<Node> nodes_;
    int root_ = -1;

    // ---- evaluation --------------------------------------------------------

    template <class T>
    T eval_node(int idx, const T& x,
                const std::map<std::string, double>& params) const {
        const Node& n = nodes_[idx];
        switch (n.kind) {
            case Kind::Number:
                return expr_detail::constant_of<T>(n.number);
            case Kind::Variable:
                return x;
            case Kind::Parameter: {
                auto it = params.find(n.name);
                if (it == params.end())
                    throw ConfigError("unbound parameter '" + n.name + "'");
                return expr_detail::constant_of<T>(it->second);
            }
            case Kind::Unary:
                return -eval_node<T>(n.a, x, params);
            case Kind::Binary: {
                T lhs = eval_node<T>(n.a, x, params);
                T rhs = eval_node<T>(n.b, x, params);
                switch (n.op) {
                    case Op::Add: return lhs + rhs;
                    case Op::Sub: return lhs - rhs;
                    case Op::Mul: return lhs * rhs;
                    case Op::Div: return lhs / rhs;
                    case Op::Pow: return smath::pow(lhs, rhs);
                    default: break;
                }
                throw ConfigError("unreachable operator");
            }
            case Kind::Call:
                return expr_detail::apply_function(
                    n.func, eval_node<T>(n.a, x, params));
        }
        throw ConfigError("unreachable node kind");
    }

    // ---- printing ----------------------------------------------------------

    // Precedence levels: 1 add, 2 mul, 3 unary minus, 4 pow, 5 atoms.
    int precedence(int idx) const {
        const Node& n = nodes_[idx];
        switch (n.kind) {
            case Kind::Unary: return 3;
            case Kind::Binary:
                switch (n.op) {
                    case Op::Add: case Op::Sub: return 1;
                    case Op::Mul: case Op::Div: return 2;
                    case Op::Pow: return 4;
                    default: break;
                }
                return 5;
            default: return 5;
        }
    }

    std::string wrap(int idx, int min_prec) const {
        std::string s = print(idx, 0);
        if (precedence(idx) < min_prec) return "(" + s + ")";
        return s;
    }

    std::string print(int idx, int) const {
        const Node& n = nodes_[idx];
        switch (n.kind) {
            case Kind::Number:
                return expr_detail::format_number(n.number);
            case Kind::Variable:
                return "x";
            case Kind::Parameter:
                return n.name;
            case Kind::Unary:
                return "-" + wrap(n.a, 3);
            case Kind::Binary: {
                switch (n.op) {
                    case Op::Add:
                        return wrap(n.a, 1) + "+" + wrap(n.b, 2);
                    case Op::Sub:
                        return wrap(n.a, 1) + "-" + wrap(n.b, 2);
                    case Op::Mul:
                        return wrap(n.a, 2) + "*" + wrap(n.b, 3);
                    case Op::Div:
                        return wrap(n.a, 2) + "/" + wrap(n.b, 3);
                    case Op::Pow:
                        // Base must sit at atom level; exponent admits a
                        // leading minus but nothing looser.
                        return wrap(n.a, 5) + "^" + wrap(n.b, 3);
                    default: break;
                }
                return "?";
            }
            case Kind::Call:
                return std::string(expr_detail::function_name(n.func)) + "(" +
                       print(n.a, 0) + ")";
        }
        return "?";
    }

    // ---- parsing -----------------------------------------------------------

    class Parser {
    public:
        explicit Parser(const std::string& src) : src_(src) {}

        int parse_all(std::vector<Node>& nodes) {
            nodes_ = &nodes;
            pos_ = 0;
            depth_ = 0;
            skip_ws();
            if (pos_ >= src_.size())
                throw ParseError("empty expression", 0);
            int root = parse_sum();
            skip_ws();
            if (pos_ < src_.size())
                throw ParseError(
                    "unexpected trailing input '" + src_.substr(pos_) + "'",
                    pos_);
            return root;
        }

    private:
        const std::string& src_;
        std::vector<Node>* nodes_ = nullptr;
        std::size_t pos_ = 0;
        int depth_ = 0;

        static constexpr int kMaxDepth = 200;

        struct DepthGuard {
            int& d;
            std::size_t at;
            explicit DepthGuard(int& depth, std::size_t pos) : d(depth), at(pos) {
                if (++d > kMaxDepth)
                    throw ParseError("expression nested too deeply", at);
            }
            ~DepthGuard() { --d; }
        };

        int add_node(Node n) {
            nodes_->push_back(std::move(n));
            return static_cast<int>(nodes_->size()) - 1;
        }

        void skip_ws() {
            while (pos_ < src_.size() &&
                   std::isspace(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
        }

        bool eat(char c) {
            skip_ws();
            if (pos_ < src_.size() && src_[pos_] == c) {
                ++pos_;
                return true;
            }
            return false;
        }

        char peek() {
            skip_ws();
            return pos_ < src_.size() ? src_[pos_] : '\0';
        }

        int parse_sum() {
            DepthGuard g(depth_, pos_);
            int lhs = parse_product();
            for (;;) {
                if (eat('+')) {
                    int rhs = parse_product();
                    lhs = add_node({Kind::Binary, 0, "", Op::Add, {}, lhs, rhs});
                } else if (eat('-')) {
                    int rhs = parse_product();
                    lhs = add_node({Kind::Binary, 0, "", Op::Sub, {}, lhs, rhs});
                } else {
                    return lhs;
                }
            }
        }

        int parse_product() {
            DepthGuard g(depth_, pos_);
            int lhs = parse_unary();
            for (;;) {
                if (eat('*')) {
                    int rhs = parse_unary();
                    lhs = add_node({Kind::Binary, 0, "", Op::Mul, {}, lhs, rhs});
                } else if (eat('/')) {
                    int rhs = parse_unary();
                    lhs = add_node({Kind::Binary, 0, "", Op::Div, {}, lhs, rhs});
                } else {
                    return lhs;
                }
            }
        }

        int parse_unary() {
            DepthGuard g(depth_, pos_);
            if (eat('-')) {
                int inner = parse_unary();
                return add_node({Kind::Unary, 0, "", Op::Neg, {}, inner, -1});
            }
            return parse_power();
        }

        int parse_power() {
            DepthGuard g(depth_, pos_);
            int base = parse_atom();
            if (eat('^')) {
                // Right associative; the exponent may start with a minus.
                int expo = parse_unary();
                return add_node({Kind::Binary, 0, "", Op::Pow, {}, base, expo});
            }
            return base;
        }

        int parse_atom() {
            DepthGuard g(depth_, pos_);
            skip_ws();
            if (pos_ >= src_.size())
                throw ParseError("unexpected end of expression", pos_);
            const char c = src_[pos_];
            if (c == '(') {
                ++pos_;
                int inner = parse_sum();
                if (!eat(')'))
                    throw ParseError("missing ')'", pos_);
                return inner;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
                return parse_number();
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
                return parse_name();
            throw ParseError(std::string("unexpected character '") + c + "'",
                             pos_);
        }

        int parse_number() {
            const std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   std::isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
            if (pos_ < src_.size() && src_[pos_] == '.') {
                ++pos_;
                while (pos_ < src_.size() &&
                       std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            }
            if (pos_ == start ||
                (pos_ == start + 1 && src_[start] == '.'))
                throw ParseError("malformed number", start);
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                std::size_t mark = pos_;
                ++pos_;
                if (pos_ < src_.size() &&
                    (src_[pos_] == '+' || src_[pos_] == '-'))
                    ++pos_;
                if (pos_ < src_.size() &&
                    std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    while (pos_ < src_.size() &&
                           std::isdigit(static_cast<unsigned char>(src_[pos_])))
                        ++pos_;
                } else {
                    // Not an exponent after all; let 'e' read as a name later.
                    pos_ = mark;
                }
            }
            const std::string text = src_.substr(start, pos_ - start);
            try {
                return add_node({Kind::Number, std::stod(text), "", {}, {}, -1, -1});
            } catch (const std::exception&) {
                throw ParseError("malformed number '" + text + "'", start);
            }
        }

        int parse_name() {
            const std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                    src_[pos_] == '_'))
                ++pos_;
            const std::string name = src_.substr(start, pos_ - start);
            if (peek() == '(') {
                const auto& table = expr_detail::function_table();
                auto it = table.find(name);
                if (it == table.end())
                    throw ParseError("unknown function '" + name + "'", start);
                ++pos_; // consume '('
                int arg = parse_sum();
                if (!eat(')'))
                    throw ParseError("missing ')' after " + name + "(...",
                                     pos_);
                return add_node({Kind::Call, 0, "", {}, it->second, arg, -1});
            }
            if (name == "x")
                return add_node({Kind::Variable, 0, "", {}, {}, -1, -1});
            return add_node({Kind::Parameter, 0, name, {}, {}, -1, -1});
        }
    };
};

} // namespace pdm
