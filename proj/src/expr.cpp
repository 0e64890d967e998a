#include "bingham2d/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

namespace bingham2d {

ParseError::ParseError(std::size_t offset, std::string expected)
    : std::runtime_error("parse error at byte " + std::to_string(offset) + ": expected " + expected),
      offset_(offset),
      expected_(std::move(expected)) {}

namespace {

enum class Op {
    Number,
    VarX,
    VarY,
    VarT,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Neg,
    Sin,
    Cos,
    Exp,
    Sqrt,
    Abs,
    Min,
    Max,
    Bump,
};

bool is_binary(Op op) {
    switch (op) {
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
        case Op::Pow:
        case Op::Min:
        case Op::Max:
        case Op::Bump:
            return true;
        default:
            return false;
    }
}

}  // namespace

struct Expr::Node {
    Op op;
    double value = 0.0;
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_leaf(Op op, double value = 0.0) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->value = value;
    return n;
}

NodePtr make_unary(Op op, NodePtr a) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->a = std::move(a);
    return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

double bump_profile(double z) {
    const double z2 = z * z;
    if (z2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - z2));
}

class Parser {
  public:
    explicit Parser(const std::string& src) : src_(src) {}

    NodePtr run() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError(pos_, "an expression");
        NodePtr e = parse_expr();
        skip_ws();
        if (pos_ < src_.size()) throw ParseError(pos_, "end of input or an operator");
        return e;
    }

  private:
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool peek_is(char c) {
        skip_ws();
        return pos_ < src_.size() && src_[pos_] == c;
    }

    bool consume(char c) {
        if (peek_is(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!consume(c)) throw ParseError(pos_, what);
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (consume('+')) {
                lhs = make_binary(Op::Add, lhs, parse_term());
            } else if (consume('-')) {
                lhs = make_binary(Op::Sub, lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_factor();
        for (;;) {
            if (consume('*')) {
                lhs = make_binary(Op::Mul, lhs, parse_factor());
            } else if (consume('/')) {
                lhs = make_binary(Op::Div, lhs, parse_factor());
            } else {
                return lhs;
            }
        }
    }

    // Unary minus binds looser than ^, so -x^2 parses as -(x^2).
    NodePtr parse_factor() {
        if (consume('-')) return make_unary(Op::Neg, parse_factor());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (consume('^')) return make_binary(Op::Pow, base, parse_factor());
        return base;
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError(pos_, "a number, name, or '('");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_expr();
            expect(')', "')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
        throw ParseError(pos_, "a number, name, or '('");
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
            ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t probe = pos_ + 1;
            if (probe < src_.size() && (src_[probe] == '+' || src_[probe] == '-')) ++probe;
            if (probe < src_.size() && std::isdigit(static_cast<unsigned char>(src_[probe]))) {
                pos_ = probe;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            }
        }
        const std::string text = src_.substr(start, pos_ - start);
        try {
            std::size_t used = 0;
            const double v = std::stod(text, &used);
            if (used != text.size()) throw ParseError(start, "a valid number");
            return make_leaf(Op::Number, v);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError(start, "a valid number");
        }
    }

    NodePtr parse_name() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                      src_[pos_] == '_'))
            ++pos_;
        const std::string name = src_.substr(start, pos_ - start);
        if (name == "x") return make_leaf(Op::VarX);
        if (name == "y") return make_leaf(Op::VarY);
        if (name == "t") return make_leaf(Op::VarT);
        if (name == "pi") return make_leaf(Op::Number, 3.14159265358979323846);
        const Op unary[] = {Op::Sin, Op::Cos, Op::Exp, Op::Sqrt, Op::Abs};
        const char* unary_names[] = {"sin", "cos", "exp", "sqrt", "abs"};
        for (int i = 0; i < 5; ++i) {
            if (name == unary_names[i]) {
                expect('(', "'(' after function name");
                NodePtr a = parse_expr();
                expect(')', "')'");
                return make_unary(unary[i], a);
            }
        }
        const Op binary[] = {Op::Min, Op::Max, Op::Bump};
        const char* binary_names[] = {"min", "max", "bump"};
        for (int i = 0; i < 3; ++i) {
            if (name == binary_names[i]) {
                expect('(', "'(' after function name");
                NodePtr a = parse_expr();
                expect(',', "','");
                NodePtr b = parse_expr();
                expect(')', "')'");
                return make_binary(binary[i], a, b);
            }
        }
        throw ParseError(start, "one of x, y, t, pi, sin, cos, exp, sqrt, abs, min, max, bump");
    }

    const std::string& src_;
    std::size_t pos_ = 0;
};

double eval_node(const Expr::Node& n, double x, double y, double t) {
    switch (n.op) {
        case Op::Number:
            return n.value;
        case Op::VarX:
            return x;
        case Op::VarY:
            return y;
        case Op::VarT:
            return t;
        case Op::Add:
            return eval_node(*n.a, x, y, t) + eval_node(*n.b, x, y, t);
        case Op::Sub:
            return eval_node(*n.a, x, y, t) - eval_node(*n.b, x, y, t);
        case Op::Mul:
            return eval_node(*n.a, x, y, t) * eval_node(*n.b, x, y, t);
        case Op::Div: {
            const double d = eval_node(*n.b, x, y, t);
            if (d == 0.0) throw EvalError("division by zero");
            return eval_node(*n.a, x, y, t) / d;
        }
        case Op::Pow: {
            const double base = eval_node(*n.a, x, y, t);
            const double expo = eval_node(*n.b, x, y, t);
            if (base < 0.0 && expo != std::floor(expo))
                throw EvalError("negative base raised to non-integer power");
            if (base == 0.0 && expo < 0.0) throw EvalError("zero raised to negative power");
            return std::pow(base, expo);
        }
        case Op::Neg:
            return -eval_node(*n.a, x, y, t);
        case Op::Sin:
            return std::sin(eval_node(*n.a, x, y, t));
        case Op::Cos:
            return std::cos(eval_node(*n.a, x, y, t));
        case Op::Exp:
            return std::exp(eval_node(*n.a, x, y, t));
        case Op::Sqrt: {
            const double v = eval_node(*n.a, x, y, t);
            if (v < 0.0) throw EvalError("square root of a negative number");
            return std::sqrt(v);
        }
        case Op::Abs:
            return std::fabs(eval_node(*n.a, x, y, t));
        case Op::Min:
            return std::min(eval_node(*n.a, x, y, t), eval_node(*n.b, x, y, t));
        case Op::Max:
            return std::max(eval_node(*n.a, x, y, t), eval_node(*n.b, x, y, t));
        case Op::Bump: {
            const double a = eval_node(*n.a, x, y, t);
            const double b = eval_node(*n.b, x, y, t);
            if (b <= a) throw EvalError("bump(a, b) requires a < b");
            const double zx = (2.0 * x - a - b) / (b - a);
            const double zy = (2.0 * y - a - b) / (b - a);
            return bump_profile(zx) * bump_profile(zy);
        }
    }
    throw EvalError("corrupt expression node");
}

void print_node(const Expr::Node& n, std::string& out) {
    char buf[64];
    switch (n.op) {
        case Op::Number:
            // negative literals print as a parenthesized negation so that a
            // reparse rebuilds the exact printed text
            if (n.value < 0.0) {
                std::snprintf(buf, sizeof(buf), "(-%.17g)", -n.value);
            } else {
                std::snprintf(buf, sizeof(buf), "%.17g", n.value);
            }
            out += buf;
            return;
        case Op::VarX:
            out += 'x';
            return;
        case Op::VarY:
            out += 'y';
            return;
        case Op::VarT:
            out += 't';
            return;
        case Op::Neg:
            out += "(-";
            print_node(*n.a, out);
            out += ')';
            return;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
        case Op::Pow: {
            const char* sym = n.op == Op::Add   ? " + "
                              : n.op == Op::Sub ? " - "
                              : n.op == Op::Mul ? " * "
                              : n.op == Op::Div ? " / "
                                                : " ^ ";
            out += '(';
            print_node(*n.a, out);
            out += sym;
            print_node(*n.b, out);
            out += ')';
            return;
        }
        case Op::Sin:
        case Op::Cos:
        case Op::Exp:
        case Op::Sqrt:
        case Op::Abs: {
            const char* name = n.op == Op::Sin    ? "sin"
                               : n.op == Op::Cos  ? "cos"
                               : n.op == Op::Exp  ? "exp"
                               : n.op == Op::Sqrt ? "sqrt"
                                                  : "abs";
            out += name;
            out += '(';
            print_node(*n.a, out);
            out += ')';
            return;
        }
        case Op::Min:
        case Op::Max:
        case Op::Bump: {
            const char* name = n.op == Op::Min ? "min" : n.op == Op::Max ? "max" : "bump";
            out += name;
            out += '(';
            print_node(*n.a, out);
            out += ", ";
            print_node(*n.b, out);
            out += ')';
            return;
        }
    }
}

NodePtr random_node(std::mt19937& rng, int depth) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (depth <= 0 || coin(rng) < 0.3) {
        const int pick = static_cast<int>(rng() % 5);
        switch (pick) {
            case 0:
                return make_leaf(Op::VarX);
            case 1:
                return make_leaf(Op::VarY);
            case 2:
                return make_leaf(Op::VarT);
            default: {
                std::uniform_real_distribution<double> val(0.0, 10.0);
                return make_leaf(Op::Number, val(rng));
            }
        }
    }
    const Op ops[] = {Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Pow, Op::Neg,
                      Op::Sin, Op::Cos, Op::Exp, Op::Sqrt, Op::Abs, Op::Min,
                      Op::Max, Op::Bump};
    const Op op = ops[rng() % (sizeof(ops) / sizeof(ops[0]))];
    if (is_binary(op)) return make_binary(op, random_node(rng, depth - 1), random_node(rng, depth - 1));
    return make_unary(op, random_node(rng, depth - 1));
}

}  // namespace

Expr Expr::parse(const std::string& src) {
    Parser p(src);
    return Expr(p.run());
}

double Expr::eval(double x, double y, double t) const {
    if (!root_) throw EvalError("empty expression");
    return eval_node(*root_, x, y, t);
}

std::string Expr::pretty() const {
    if (!root_) return "";
    std::string out;
    print_node(*root_, out);
    return out;
}

Expr Expr::random(std::mt19937& rng, int max_depth) {
    return Expr(random_node(rng, max_depth));
}

}  // namespace bingham2d
