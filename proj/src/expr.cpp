#include <cmath>
#include <cstdio>
#include <functional>

#include "expr_node.hpp"
#include "ruledlab/error.hpp"

namespace ruledlab::expr {

namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0,
             Fn fn = Fn::Sin) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    n->value = value;
    n->fn = fn;
    return n;
}

bool is_const(const Node& n, double v) { return n.op == Op::Const && n.value == v; }

[[noreturn]] void domain(const char* what) { throw Error(ErrorCode::DomainError, what); }

double apply_fn(Fn fn, double x) {
    switch (fn) {
        case Fn::Sin: return std::sin(x);
        case Fn::Cos: return std::cos(x);
        case Fn::Tan: return std::tan(x);
        case Fn::Sinh: return std::sinh(x);
        case Fn::Cosh: return std::cosh(x);
        case Fn::Tanh: return std::tanh(x);
        case Fn::Asinh: return std::asinh(x);
        case Fn::Acosh:
            if (x < 1.0) domain("acosh of argument below 1");
            return std::acosh(x);
        case Fn::Atanh:
            if (!(std::abs(x) < 1.0)) domain("atanh outside (-1, 1)");
            return std::atanh(x);
        case Fn::Exp: return std::exp(x);
        case Fn::Log:
            if (!(x > 0.0)) domain("log of non-positive argument");
            return std::log(x);
        case Fn::Sqrt:
            if (x < 0.0) domain("sqrt of negative argument");
            return std::sqrt(x);
        case Fn::Abs: return std::abs(x);
    }
    domain("unknown function");
}

double apply_pow(double base, double exponent) {
    const bool integral = std::floor(exponent) == exponent;
    if (base == 0.0 && exponent < 0.0) domain("zero raised to a negative power");
    if (!integral && base < 0.0) domain("non-integer power of a negative base");
    return std::pow(base, exponent);
}

double eval_node(const Node& n, double s) {
    double r = 0.0;
    switch (n.op) {
        case Op::Const: return n.value;
        case Op::Var: return s;
        case Op::Neg: return -eval_node(*n.lhs, s);
        case Op::Add: r = eval_node(*n.lhs, s) + eval_node(*n.rhs, s); break;
        case Op::Sub: r = eval_node(*n.lhs, s) - eval_node(*n.rhs, s); break;
        case Op::Mul: r = eval_node(*n.lhs, s) * eval_node(*n.rhs, s); break;
        case Op::Div: {
            const double den = eval_node(*n.rhs, s);
            if (den == 0.0) domain("division by zero");
            r = eval_node(*n.lhs, s) / den;
            break;
        }
        case Op::Pow: r = apply_pow(eval_node(*n.lhs, s), n.value); break;
        case Op::Func: r = apply_fn(n.fn, eval_node(*n.lhs, s)); break;
    }
    if (!std::isfinite(r)) domain("non-finite intermediate value");
    return r;
}

bool mentions_s(const Node& n) {
    switch (n.op) {
        case Op::Const: return false;
        case Op::Var: return true;
        default:
            return (n.lhs && mentions_s(*n.lhs)) || (n.rhs && mentions_s(*n.rhs));
    }
}

std::size_t count(const Node& n) {
    return 1 + (n.lhs ? count(*n.lhs) : 0) + (n.rhs ? count(*n.rhs) : 0);
}

std::string number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
    std::string out(buf);
    return v < 0 ? "(" + out + ")" : out;
}

void print(const Node& n, std::string& out) {
    switch (n.op) {
        case Op::Const: out += number(n.value); return;
        case Op::Var: out += 's'; return;
        case Op::Neg:
            out += "(-";
            print(*n.lhs, out);
            out += ')';
            return;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div: {
            static constexpr char ops[] = {'+', '-', '*', '/'};
            out += '(';
            print(*n.lhs, out);
            out += ' ';
            out += ops[static_cast<int>(n.op) - static_cast<int>(Op::Add)];
            out += ' ';
            print(*n.rhs, out);
            out += ')';
            return;
        }
        case Op::Pow:
            out += '(';
            print(*n.lhs, out);
            out += ")^";
            out += number(n.value);
            return;
        case Op::Func:
            out += to_string(n.fn);
            out += '(';
            print(*n.lhs, out);
            out += ')';
            return;
    }
}

// Folds a freshly built node when all children are constants and the value is finite.
Expr fold(NodePtr n);

}  // namespace

const char* to_string(Fn fn) {
    switch (fn) {
        case Fn::Sin: return "sin";
        case Fn::Cos: return "cos";
        case Fn::Tan: return "tan";
        case Fn::Sinh: return "sinh";
        case Fn::Cosh: return "cosh";
        case Fn::Tanh: return "tanh";
        case Fn::Asinh: return "asinh";
        case Fn::Acosh: return "acosh";
        case Fn::Atanh: return "atanh";
        case Fn::Exp: return "exp";
        case Fn::Log: return "log";
        case Fn::Sqrt: return "sqrt";
        case Fn::Abs: return "abs";
    }
    return "?";
}

Expr::Expr() : node_(make(Op::Const)) {}

Expr Expr::constant(double value) { return Expr(make(Op::Const, nullptr, nullptr, value)); }

Expr Expr::variable() { return Expr(make(Op::Var)); }

double Expr::eval(double s) const { return eval_node(*node_, s); }

bool Expr::is_constant() const { return !mentions_s(*node_); }

std::string Expr::str() const {
    std::string out;
    print(*node_, out);
    return out;
}

std::size_t Expr::size() const { return count(*node_); }

Expr operator+(const Expr& a, const Expr& b) {
    if (is_const(*a.node_, 0.0)) return b;
    if (is_const(*b.node_, 0.0)) return a;
    return fold(make(Op::Add, a.node_, b.node_));
}

Expr operator-(const Expr& a, const Expr& b) {
    if (is_const(*b.node_, 0.0)) return a;
    if (is_const(*a.node_, 0.0)) return -b;
    return fold(make(Op::Sub, a.node_, b.node_));
}

Expr operator*(const Expr& a, const Expr& b) {
    if (is_const(*a.node_, 0.0) || is_const(*b.node_, 0.0)) return Expr::constant(0.0);
    if (is_const(*a.node_, 1.0)) return b;
    if (is_const(*b.node_, 1.0)) return a;
    if (is_const(*a.node_, -1.0)) return -b;
    if (is_const(*b.node_, -1.0)) return -a;
    return fold(make(Op::Mul, a.node_, b.node_));
}

Expr operator/(const Expr& a, const Expr& b) {
    if (is_const(*a.node_, 0.0) && !is_const(*b.node_, 0.0)) return Expr::constant(0.0);
    if (is_const(*b.node_, 1.0)) return a;
    return fold(make(Op::Div, a.node_, b.node_));
}

Expr operator-(const Expr& a) {
    if (a.node_->op == Op::Neg) return Expr(a.node_->lhs);
    return fold(make(Op::Neg, a.node_));
}

Expr pow(const Expr& base, double exponent) {
    if (exponent == 0.0) return Expr::constant(1.0);
    if (exponent == 1.0) return base;
    return fold(make(Op::Pow, base.node_, nullptr, exponent));
}

Expr apply(Fn fn, const Expr& arg) { return fold(make(Op::Func, arg.node_, nullptr, 0.0, fn)); }

namespace {

Expr fold(NodePtr n) {
    if (mentions_s(*n)) return Expr(std::move(n));
    try {
        return Expr::constant(eval_node(*n, 0.0));
    } catch (const Error&) {
        return Expr(std::move(n));  // keep it; evaluation reports the domain error
    }
}

}  // namespace

Expr differentiate(const Expr& e) {
    const Node& n = e.node();
    auto sub = [](const NodePtr& p) { return Expr(p); };
    switch (n.op) {
        case Op::Const: return Expr::constant(0.0);
        case Op::Var: return Expr::constant(1.0);
        case Op::Neg: return -differentiate(sub(n.lhs));
        case Op::Add: return differentiate(sub(n.lhs)) + differentiate(sub(n.rhs));
        case Op::Sub: return differentiate(sub(n.lhs)) - differentiate(sub(n.rhs));
        case Op::Mul: {
            const Expr a = sub(n.lhs), b = sub(n.rhs);
            return differentiate(a) * b + a * differentiate(b);
        }
        case Op::Div: {
            const Expr a = sub(n.lhs), b = sub(n.rhs);
            return (differentiate(a) * b - a * differentiate(b)) / pow(b, 2.0);
        }
        case Op::Pow: {
            const Expr u = sub(n.lhs);
            return Expr::constant(n.value) * pow(u, n.value - 1.0) * differentiate(u);
        }
        case Op::Func: break;
    }

    const Expr u = sub(n.lhs);
    const Expr du = differentiate(u);
    const Expr one = Expr::constant(1.0);
    switch (n.fn) {
        case Fn::Sin: return apply(Fn::Cos, u) * du;
        case Fn::Cos: return -(apply(Fn::Sin, u) * du);
        case Fn::Tan: return du / pow(apply(Fn::Cos, u), 2.0);
        case Fn::Sinh: return apply(Fn::Cosh, u) * du;
        case Fn::Cosh: return apply(Fn::Sinh, u) * du;
        case Fn::Tanh: return du / pow(apply(Fn::Cosh, u), 2.0);
        case Fn::Asinh: return du / apply(Fn::Sqrt, pow(u, 2.0) + one);
        case Fn::Acosh: return du / apply(Fn::Sqrt, pow(u, 2.0) - one);
        case Fn::Atanh: return du / (one - pow(u, 2.0));
        case Fn::Exp: return e * du;
        case Fn::Log: return du / u;
        case Fn::Sqrt: return du / (Expr::constant(2.0) * e);
        case Fn::Abs: return du * u / e;  // sign(u) du, undefined at u = 0
    }
    return Expr::constant(0.0);
}

ScalarFunction ScalarFunction::constant(double c) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    return ScalarFunction(buf);
}

}  // namespace ruledlab::expr
