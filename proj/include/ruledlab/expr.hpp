#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ruledlab::expr {

enum class Fn { Sin, Cos, Tan, Sinh, Cosh, Tanh, Asinh, Acosh, Atanh, Exp, Log, Sqrt, Abs };

struct Node;

/// Immutable expression tree in the single real variable `s`.
///
/// Grammar (whitespace-insensitive):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?        exponent must not depend on s
///   primary := number | 's' | 'pi' | 'e' | fn '(' expr ')' | '(' expr ')'
class Expr {
public:
    Expr();  // the constant 0
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    static Expr constant(double value);
    static Expr variable();

    /// Evaluates at s. Throws Error{DomainError} instead of producing NaN/inf.
    double eval(double s) const;

    bool is_constant() const;  // true when the tree does not mention s
    bool depends_on_s() const { return !is_constant(); }

    /// Fully parenthesised text that parse() reads back to an equivalent tree.
    std::string str() const;

    std::size_t size() const;  // node count

    const Node& node() const { return *node_; }

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);
    friend Expr pow(const Expr& base, double exponent);
    friend Expr apply(Fn fn, const Expr& arg);

    const std::shared_ptr<const Node>& shared() const { return node_; }

private:
    std::shared_ptr<const Node> node_;

};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t position, const std::string& message)
        : std::runtime_error("parse error at offset " + std::to_string(position) + ": " + message),
          position_(position), message_(message) {}

    std::size_t position() const noexcept { return position_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::size_t position_;
    std::string message_;
};

/// Throws ParseError.
Expr parse(std::string_view text);

/// Exact symbolic derivative d/ds with constant folding.
Expr differentiate(const Expr& e);

/// {e, e', e'', ...} up to the requested order.
template <std::size_t N>
std::array<Expr, N + 1> derivative_chain(const Expr& e) {
    std::array<Expr, N + 1> out;
    out[0] = e;
    for (std::size_t k = 1; k <= N; ++k) out[k] = differentiate(out[k - 1]);
    return out;
}

const char* to_string(Fn fn);

/// A parsed scalar function together with its source text and first derivative.
struct ScalarFunction {
    std::string text;
    Expr value;
    Expr first;

    ScalarFunction() = default;
    explicit ScalarFunction(std::string source)
        : text(std::move(source)), value(parse(text)), first(differentiate(value)) {}

    static ScalarFunction constant(double c);

    double operator()(double s) const { return value.eval(s); }
    double derivative(double s) const { return first.eval(s); }
};

}  // namespace ruledlab::expr
