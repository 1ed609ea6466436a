#pragma once

#include <memory>

#include "ruledlab/expr.hpp"

namespace ruledlab::expr {

enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Func };

struct Node {
    Op op{Op::Const};
    double value{0.0};  // Const: the value; Pow: the exponent
    Fn fn{Fn::Sin};
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

}  // namespace ruledlab::expr
