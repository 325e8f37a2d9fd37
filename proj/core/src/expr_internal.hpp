#pragma once

#include "ulamkit/expr.hpp"

namespace ulamkit::expr::detail {

Complex apply_function(Function f, Complex z, EvalMode mode);
Complex apply_binary(NodeKind op, Complex a, Complex b, EvalMode mode);

}  // namespace ulamkit::expr::detail
