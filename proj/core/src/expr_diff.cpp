#include "ulamkit/errors.hpp"
#include "ulamkit/expr.hpp"

namespace ulamkit::expr {

namespace {

Expr num(double v) { return Expr::number(v); }

Expr d(const Expr& e);

Expr d_call(const Node& n) {
  const Expr u(n.lhs);
  const Expr du = d(u);
  switch (n.function) {
    case Function::kSin:
      return call(Function::kCos, u) * du;
    case Function::kCos:
      return -(call(Function::kSin, u) * du);
    case Function::kTan:
      return du / pow(call(Function::kCos, u), num(2.0));
    case Function::kExp:
      return call(Function::kExp, u) * du;
    case Function::kLog:
      return du / u;
    case Function::kSqrt:
      return du / (num(2.0) * call(Function::kSqrt, u));
    case Function::kAbs:
    case Function::kRe:
    case Function::kIm:
      break;
  }
  throw NotDifferentiable(std::string(function_name(n.function)) +
                          "() cannot be differentiated");
}

Expr d(const Expr& e) {
  const Node& n = e.root();
  // Constant sub-trees are fine even when they contain abs/re/im.
  if (!e.depends_on_t()) return num(0.0);
  switch (n.kind) {
    case NodeKind::kVariable:
      return num(1.0);
    case NodeKind::kNegate:
      return -d(Expr(n.lhs));
    case NodeKind::kAdd:
      return d(Expr(n.lhs)) + d(Expr(n.rhs));
    case NodeKind::kSub:
      return d(Expr(n.lhs)) - d(Expr(n.rhs));
    case NodeKind::kMul: {
      const Expr a(n.lhs), b(n.rhs);
      return d(a) * b + a * d(b);
    }
    case NodeKind::kDiv: {
      const Expr a(n.lhs), b(n.rhs);
      if (!b.depends_on_t()) return d(a) / b;
      return (d(a) * b - a * d(b)) / pow(b, num(2.0));
    }
    case NodeKind::kPow: {
      const Expr a(n.lhs), b(n.rhs);
      if (!b.depends_on_t()) {
        return b * pow(a, b - num(1.0)) * d(a);
      }
      if (!a.depends_on_t()) {
        return e * call(Function::kLog, a) * d(b);
      }
      return e * (d(b) * call(Function::kLog, a) + b * d(a) / a);
    }
    case NodeKind::kCall:
      return d_call(n);
    default:
      return num(0.0);
  }
}

}  // namespace

Expr differentiate(const Expr& e) { return d(e); }

}  // namespace ulamkit::expr
