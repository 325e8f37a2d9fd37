#include "ulamkit/expr.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "expr_internal.hpp"
#include "ulamkit/errors.hpp"

namespace ulamkit::expr {

namespace {

NodePtr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

bool is_number(const Expr& e, double v) {
  return e.root().kind == NodeKind::kNumber && e.root().number == v;
}

bool is_number(const Expr& e) { return e.root().kind == NodeKind::kNumber; }

Expr binary(NodeKind kind, const Expr& a, const Expr& b) {
  Node n{kind};
  n.lhs = a.node();
  n.rhs = b.node();
  return Expr(make_node(std::move(n)));
}

void collect(const Node& n, bool& has_t, std::set<std::string>& params,
             bool& differentiable) {
  switch (n.kind) {
    case NodeKind::kVariable:
      has_t = true;
      break;
    case NodeKind::kParameter:
      params.insert(n.name);
      break;
    case NodeKind::kCall:
      if (n.function == Function::kAbs || n.function == Function::kRe ||
          n.function == Function::kIm) {
        differentiable = false;
      }
      break;
    default:
      break;
  }
  if (n.lhs) collect(*n.lhs, has_t, params, differentiable);
  if (n.rhs) collect(*n.rhs, has_t, params, differentiable);
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void print(const Node& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::kNumber:
      out += format_number(n.number);
      return;
    case NodeKind::kImaginaryUnit:
      out += "i";
      return;
    case NodeKind::kVariable:
      out += "t";
      return;
    case NodeKind::kParameter:
      out += n.name;
      return;
    case NodeKind::kNegate:
      out += "(-";
      print(*n.lhs, out);
      out += ")";
      return;
    case NodeKind::kCall:
      out += function_name(n.function);
      out += "(";
      print(*n.lhs, out);
      out += ")";
      return;
    default:
      break;
  }
  const char* op = "+";
  switch (n.kind) {
    case NodeKind::kSub: op = "-"; break;
    case NodeKind::kMul: op = "*"; break;
    case NodeKind::kDiv: op = "/"; break;
    case NodeKind::kPow: op = "^"; break;
    default: break;
  }
  out += "(";
  print(*n.lhs, out);
  out += op;
  print(*n.rhs, out);
  out += ")";
}

Complex eval_node(const Node& n, double t, const Params& params,
                  EvalMode mode) {
  switch (n.kind) {
    case NodeKind::kNumber:
      return {n.number, 0.0};
    case NodeKind::kImaginaryUnit:
      return {0.0, 1.0};
    case NodeKind::kVariable:
      return {t, 0.0};
    case NodeKind::kParameter: {
      auto it = params.find(n.name);
      if (it == params.end()) {
        throw UnboundParameter("parameter '" + n.name + "' is not bound");
      }
      return {it->second, 0.0};
    }
    case NodeKind::kNegate:
      return -eval_node(*n.lhs, t, params, mode);
    case NodeKind::kCall:
      return detail::apply_function(n.function,
                                    eval_node(*n.lhs, t, params, mode), mode);
    default:
      break;
  }
  const Complex a = eval_node(*n.lhs, t, params, mode);
  const Complex b = eval_node(*n.rhs, t, params, mode);
  return detail::apply_binary(n.kind, a, b, mode);
}

}  // namespace

namespace detail {

Complex apply_function(Function f, Complex z, EvalMode mode) {
  const bool real = z.imag() == 0.0;
  const double x = z.real();
  switch (f) {
    case Function::kSin:
      return real ? Complex(std::sin(x), 0.0) : std::sin(z);
    case Function::kCos:
      return real ? Complex(std::cos(x), 0.0) : std::cos(z);
    case Function::kTan:
      return real ? Complex(std::tan(x), 0.0) : std::tan(z);
    case Function::kExp:
      return real ? Complex(std::exp(x), 0.0) : std::exp(z);
    case Function::kLog:
      if (real && x > 0.0) return {std::log(x), 0.0};
      if (mode == EvalMode::kReal || z == Complex(0.0, 0.0)) {
        throw DomainError("log of non-positive argument");
      }
      return std::log(z);
    case Function::kSqrt:
      if (real && x >= 0.0) return {std::sqrt(x), 0.0};
      if (mode == EvalMode::kReal) {
        throw DomainError("sqrt of negative argument");
      }
      return std::sqrt(z);
    case Function::kAbs:
      return {std::abs(z), 0.0};
    case Function::kRe:
      return {x, 0.0};
    case Function::kIm:
      return {z.imag(), 0.0};
  }
  return z;
}

Complex apply_binary(NodeKind op, Complex a, Complex b, EvalMode mode) {
  switch (op) {
    case NodeKind::kAdd:
      return a + b;
    case NodeKind::kSub:
      return a - b;
    case NodeKind::kMul:
      if (a.imag() == 0.0 && b.imag() == 0.0) return {a.real() * b.real(), 0.0};
      return a * b;
    case NodeKind::kDiv:
      if (b == Complex(0.0, 0.0)) throw DomainError("division by zero");
      if (a.imag() == 0.0 && b.imag() == 0.0) return {a.real() / b.real(), 0.0};
      return a / b;
    case NodeKind::kPow: {
      if (a.imag() == 0.0 && b.imag() == 0.0) {
        const double base = a.real();
        const double ex = b.real();
        if (base == 0.0 && ex < 0.0) throw DomainError("division by zero");
        if (base >= 0.0 || std::floor(ex) == ex) {
          return {std::pow(base, ex), 0.0};
        }
        if (mode == EvalMode::kReal) {
          throw DomainError("non-integer power of negative base");
        }
      }
      if (a == Complex(0.0, 0.0)) {
        if (b.real() > 0.0) return {0.0, 0.0};
        throw DomainError("zero raised to non-positive power");
      }
      return std::pow(a, b);
    }
    default:
      break;
  }
  return {};
}

}  // namespace detail

Expr::Expr() : root_(make_node(Node{NodeKind::kNumber})) {}

Expr::Expr(NodePtr root) : root_(std::move(root)) {}

bool Expr::depends_on_t() const {
  bool has_t = false;
  bool diff = true;
  std::set<std::string> params;
  collect(*root_, has_t, params, diff);
  return has_t;
}

std::vector<std::string> Expr::parameters() const {
  bool has_t = false;
  bool diff = true;
  std::set<std::string> params;
  collect(*root_, has_t, params, diff);
  return {params.begin(), params.end()};
}

bool Expr::differentiable() const {
  bool has_t = false;
  bool diff = true;
  std::set<std::string> params;
  collect(*root_, has_t, params, diff);
  return diff;
}

Expr Expr::number(double v) {
  Node n{NodeKind::kNumber};
  n.number = v;
  return Expr(make_node(std::move(n)));
}

Expr Expr::variable() { return Expr(make_node(Node{NodeKind::kVariable})); }

Expr Expr::parameter(std::string name) {
  Node n{NodeKind::kParameter};
  n.name = std::move(name);
  return Expr(make_node(std::move(n)));
}

// The operators fold literal identities only (0+x, 1*x, x^1, ...); they do
// not attempt general simplification.
Expr operator-(const Expr& a) {
  if (is_number(a)) return Expr::number(-a.root().number);
  if (a.root().kind == NodeKind::kNegate) return Expr(a.root().lhs);
  Node n{NodeKind::kNegate};
  n.lhs = a.node();
  return Expr(make_node(std::move(n)));
}

Expr operator+(const Expr& a, const Expr& b) {
  if (is_number(a, 0.0)) return b;
  if (is_number(b, 0.0)) return a;
  if (is_number(a) && is_number(b)) {
    return Expr::number(a.root().number + b.root().number);
  }
  return binary(NodeKind::kAdd, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (is_number(b, 0.0)) return a;
  if (is_number(a, 0.0)) return -b;
  if (is_number(a) && is_number(b)) {
    return Expr::number(a.root().number - b.root().number);
  }
  return binary(NodeKind::kSub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (is_number(a, 0.0) || is_number(b, 0.0)) return Expr::number(0.0);
  if (is_number(a, 1.0)) return b;
  if (is_number(b, 1.0)) return a;
  if (is_number(a, -1.0)) return -b;
  if (is_number(b, -1.0)) return -a;
  if (is_number(a) && is_number(b)) {
    return Expr::number(a.root().number * b.root().number);
  }
  return binary(NodeKind::kMul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (is_number(b, 1.0)) return a;
  if (is_number(a, 0.0) && !is_number(b, 0.0)) return Expr::number(0.0);
  return binary(NodeKind::kDiv, a, b);
}

Expr pow(const Expr& a, const Expr& b) {
  if (is_number(b, 1.0)) return a;
  if (is_number(b, 0.0)) return Expr::number(1.0);
  return binary(NodeKind::kPow, a, b);
}

Expr call(Function f, const Expr& a) {
  Node n{NodeKind::kCall};
  n.function = f;
  n.lhs = a.node();
  return Expr(make_node(std::move(n)));
}

std::string to_string(const Expr& e) {
  std::string out;
  print(e.root(), out);
  return out;
}

Complex eval(const Expr& e, double t, const Params& params, EvalMode mode) {
  return eval_node(e.root(), t, params, mode);
}

std::string_view function_name(Function f) {
  switch (f) {
    case Function::kSin: return "sin";
    case Function::kCos: return "cos";
    case Function::kTan: return "tan";
    case Function::kExp: return "exp";
    case Function::kLog: return "log";
    case Function::kSqrt: return "sqrt";
    case Function::kAbs: return "abs";
    case Function::kRe: return "re";
    case Function::kIm: return "im";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// CompiledExpr

namespace {

void emit(const Node& n, const Params& params, std::vector<NodeKind>& kinds,
          std::vector<Complex>& values, std::vector<Function>& fns,
          std::size_t depth, std::size_t& max_depth) {
  max_depth = std::max(max_depth, depth + 1);
  switch (n.kind) {
    case NodeKind::kNumber:
    case NodeKind::kImaginaryUnit:
    case NodeKind::kParameter: {
      Complex v;
      if (n.kind == NodeKind::kNumber) v = {n.number, 0.0};
      if (n.kind == NodeKind::kImaginaryUnit) v = {0.0, 1.0};
      if (n.kind == NodeKind::kParameter) {
        auto it = params.find(n.name);
        if (it == params.end()) {
          throw UnboundParameter("parameter '" + n.name + "' is not bound");
        }
        v = {it->second, 0.0};
      }
      kinds.push_back(NodeKind::kNumber);
      values.push_back(v);
      fns.push_back(Function::kSin);
      return;
    }
    case NodeKind::kVariable:
      kinds.push_back(NodeKind::kVariable);
      values.emplace_back();
      fns.push_back(Function::kSin);
      return;
    case NodeKind::kNegate:
    case NodeKind::kCall:
      emit(*n.lhs, params, kinds, values, fns, depth, max_depth);
      kinds.push_back(n.kind);
      values.emplace_back();
      fns.push_back(n.function);
      return;
    default:
      emit(*n.lhs, params, kinds, values, fns, depth, max_depth);
      emit(*n.rhs, params, kinds, values, fns, depth + 1, max_depth);
      kinds.push_back(n.kind);
      values.emplace_back();
      fns.push_back(Function::kSin);
      return;
  }
}

}  // namespace

CompiledExpr::CompiledExpr(const Expr& e, const Params& params, EvalMode mode)
    : mode_(mode) {
  std::vector<NodeKind> kinds;
  std::vector<Complex> values;
  std::vector<Function> fns;
  emit(e.root(), params, kinds, values, fns, 0, max_stack_);
  program_.reserve(kinds.size());
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    program_.push_back(Instr{kinds[i], fns[i], values[i]});
  }
  constant_ = !e.depends_on_t();
}

Complex CompiledExpr::operator()(double t) const {
  constexpr std::size_t kInline = 32;
  Complex inline_stack[kInline];
  std::vector<Complex> heap;
  Complex* stack = inline_stack;
  if (max_stack_ > kInline) {
    heap.resize(max_stack_);
    stack = heap.data();
  }
  std::size_t sp = 0;
  for (const Instr& in : program_) {
    switch (in.op) {
      case NodeKind::kNumber:
        stack[sp++] = in.value;
        break;
      case NodeKind::kVariable:
        stack[sp++] = Complex(t, 0.0);
        break;
      case NodeKind::kNegate:
        stack[sp - 1] = -stack[sp - 1];
        break;
      case NodeKind::kCall:
        stack[sp - 1] = detail::apply_function(in.fn, stack[sp - 1], mode_);
        break;
      default: {
        const Complex b = stack[--sp];
        stack[sp - 1] = detail::apply_binary(in.op, stack[sp - 1], b, mode_);
        break;
      }
    }
  }
  return sp == 0 ? Complex{} : stack[0];
}

}  // namespace ulamkit::expr
