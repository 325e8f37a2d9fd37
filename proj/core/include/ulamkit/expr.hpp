/**
 * @file expr.hpp
 * @brief Coefficient expression language: parsing, evaluation, symbolic
 *        differentiation.
 *
 * Expressions are functions of the free variable `t` and of named real
 * parameters. Values are complex throughout. The grammar is documented in
 * docs/expression-grammar.md.
 */
#pragma once

#include <complex>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace ulamkit::expr {

using Complex = std::complex<double>;
using Params = std::map<std::string, double, std::less<>>;

enum class NodeKind {
  kNumber,
  kImaginaryUnit,
  kVariable,
  kParameter,
  kNegate,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,
  kCall,
};

enum class Function { kSin, kCos, kTan, kExp, kLog, kSqrt, kAbs, kRe, kIm };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  explicit Node(NodeKind k = NodeKind::kNumber) : kind(k) {}

  NodeKind kind;
  double number = 0.0;  // kNumber
  std::string name;     // kParameter
  Function function = Function::kSin;  // kCall
  NodePtr lhs;          // unary operand / left operand / call argument
  NodePtr rhs;          // right operand
};

/// Immutable expression tree. Cheap to copy; safe to share across threads.
class Expr {
 public:
  Expr();  // the literal 0
  explicit Expr(NodePtr root);

  [[nodiscard]] const Node& root() const { return *root_; }
  [[nodiscard]] const NodePtr& node() const { return root_; }

  /// True when the tree references `t` somewhere.
  [[nodiscard]] bool depends_on_t() const;
  /// Names of every parameter referenced by the tree.
  [[nodiscard]] std::vector<std::string> parameters() const;
  /// True when the tree contains no abs/re/im nodes.
  [[nodiscard]] bool differentiable() const;

  static Expr number(double v);
  static Expr variable();
  static Expr parameter(std::string name);

  friend Expr operator-(const Expr& a);
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr pow(const Expr& a, const Expr& b);
  friend Expr call(Function f, const Expr& a);

 private:
  NodePtr root_;
};

/// Parse text into an expression. Throws SyntaxError or UnknownFunction.
Expr parse(std::string_view text);

/// Fully parenthesised text form; parse(to_string(e)) evaluates like e.
std::string to_string(const Expr& e);

enum class EvalMode {
  kComplex,  ///< principal branches, no domain restrictions beyond 1/0
  kReal,     ///< log/sqrt/pow of invalid real arguments raise DomainError
};

/// Evaluate at t. Throws UnboundParameter or DomainError.
Complex eval(const Expr& e, double t, const Params& params = {},
             EvalMode mode = EvalMode::kComplex);

/// Symbolic derivative with respect to t. Throws NotDifferentiable for
/// abs, re and im nodes.
Expr differentiate(const Expr& e);

std::string_view function_name(Function f);

/// An expression with its parameters resolved and flattened into a
/// postfix program, for repeated evaluation in hot loops.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  CompiledExpr(const Expr& e, const Params& params,
               EvalMode mode = EvalMode::kComplex);

  [[nodiscard]] Complex operator()(double t) const;
  [[nodiscard]] bool is_constant() const { return constant_; }
  [[nodiscard]] bool empty() const { return program_.empty(); }

 private:
  struct Instr {
    NodeKind op;
    Function fn = Function::kSin;
    Complex value;
  };
  std::vector<Instr> program_;
  std::size_t max_stack_ = 0;
  EvalMode mode_ = EvalMode::kComplex;
  bool constant_ = false;
};

}  // namespace ulamkit::expr
