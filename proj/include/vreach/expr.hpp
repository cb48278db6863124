#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "vreach/box.hpp"
#include "vreach/interval.hpp"

namespace vreach {

enum class ExprKind { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Func { Exp, Log, Sin, Cos, Sqrt, Abs };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable arithmetic expression node.
///
/// Constants keep the literal text they were written with; `value` is the
/// nearest double and `exact` tells whether that double equals the literal.
struct Expr {
  ExprKind kind = ExprKind::Const;
  std::string text;  // literal text (Const) or variable name (Var)
  double value = 0.0;
  bool exact = true;
  Func fn = Func::Exp;
  ExprPtr a, b;

  /// Enclosure of a constant's exact value.
  Interval enclosure() const { return Interval::around(value, exact); }
};

/// Nearest double to a decimal literal, and whether it is exact.
struct Literal {
  double value;
  bool exact;
};
Literal parse_literal(const std::string& text);

ExprPtr make_const(const std::string& text);
ExprPtr make_const(double v);  // v must print exactly with %.17g
ExprPtr make_var(const std::string& name);
ExprPtr make_neg(ExprPtr a);
ExprPtr make_binary(ExprKind k, ExprPtr a, ExprPtr b);
ExprPtr make_call(Func f, ExprPtr a);

const char* func_name(Func f);

std::string print(const Expr& e);
bool equal(const Expr& x, const Expr& y);
void free_vars(const Expr& e, std::set<std::string>& out);
bool is_constant(const Expr& e);

/// Natural interval extension over a named environment.
Interval eval(const Expr& e, const Box& env);
/// Point evaluation in double arithmetic (not validated).
double eval_point(const Expr& e, const std::function<double(const std::string&)>& lookup);

/// Symbolic derivative with light constant folding.
/// Throws Error for abs and for non-constant exponents of negative bases
/// that cannot be rewritten.
ExprPtr derivative(const ExprPtr& e, const std::string& var);

/// Replaces variables by expressions (used for primed names and defines).
ExprPtr substitute(const ExprPtr& e, const std::function<ExprPtr(const std::string&)>& repl);

enum class Cmp { Lt, Le, Gt, Ge, Eq };
const char* cmp_name(Cmp c);

/// Boolean combination of comparisons.
struct Pred {
  enum class Kind { True, False, Atom, And, Or, Not };
  Kind kind = Kind::True;
  Cmp cmp = Cmp::Eq;
  ExprPtr lhs, rhs;
  std::vector<Pred> kids;

  static Pred atom(ExprPtr l, Cmp c, ExprPtr r);
  static Pred all(std::vector<Pred> kids);
  static Pred any(std::vector<Pred> kids);
  static Pred negate(Pred p);
  static Pred constant(bool v);
};

std::string print(const Pred& p);
bool equal(const Pred& x, const Pred& y);
void free_vars(const Pred& p, std::set<std::string>& out);

/// Negation normal form: pushes `not` into the atoms.
Pred nnf(const Pred& p);

}  // namespace vreach
