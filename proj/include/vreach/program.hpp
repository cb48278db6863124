#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vreach/expr.hpp"
#include "vreach/interval.hpp"

namespace vreach {

enum class Op : std::uint8_t { Const, Var, Neg, Add, Sub, Mul, Div, Sqr, PowInt, PowReal, Exp, Log, Sin, Cos, Sqrt, Abs };

struct Instr {
  Op op = Op::Const;
  int a = -1;  // operand node indices
  int b = -1;
  int n = 0;   // variable slot (Var) or exponent (PowInt)
  Interval c;  // constant enclosure
  double cd = 0.0;
};

using SlotFn = std::function<int(const std::string&)>;

/// Straight-line form of one or more expressions over numbered variables.
/// Every node appears after its operands, so a single forward sweep
/// evaluates the whole program.
class Program {
 public:
  /// Appends e and returns the index of its root node.
  int compile(const Expr& e, const SlotFn& slot);

  const std::vector<Instr>& code() const { return code_; }
  std::size_t size() const { return code_.size(); }

  template <class T, class A>
  void run(std::span<const T> vars, std::vector<T>& val) const;

 private:
  int push(Instr in);
  std::vector<Instr> code_;
};

/// Arithmetic policies consumed by Program::run.
struct DoubleArith {
  using T = double;
  static T konst(const Instr& in) { return in.cd; }
  static T neg(T x) { return -x; }
  static T add(T x, T y) { return x + y; }
  static T sub(T x, T y) { return x - y; }
  static T mul(T x, T y) { return x * y; }
  static T div(T x, T y) { return x / y; }
  static T sqr(T x) { return x * x; }
  static T pow_int(T x, int n) { return std::pow(x, n); }
  static T pow_real(T x, T y) { return std::pow(x, y); }
  static T exp(T x) { return std::exp(x); }
  static T log(T x) { return std::log(x); }
  static T sin(T x) { return std::sin(x); }
  static T cos(T x) { return std::cos(x); }
  static T sqrt(T x) { return std::sqrt(x); }
  static T abs(T x) { return std::fabs(x); }
};

struct IntervalArith {
  using T = Interval;
  static T konst(const Instr& in) { return in.c; }
  static T neg(const T& x) { return -x; }
  static T add(const T& x, const T& y) { return x + y; }
  static T sub(const T& x, const T& y) { return x - y; }
  static T mul(const T& x, const T& y) { return x * y; }
  static T div(const T& x, const T& y) { return x / y; }
  static T sqr(const T& x) { return vreach::sqr(x); }
  static T pow_int(const T& x, int n) { return vreach::pow_int(x, n); }
  static T pow_real(const T& x, const T& y) { return vreach::exp(y * vreach::ln(x)); }
  static T exp(const T& x) { return vreach::exp(x); }
  static T log(const T& x) { return vreach::ln(x); }
  static T sin(const T& x) { return vreach::sin(x); }
  static T cos(const T& x) { return vreach::cos(x); }
  static T sqrt(const T& x) { return vreach::sqrt(x); }
  static T abs(const T& x) { return vreach::abs(x); }
};

template <class T, class A>
void Program::run(std::span<const T> vars, std::vector<T>& val) const {
  val.resize(code_.size());
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instr& in = code_[i];
    switch (in.op) {
      case Op::Const: val[i] = A::konst(in); break;
      case Op::Var: val[i] = vars[in.n]; break;
      case Op::Neg: val[i] = A::neg(val[in.a]); break;
      case Op::Add: val[i] = A::add(val[in.a], val[in.b]); break;
      case Op::Sub: val[i] = A::sub(val[in.a], val[in.b]); break;
      case Op::Mul: val[i] = A::mul(val[in.a], val[in.b]); break;
      case Op::Div: val[i] = A::div(val[in.a], val[in.b]); break;
      case Op::Sqr: val[i] = A::sqr(val[in.a]); break;
      case Op::PowInt: val[i] = A::pow_int(val[in.a], in.n); break;
      case Op::PowReal: val[i] = A::pow_real(val[in.a], val[in.b]); break;
      case Op::Exp: val[i] = A::exp(val[in.a]); break;
      case Op::Log: val[i] = A::log(val[in.a]); break;
      case Op::Sin: val[i] = A::sin(val[in.a]); break;
      case Op::Cos: val[i] = A::cos(val[in.a]); break;
      case Op::Sqrt: val[i] = A::sqrt(val[in.a]); break;
      case Op::Abs: val[i] = A::abs(val[in.a]); break;
    }
  }
}

enum class Truth { False, True, Unknown };

/// Compiled predicate with three-valued evaluation and interval contraction.
///
/// `delta` relaxes every atom outward: l <= r becomes l <= r + delta,
/// l = r becomes |l - r| <= delta. Negations are pushed into the atoms first,
/// so the relaxation always weakens the predicate.
class PredEval {
 public:
  PredEval() = default;
  PredEval(const Pred& p, const SlotFn& slot);

  Truth eval(std::span<const Interval> box, double delta) const;

  /// Narrows box to a superset of its points satisfying the relaxed
  /// predicate. Returns false when that set is certainly empty.
  bool contract(std::vector<Interval>& box, double delta) const;

  /// Values l - r of every atom at a point, in atom order.
  void atom_values(std::span<const double> x, std::vector<double>& out) const;
  /// Point truth; equalities hold within tol.
  bool holds(std::span<const double> x, double tol) const;
  bool holds_values(const std::vector<double>& d, double tol) const;

  std::size_t atom_count() const { return atoms_.size(); }
  Cmp atom_cmp(std::size_t i) const { return atoms_[i].cmp; }
  bool is_true() const { return nodes_.empty() || nodes_[root_].kind == Pred::Kind::True; }

 private:
  struct Atom {
    Cmp cmp;
    int lhs, rhs;          // program nodes
    int lvar = -1, rvar = -1;  // slots when a side is a bare variable
  };
  struct Node {
    Pred::Kind kind;
    int atom = -1;
    std::vector<int> kids;
  };

  int build(const Pred& p, const SlotFn& slot);
  Truth eval_node(int n, const std::vector<Interval>& val, double delta) const;
  bool contract_node(int n, std::vector<Interval>& box, double delta, std::vector<Interval>& val) const;
  bool contract_atom(const Atom& a, std::vector<Interval>& box, double delta, std::vector<Interval>& val) const;
  bool holds_node(int n, const std::vector<double>& d, double tol) const;

  Program prog_;
  std::vector<Atom> atoms_;
  std::vector<Node> nodes_;
  int root_ = 0;
};

Truth atom_truth(Cmp c, const Interval& diff, double delta);

}  // namespace vreach
