#include "vreach/expr.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>

namespace vreach {

namespace {

// Decimal digits with leading/trailing zeros removed, and the power of ten of
// the first digit. "0" normalizes to ("", 0).
struct Decimal {
  std::string digits;
  long exp10 = 0;
  bool operator==(const Decimal&) const = default;
};

Decimal normalize(const std::string& mantissa, long exponent) {
  // mantissa: digits with an optional '.'
  std::string digits;
  long point = -1;
  for (char c : mantissa) {
    if (c == '.')
      point = static_cast<long>(digits.size());
    else
      digits.push_back(c);
  }
  if (point < 0) point = static_cast<long>(digits.size());
  std::size_t first = digits.find_first_not_of('0');
  if (first == std::string::npos) return {};
  std::size_t last = digits.find_last_not_of('0');
  Decimal d;
  d.digits = digits.substr(first, last - first + 1);
  d.exp10 = exponent + point - static_cast<long>(first) - 1;
  return d;
}

Decimal split_scientific(const std::string& s) {
  const auto e = s.find_first_of("eE");
  long exponent = 0;
  std::string mant = s;
  if (e != std::string::npos) {
    exponent = std::strtol(s.c_str() + e + 1, nullptr, 10);
    mant = s.substr(0, e);
  }
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) mant.erase(0, 1);
  return normalize(mant, exponent);
}

}  // namespace

Literal parse_literal(const std::string& text) {
  double v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec == std::errc::result_out_of_range) {
    // from_chars leaves v untouched on range errors
    v = std::strtod(text.c_str(), nullptr);
  } else if (res.ec != std::errc() || res.ptr != last) {
    throw Error("malformed numeric literal '" + text + "'");
  }
  if (!std::isfinite(v)) return {v, false};
  // A double has a finite decimal expansion of at most 767 significant
  // digits; print it in full and compare with the literal.
  static thread_local char buf[1100];
  std::snprintf(buf, sizeof buf, "%.800e", v);
  const bool exact = split_scientific(buf) == split_scientific(text);
  return {v, exact};
}

ExprPtr make_const(const std::string& text) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Const;
  e->text = text;
  const Literal lit = parse_literal(text);
  e->value = lit.value;
  e->exact = lit.exact;
  return e;
}

ExprPtr make_const(double v) {
  if (v < 0) return make_neg(make_const(-v));
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return make_const(std::string(buf));
}

ExprPtr make_var(const std::string& name) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Var;
  e->text = name;
  return e;
}

ExprPtr make_neg(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Neg;
  e->a = std::move(a);
  return e;
}

ExprPtr make_binary(ExprKind k, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

ExprPtr make_call(Func f, ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Call;
  e->fn = f;
  e->a = std::move(a);
  return e;
}

const char* func_name(Func f) {
  switch (f) {
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Sqrt: return "sqrt";
    case Func::Abs: return "abs";
  }
  return "?";
}

namespace {

int precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::Pow: return 4;
    default: return 5;
  }
}

std::string wrap(const Expr& e, bool paren) {
  std::string s = print(e);
  return paren ? "(" + s + ")" : s;
}

}  // namespace

std::string print(const Expr& e) {
  const int p = precedence(e);
  switch (e.kind) {
    case ExprKind::Const:
    case ExprKind::Var: return e.text;
    case ExprKind::Neg: return "-" + wrap(*e.a, precedence(*e.a) < 3);
    case ExprKind::Call: return std::string(func_name(e.fn)) + "(" + print(*e.a) + ")";
    case ExprKind::Pow: return wrap(*e.a, precedence(*e.a) <= 4) + "^" + wrap(*e.b, precedence(*e.b) < 3);
    default: {
      const char* op = e.kind == ExprKind::Add ? " + " : e.kind == ExprKind::Sub ? " - " : e.kind == ExprKind::Mul ? " * " : " / ";
      return wrap(*e.a, precedence(*e.a) < p) + op + wrap(*e.b, precedence(*e.b) <= p);
    }
  }
}

bool equal(const Expr& x, const Expr& y) {
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case ExprKind::Const: return x.text == y.text;
    case ExprKind::Var: return x.text == y.text;
    case ExprKind::Neg: return equal(*x.a, *y.a);
    case ExprKind::Call: return x.fn == y.fn && equal(*x.a, *y.a);
    default: return equal(*x.a, *y.a) && equal(*x.b, *y.b);
  }
}

void free_vars(const Expr& e, std::set<std::string>& out) {
  if (e.kind == ExprKind::Var) out.insert(e.text);
  if (e.a) free_vars(*e.a, out);
  if (e.b) free_vars(*e.b, out);
}

bool is_constant(const Expr& e) {
  std::set<std::string> v;
  free_vars(e, v);
  return v.empty();
}

namespace {

// Integer exponent of x^c when c is an exact integral constant.
bool integer_exponent(const Expr& c, int& n) {
  if (c.kind == ExprKind::Neg) {
    if (!integer_exponent(*c.a, n)) return false;
    n = -n;
    return true;
  }
  if (c.kind != ExprKind::Const || !c.exact) return false;
  if (c.value != std::floor(c.value) || std::fabs(c.value) > 1024) return false;
  n = static_cast<int>(c.value);
  return true;
}

}  // namespace

Interval eval(const Expr& e, const Box& env) {
  switch (e.kind) {
    case ExprKind::Const: return e.enclosure();
    case ExprKind::Var: return env.at(e.text);
    case ExprKind::Neg: return -eval(*e.a, env);
    case ExprKind::Add: return eval(*e.a, env) + eval(*e.b, env);
    case ExprKind::Sub: return eval(*e.a, env) - eval(*e.b, env);
    case ExprKind::Mul: return eval(*e.a, env) * eval(*e.b, env);
    case ExprKind::Div: return eval(*e.a, env) / eval(*e.b, env);
    case ExprKind::Pow: {
      int n;
      if (integer_exponent(*e.b, n)) return pow_int(eval(*e.a, env), n);
      return exp(eval(*e.b, env) * ln(eval(*e.a, env)));
    }
    case ExprKind::Call: {
      const Interval x = eval(*e.a, env);
      switch (e.fn) {
        case Func::Exp: return exp(x);
        case Func::Log: return ln(x);
        case Func::Sin: return sin(x);
        case Func::Cos: return cos(x);
        case Func::Sqrt: return sqrt(x);
        case Func::Abs: return abs(x);
      }
    }
  }
  throw Error("bad expression node");
}

double eval_point(const Expr& e, const std::function<double(const std::string&)>& lookup) {
  switch (e.kind) {
    case ExprKind::Const: return e.value;
    case ExprKind::Var: return lookup(e.text);
    case ExprKind::Neg: return -eval_point(*e.a, lookup);
    case ExprKind::Add: return eval_point(*e.a, lookup) + eval_point(*e.b, lookup);
    case ExprKind::Sub: return eval_point(*e.a, lookup) - eval_point(*e.b, lookup);
    case ExprKind::Mul: return eval_point(*e.a, lookup) * eval_point(*e.b, lookup);
    case ExprKind::Div: return eval_point(*e.a, lookup) / eval_point(*e.b, lookup);
    case ExprKind::Pow: return std::pow(eval_point(*e.a, lookup), eval_point(*e.b, lookup));
    case ExprKind::Call: {
      const double x = eval_point(*e.a, lookup);
      switch (e.fn) {
        case Func::Exp: return std::exp(x);
        case Func::Log: return std::log(x);
        case Func::Sin: return std::sin(x);
        case Func::Cos: return std::cos(x);
        case Func::Sqrt: return std::sqrt(x);
        case Func::Abs: return std::fabs(x);
      }
    }
  }
  throw Error("bad expression node");
}

namespace {

bool is_value(const ExprPtr& e, double v) {
  return e->kind == ExprKind::Const && e->exact && e->value == v;
}

ExprPtr s_add(ExprPtr a, ExprPtr b) {
  if (is_value(a, 0)) return b;
  if (is_value(b, 0)) return a;
  return make_binary(ExprKind::Add, a, b);
}

ExprPtr s_sub(ExprPtr a, ExprPtr b) {
  if (is_value(b, 0)) return a;
  if (is_value(a, 0)) return make_neg(b);
  return make_binary(ExprKind::Sub, a, b);
}

ExprPtr s_mul(ExprPtr a, ExprPtr b) {
  if (is_value(a, 0) || is_value(b, 0)) return make_const(0.0);
  if (is_value(a, 1)) return b;
  if (is_value(b, 1)) return a;
  return make_binary(ExprKind::Mul, a, b);
}

ExprPtr s_div(ExprPtr a, ExprPtr b) {
  if (is_value(a, 0)) return make_const(0.0);
  if (is_value(b, 1)) return a;
  return make_binary(ExprKind::Div, a, b);
}

ExprPtr s_neg(ExprPtr a) {
  if (is_value(a, 0)) return a;
  if (a->kind == ExprKind::Neg) return a->a;
  return make_neg(a);
}

}  // namespace

ExprPtr derivative(const ExprPtr& e, const std::string& var) {
  switch (e->kind) {
    case ExprKind::Const: return make_const(0.0);
    case ExprKind::Var: return make_const(e->text == var ? 1.0 : 0.0);
    case ExprKind::Neg: return s_neg(derivative(e->a, var));
    case ExprKind::Add: return s_add(derivative(e->a, var), derivative(e->b, var));
    case ExprKind::Sub: return s_sub(derivative(e->a, var), derivative(e->b, var));
    case ExprKind::Mul:
      return s_add(s_mul(derivative(e->a, var), e->b), s_mul(e->a, derivative(e->b, var)));
    case ExprKind::Div: {
      auto num = s_sub(s_mul(derivative(e->a, var), e->b), s_mul(e->a, derivative(e->b, var)));
      return s_div(num, make_binary(ExprKind::Pow, e->b, make_const(2.0)));
    }
    case ExprKind::Pow: {
      int n;
      if (integer_exponent(*e->b, n)) {
        if (n == 0) return make_const(0.0);
        auto lower = n - 1 == 1 ? e->a : make_binary(ExprKind::Pow, e->a, make_const(static_cast<double>(n - 1)));
        return s_mul(s_mul(make_const(static_cast<double>(n)), lower), derivative(e->a, var));
      }
      std::set<std::string> fv;
      free_vars(*e->b, fv);
      if (!fv.count(var)) {
        // c * a^(c-1) * a'
        auto lower = make_binary(ExprKind::Pow, e->a, s_sub(e->b, make_const(1.0)));
        return s_mul(s_mul(e->b, lower), derivative(e->a, var));
      }
      auto inner = s_add(s_mul(derivative(e->b, var), make_call(Func::Log, e->a)),
                         s_div(s_mul(e->b, derivative(e->a, var)), e->a));
      return s_mul(e, inner);
    }
    case ExprKind::Call: {
      auto da = derivative(e->a, var);
      switch (e->fn) {
        case Func::Exp: return s_mul(e, da);
        case Func::Log: return s_div(da, e->a);
        case Func::Sin: return s_mul(make_call(Func::Cos, e->a), da);
        case Func::Cos: return s_neg(s_mul(make_call(Func::Sin, e->a), da));
        case Func::Sqrt: return s_div(da, s_mul(make_const(2.0), e));
        case Func::Abs: throw Error("abs() is not differentiable");
      }
    }
  }
  throw Error("bad expression node");
}

ExprPtr substitute(const ExprPtr& e, const std::function<ExprPtr(const std::string&)>& repl) {
  switch (e->kind) {
    case ExprKind::Const: return e;
    case ExprKind::Var: {
      auto r = repl(e->text);
      return r ? r : e;
    }
    case ExprKind::Neg: return make_neg(substitute(e->a, repl));
    case ExprKind::Call: return make_call(e->fn, substitute(e->a, repl));
    default: return make_binary(e->kind, substitute(e->a, repl), substitute(e->b, repl));
  }
}

const char* cmp_name(Cmp c) {
  switch (c) {
    case Cmp::Lt: return "<";
    case Cmp::Le: return "<=";
    case Cmp::Gt: return ">";
    case Cmp::Ge: return ">=";
    case Cmp::Eq: return "=";
  }
  return "?";
}

Pred Pred::atom(ExprPtr l, Cmp c, ExprPtr r) {
  Pred p;
  p.kind = Kind::Atom;
  p.cmp = c;
  p.lhs = std::move(l);
  p.rhs = std::move(r);
  return p;
}

Pred Pred::all(std::vector<Pred> kids) {
  Pred p;
  p.kind = Kind::And;
  p.kids = std::move(kids);
  return p;
}

Pred Pred::any(std::vector<Pred> kids) {
  Pred p;
  p.kind = Kind::Or;
  p.kids = std::move(kids);
  return p;
}

Pred Pred::negate(Pred q) {
  Pred p;
  p.kind = Kind::Not;
  p.kids.push_back(std::move(q));
  return p;
}

Pred Pred::constant(bool v) {
  Pred p;
  p.kind = v ? Kind::True : Kind::False;
  return p;
}

std::string print(const Pred& p) {
  switch (p.kind) {
    case Pred::Kind::True: return "true";
    case Pred::Kind::False: return "false";
    case Pred::Kind::Atom: return "(" + print(*p.lhs) + " " + cmp_name(p.cmp) + " " + print(*p.rhs) + ")";
    case Pred::Kind::Not: return "(not " + print(p.kids[0]) + ")";
    default: {
      std::string s = p.kind == Pred::Kind::And ? "(and" : "(or";
      for (const auto& k : p.kids) s += " " + print(k);
      return s + ")";
    }
  }
}

bool equal(const Pred& x, const Pred& y) {
  if (x.kind != y.kind) return false;
  if (x.kind == Pred::Kind::Atom)
    return x.cmp == y.cmp && equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
  if (x.kids.size() != y.kids.size()) return false;
  for (std::size_t i = 0; i < x.kids.size(); ++i)
    if (!equal(x.kids[i], y.kids[i])) return false;
  return true;
}

void free_vars(const Pred& p, std::set<std::string>& out) {
  if (p.kind == Pred::Kind::Atom) {
    free_vars(*p.lhs, out);
    free_vars(*p.rhs, out);
  }
  for (const auto& k : p.kids) free_vars(k, out);
}

namespace {

Pred nnf_impl(const Pred& p, bool negated) {
  switch (p.kind) {
    case Pred::Kind::True: return Pred::constant(!negated);
    case Pred::Kind::False: return Pred::constant(negated);
    case Pred::Kind::Not: return nnf_impl(p.kids[0], !negated);
    case Pred::Kind::Atom: {
      if (!negated) return p;
      switch (p.cmp) {
        case Cmp::Lt: return Pred::atom(p.lhs, Cmp::Ge, p.rhs);
        case Cmp::Le: return Pred::atom(p.lhs, Cmp::Gt, p.rhs);
        case Cmp::Gt: return Pred::atom(p.lhs, Cmp::Le, p.rhs);
        case Cmp::Ge: return Pred::atom(p.lhs, Cmp::Lt, p.rhs);
        case Cmp::Eq:
          return Pred::any({Pred::atom(p.lhs, Cmp::Lt, p.rhs), Pred::atom(p.lhs, Cmp::Gt, p.rhs)});
      }
      return p;
    }
    default: {
      std::vector<Pred> kids;
      for (const auto& k : p.kids) kids.push_back(nnf_impl(k, negated));
      const bool conj = (p.kind == Pred::Kind::And) != negated;
      return conj ? Pred::all(std::move(kids)) : Pred::any(std::move(kids));
    }
  }
}

}  // namespace

Pred nnf(const Pred& p) { return nnf_impl(p, false); }

}  // namespace vreach
