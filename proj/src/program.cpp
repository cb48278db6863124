#include "vreach/program.hpp"

#include <cstdlib>

namespace vreach {

using namespace rounding;

int Program::push(Instr in) {
  code_.push_back(in);
  return static_cast<int>(code_.size()) - 1;
}

int Program::compile(const Expr& e, const SlotFn& slot) {
  Instr in;
  switch (e.kind) {
    case ExprKind::Const:
      in.op = Op::Const;
      in.c = e.enclosure();
      in.cd = e.value;
      return push(in);
    case ExprKind::Var:
      in.op = Op::Var;
      in.n = slot(e.text);
      return push(in);
    case ExprKind::Neg:
      in.op = Op::Neg;
      in.a = compile(*e.a, slot);
      return push(in);
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div:
      in.op = e.kind == ExprKind::Add ? Op::Add : e.kind == ExprKind::Sub ? Op::Sub : e.kind == ExprKind::Mul ? Op::Mul : Op::Div;
      in.a = compile(*e.a, slot);
      in.b = compile(*e.b, slot);
      return push(in);
    case ExprKind::Pow: {
      const Expr* c = e.b.get();
      int sign = 1;
      while (c->kind == ExprKind::Neg) {
        sign = -sign;
        c = c->a.get();
      }
      if (c->kind == ExprKind::Const && c->exact && c->value == std::floor(c->value) && std::fabs(c->value) <= 1024) {
        in.n = sign * static_cast<int>(c->value);
        in.a = compile(*e.a, slot);
        in.op = in.n == 2 ? Op::Sqr : Op::PowInt;
        return push(in);
      }
      in.op = Op::PowReal;
      in.a = compile(*e.a, slot);
      in.b = compile(*e.b, slot);
      return push(in);
    }
    case ExprKind::Call:
      in.a = compile(*e.a, slot);
      switch (e.fn) {
        case Func::Exp: in.op = Op::Exp; break;
        case Func::Log: in.op = Op::Log; break;
        case Func::Sin: in.op = Op::Sin; break;
        case Func::Cos: in.op = Op::Cos; break;
        case Func::Sqrt: in.op = Op::Sqrt; break;
        case Func::Abs: in.op = Op::Abs; break;
      }
      return push(in);
  }
  throw Error("bad expression node");
}

Truth atom_truth(Cmp c, const Interval& d, double delta) {
  switch (c) {
    case Cmp::Le:
      if (d.hi() <= delta) return Truth::True;
      if (d.lo() > delta) return Truth::False;
      return Truth::Unknown;
    case Cmp::Lt:
      if (d.hi() < delta) return Truth::True;
      if (d.lo() >= delta) return Truth::False;
      return Truth::Unknown;
    case Cmp::Ge:
      if (d.lo() >= -delta) return Truth::True;
      if (d.hi() < -delta) return Truth::False;
      return Truth::Unknown;
    case Cmp::Gt:
      if (d.lo() > -delta) return Truth::True;
      if (d.hi() <= -delta) return Truth::False;
      return Truth::Unknown;
    case Cmp::Eq:
      if (d.lo() > delta || d.hi() < -delta) return Truth::False;
      if (d.lo() >= -delta && d.hi() <= delta) return Truth::True;
      return Truth::Unknown;
  }
  return Truth::Unknown;
}

PredEval::PredEval(const Pred& p, const SlotFn& slot) { root_ = build(nnf(p), slot); }

int PredEval::build(const Pred& p, const SlotFn& slot) {
  Node node{p.kind, -1, {}};
  if (p.kind == Pred::Kind::Atom) {
    Atom a{p.cmp, prog_.compile(*p.lhs, slot), prog_.compile(*p.rhs, slot)};
    if (p.lhs->kind == ExprKind::Var) a.lvar = slot(p.lhs->text);
    if (p.rhs->kind == ExprKind::Var) a.rvar = slot(p.rhs->text);
    atoms_.push_back(a);
    node.atom = static_cast<int>(atoms_.size()) - 1;
  }
  for (const auto& k : p.kids) node.kids.push_back(build(k, slot));
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size()) - 1;
}

Truth PredEval::eval_node(int n, const std::vector<Interval>& val, double delta) const {
  const Node& node = nodes_[n];
  switch (node.kind) {
    case Pred::Kind::True: return Truth::True;
    case Pred::Kind::False: return Truth::False;
    case Pred::Kind::Atom: {
      const Atom& a = atoms_[node.atom];
      return atom_truth(a.cmp, val[a.lhs] - val[a.rhs], delta);
    }
    case Pred::Kind::And: {
      Truth r = Truth::True;
      for (int k : node.kids) {
        const Truth t = eval_node(k, val, delta);
        if (t == Truth::False) return Truth::False;
        if (t == Truth::Unknown) r = Truth::Unknown;
      }
      return r;
    }
    case Pred::Kind::Or: {
      Truth r = Truth::False;
      for (int k : node.kids) {
        const Truth t = eval_node(k, val, delta);
        if (t == Truth::True) return Truth::True;
        if (t == Truth::Unknown) r = Truth::Unknown;
      }
      return r;
    }
    case Pred::Kind::Not: break;  // removed by nnf
  }
  return Truth::Unknown;
}

Truth PredEval::eval(std::span<const Interval> box, double delta) const {
  if (nodes_.empty()) return Truth::True;
  std::vector<Interval> val;
  try {
    prog_.run<Interval, IntervalArith>(box, val);
  } catch (const DomainError&) {
    return Truth::Unknown;
  }
  return eval_node(root_, val, delta);
}

namespace {

Cmp mirror(Cmp c) {
  switch (c) {
    case Cmp::Lt: return Cmp::Gt;
    case Cmp::Le: return Cmp::Ge;
    case Cmp::Gt: return Cmp::Lt;
    case Cmp::Ge: return Cmp::Le;
    case Cmp::Eq: return Cmp::Eq;
  }
  return c;
}

// Narrows v to {v : v cmp e (relaxed by delta)} for e in E. Returns false if empty.
bool narrow(Interval& v, Cmp c, const Interval& e, double delta) {
  double lo = v.lo(), hi = v.hi();
  if (c == Cmp::Le || c == Cmp::Lt || c == Cmp::Eq) hi = std::min(hi, add_up(e.hi(), delta));
  if (c == Cmp::Ge || c == Cmp::Gt || c == Cmp::Eq) lo = std::max(lo, sub_down(e.lo(), delta));
  if (lo > hi) return false;
  v = Interval(lo, hi);
  return true;
}

}  // namespace

bool PredEval::contract_atom(const Atom& a, std::vector<Interval>& box, double delta,
                             std::vector<Interval>& val) const {
  try {
    prog_.run<Interval, IntervalArith>(box, val);
  } catch (const DomainError&) {
    return true;
  }
  if (atom_truth(a.cmp, val[a.lhs] - val[a.rhs], delta) == Truth::False) return false;
  if (a.lvar >= 0 && !narrow(box[a.lvar], a.cmp, val[a.rhs], delta)) return false;
  if (a.rvar >= 0) {
    if (a.lvar >= 0) {
      // both sides are variables; refresh the left value first
      if (!narrow(box[a.rvar], mirror(a.cmp), box[a.lvar], delta)) return false;
    } else if (!narrow(box[a.rvar], mirror(a.cmp), val[a.lhs], delta)) {
      return false;
    }
  }
  return true;
}

bool PredEval::contract_node(int n, std::vector<Interval>& box, double delta, std::vector<Interval>& val) const {
  const Node& node = nodes_[n];
  switch (node.kind) {
    case Pred::Kind::True: return true;
    case Pred::Kind::False: return false;
    case Pred::Kind::Atom: return contract_atom(atoms_[node.atom], box, delta, val);
    case Pred::Kind::And:
      for (int k : node.kids)
        if (!contract_node(k, box, delta, val)) return false;
      return true;
    case Pred::Kind::Or: {
      std::optional<std::vector<Interval>> acc;
      for (int k : node.kids) {
        std::vector<Interval> b = box;
        if (!contract_node(k, b, delta, val)) continue;
        if (!acc) {
          acc = std::move(b);
        } else {
          for (std::size_t i = 0; i < b.size(); ++i) (*acc)[i] = hull((*acc)[i], b[i]);
        }
      }
      if (!acc) return false;
      box = std::move(*acc);
      return true;
    }
    case Pred::Kind::Not: break;
  }
  return true;
}

bool PredEval::contract(std::vector<Interval>& box, double delta) const {
  if (nodes_.empty()) return true;
  std::vector<Interval> val;
  for (int pass = 0; pass < 2; ++pass) {
    const std::vector<Interval> before = box;
    if (!contract_node(root_, box, delta, val)) return false;
    if (box == before) break;
  }
  return eval(box, delta) != Truth::False;
}

void PredEval::atom_values(std::span<const double> x, std::vector<double>& out) const {
  thread_local std::vector<double> val;
  prog_.run<double, DoubleArith>(x, val);
  out.resize(atoms_.size());
  for (std::size_t i = 0; i < atoms_.size(); ++i) out[i] = val[atoms_[i].lhs] - val[atoms_[i].rhs];
}

bool PredEval::holds_node(int n, const std::vector<double>& d, double tol) const {
  const Node& node = nodes_[n];
  switch (node.kind) {
    case Pred::Kind::True: return true;
    case Pred::Kind::False: return false;
    case Pred::Kind::Atom: {
      const double v = d[node.atom];
      switch (atoms_[node.atom].cmp) {
        case Cmp::Lt: return v < 0;
        case Cmp::Le: return v <= 0;
        case Cmp::Gt: return v > 0;
        case Cmp::Ge: return v >= 0;
        case Cmp::Eq: return std::fabs(v) <= tol;
      }
      return false;
    }
    case Pred::Kind::And:
      for (int k : node.kids)
        if (!holds_node(k, d, tol)) return false;
      return true;
    case Pred::Kind::Or:
      for (int k : node.kids)
        if (holds_node(k, d, tol)) return true;
      return false;
    case Pred::Kind::Not: break;
  }
  return false;
}

bool PredEval::holds_values(const std::vector<double>& d, double tol) const {
  if (nodes_.empty()) return true;
  return holds_node(root_, d, tol);
}

bool PredEval::holds(std::span<const double> x, double tol) const {
  thread_local std::vector<double> d;
  atom_values(x, d);
  return holds_values(d, tol);
}

}  // namespace vreach
