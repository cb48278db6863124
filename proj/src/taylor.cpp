#include "vreach/taylor.hpp"

namespace vreach {

int TaylorProgram::push(Instr in) {
  code_.push_back(in);
  return static_cast<int>(code_.size()) - 1;
}

TaylorProgram::TaylorProgram(const Program& prog, const std::vector<int>& outputs) {
  std::vector<int> map(prog.size(), -1);
  for (int o : outputs) outputs_.push_back(lower(prog, o, map));
}

int TaylorProgram::lower(const Program& prog, int node, std::vector<int>& map) {
  if (map[node] >= 0) return map[node];
  Instr in = prog.code()[node];
  if (in.a >= 0) in.a = lower(prog, in.a, map);
  if (in.b >= 0) in.b = lower(prog, in.b, map);
  int r;
  if (in.op == Op::PowInt) {
    const int n = in.n;
    if (n == 0) {
      Instr one;
      one.op = Op::Const;
      one.c = Interval(1.0);
      one.cd = 1.0;
      r = push(one);
    } else {
      // binary expansion of |n|
      int base = in.a;
      int acc = -1;
      for (unsigned e = static_cast<unsigned>(n < 0 ? -n : n);;) {
        if (e & 1u) {
          if (acc < 0) {
            acc = base;
          } else {
            Instr m;
            m.op = Op::Mul;
            m.a = acc;
            m.b = base;
            acc = push(m);
          }
        }
        e >>= 1;
        if (!e) break;
        Instr s;
        s.op = Op::Sqr;
        s.a = base;
        base = push(s);
      }
      r = acc;
      if (n < 0) {
        Instr one;
        one.op = Op::Const;
        one.c = Interval(1.0);
        one.cd = 1.0;
        Instr d;
        d.op = Op::Div;
        d.a = push(one);
        d.b = acc;
        r = push(d);
      }
    }
  } else if (in.op == Op::PowReal) {
    Instr lg;
    lg.op = Op::Log;
    lg.a = in.a;
    Instr m;
    m.op = Op::Mul;
    m.a = in.b;
    m.b = push(lg);
    Instr ex;
    ex.op = Op::Exp;
    ex.a = push(m);
    r = push(ex);
  } else {
    r = push(in);
  }
  map[node] = r;
  return r;
}

void TaylorProgram::rhs(std::span<const Interval> y, std::vector<Interval>& out) const {
  std::vector<Interval> val(code_.size());
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instr& in = code_[i];
    switch (in.op) {
      case Op::Const: val[i] = in.c; break;
      case Op::Var: val[i] = y[in.n]; break;
      case Op::Neg: val[i] = -val[in.a]; break;
      case Op::Add: val[i] = val[in.a] + val[in.b]; break;
      case Op::Sub: val[i] = val[in.a] - val[in.b]; break;
      case Op::Mul: val[i] = val[in.a] * val[in.b]; break;
      case Op::Div: val[i] = val[in.a] / val[in.b]; break;
      case Op::Sqr: val[i] = sqr(val[in.a]); break;
      case Op::Exp: val[i] = exp(val[in.a]); break;
      case Op::Log: val[i] = ln(val[in.a]); break;
      case Op::Sin: val[i] = sin(val[in.a]); break;
      case Op::Cos: val[i] = cos(val[in.a]); break;
      case Op::Sqrt: val[i] = sqrt(val[in.a]); break;
      case Op::Abs: val[i] = abs(val[in.a]); break;
      default: throw Error("power node survived lowering");
    }
  }
  out.resize(outputs_.size());
  for (std::size_t i = 0; i < outputs_.size(); ++i) out[i] = val[outputs_[i]];
}

}  // namespace vreach
