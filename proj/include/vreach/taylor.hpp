#pragma once

// Taylor-mode automatic differentiation of autonomous ODE right-hand sides.
//
// For y' = f(y) the normalized coefficients y_[k] = y^(k)(0)/k! satisfy
// y_[k+1] = f(y)_[k] / (k+1), where f(y)_[k] is obtained node by node from
// the straight-line program of f with the usual series recurrences.

#include <array>
#include <vector>

#include "vreach/program.hpp"

namespace vreach {

inline constexpr int kMaxDim = 16;

/// Interval value with its gradient w.r.t. up to kMaxDim inputs.
struct Dual {
  Interval v;
  std::array<Interval, kMaxDim> d{};
  int n = 0;  // number of active gradient entries; 0 for constants
};

struct DualArith {
  using T = Dual;
  static Dual lift(const Interval& c) { return Dual{c, {}, 0}; }
  static Dual konst(const Instr& in) { return lift(in.c); }
  static const Interval& value(const Dual& x) { return x.v; }
  static Dual neg(const Dual& x) {
    Dual r{-x.v, {}, x.n};
    for (int i = 0; i < x.n; ++i) r.d[i] = -x.d[i];
    return r;
  }
  static Dual add(const Dual& x, const Dual& y) {
    Dual r{x.v + y.v, {}, std::max(x.n, y.n)};
    for (int i = 0; i < r.n; ++i) r.d[i] = x.d[i] + y.d[i];
    return r;
  }
  static Dual sub(const Dual& x, const Dual& y) {
    Dual r{x.v - y.v, {}, std::max(x.n, y.n)};
    for (int i = 0; i < r.n; ++i) r.d[i] = x.d[i] - y.d[i];
    return r;
  }
  static Dual mul(const Dual& x, const Dual& y) {
    Dual r{x.v * y.v, {}, std::max(x.n, y.n)};
    for (int i = 0; i < r.n; ++i) {
      if (i < x.n && i < y.n)
        r.d[i] = x.v * y.d[i] + y.v * x.d[i];
      else if (i < x.n)
        r.d[i] = y.v * x.d[i];
      else
        r.d[i] = x.v * y.d[i];
    }
    return r;
  }
  static Dual div(const Dual& x, const Dual& y) {
    const Interval q = x.v / y.v;
    Dual r{q, {}, std::max(x.n, y.n)};
    for (int i = 0; i < r.n; ++i) r.d[i] = (x.d[i] - q * y.d[i]) / y.v;
    return r;
  }
  static Dual scale(const Dual& x, const Interval& c) {
    Dual r{x.v * c, {}, x.n};
    for (int i = 0; i < x.n; ++i) r.d[i] = x.d[i] * c;
    return r;
  }
  static Dual sqr(const Dual& x) {
    Dual r{vreach::sqr(x.v), {}, x.n};
    const Interval two_v = Interval(2.0) * x.v;
    for (int i = 0; i < x.n; ++i) r.d[i] = two_v * x.d[i];
    return r;
  }
  static Dual chain(const Dual& x, const Interval& fv, const Interval& dfv) {
    Dual r{fv, {}, x.n};
    for (int i = 0; i < x.n; ++i) r.d[i] = dfv * x.d[i];
    return r;
  }
  static Dual exp(const Dual& x) {
    const Interval e = vreach::exp(x.v);
    return chain(x, e, e);
  }
  static Dual log(const Dual& x) { return chain(x, vreach::ln(x.v), Interval(1.0) / x.v); }
  static Dual sin(const Dual& x) { return chain(x, vreach::sin(x.v), vreach::cos(x.v)); }
  static Dual cos(const Dual& x) { return chain(x, vreach::cos(x.v), -vreach::sin(x.v)); }
  static Dual sqrt(const Dual& x) {
    const Interval s = vreach::sqrt(x.v);
    return chain(x, s, Interval(1.0) / (Interval(2.0) * s));
  }
};

struct TaylorIntervalArith : IntervalArith {
  static Interval lift(const Interval& c) { return c; }
  static const Interval& value(const Interval& x) { return x; }
  static Interval scale(const Interval& x, const Interval& c) { return x * c; }
};

/// Flow right-hand side lowered to operations with simple series
/// recurrences (integer powers are expanded, real powers become exp/log).
class TaylorProgram {
 public:
  TaylorProgram() = default;
  /// outputs[i] is the node computing the derivative of state slot i.
  TaylorProgram(const Program& prog, const std::vector<int>& outputs);

  std::size_t dim() const { return outputs_.size(); }
  const std::vector<Instr>& code() const { return code_; }
  const std::vector<int>& outputs() const { return outputs_; }

  /// Computes coef[k][i] = y_[k] of slot i for k = 0..order.
  template <class A>
  void series(const std::vector<typename A::T>& y0, int order, std::vector<std::vector<typename A::T>>& coef) const;

  /// One interval evaluation of the right-hand side.
  void rhs(std::span<const Interval> y, std::vector<Interval>& out) const;

 private:
  int lower(const Program& prog, int node, std::vector<int>& map);
  int push(Instr in);
  std::vector<Instr> code_;
  std::vector<int> outputs_;
};

template <class A>
void TaylorProgram::series(const std::vector<typename A::T>& y0, int order,
                           std::vector<std::vector<typename A::T>>& coef) const {
  using T = typename A::T;
  const std::size_t n = outputs_.size();
  const std::size_t m = code_.size();
  coef.assign(order + 1, std::vector<T>(n));
  coef[0] = y0;
  std::vector<std::vector<T>> c(m, std::vector<T>(order + 1));
  std::vector<std::vector<T>> aux(m);  // partner series of sin/cos
  const T zero = A::lift(Interval(0.0));
  for (int k = 0; k <= order; ++k) {
    const Interval kk(static_cast<double>(k));
    for (std::size_t j = 0; j < m; ++j) {
      const Instr& in = code_[j];
      T& w = c[j][k];
      switch (in.op) {
        case Op::Const: w = k == 0 ? A::konst(in) : zero; break;
        case Op::Var: w = coef[k][in.n]; break;
        case Op::Neg: w = A::neg(c[in.a][k]); break;
        case Op::Add: w = A::add(c[in.a][k], c[in.b][k]); break;
        case Op::Sub: w = A::sub(c[in.a][k], c[in.b][k]); break;
        case Op::Mul: {
          const auto& u = c[in.a];
          const auto& v = c[in.b];
          T s = A::mul(u[0], v[k]);
          for (int i = 1; i <= k; ++i) s = A::add(s, A::mul(u[i], v[k - i]));
          w = s;
          break;
        }
        case Op::Sqr: {
          const auto& u = c[in.a];
          if (k == 0) {
            w = A::sqr(u[0]);
            break;
          }
          T s = zero;
          for (int i = 0; 2 * i < k; ++i) s = A::add(s, A::mul(u[i], u[k - i]));
          s = A::scale(s, Interval(2.0));
          if (k % 2 == 0) s = A::add(s, A::sqr(u[k / 2]));
          w = s;
          break;
        }
        case Op::Div: {
          const auto& u = c[in.a];
          const auto& v = c[in.b];
          if (k == 0) {
            w = A::div(u[0], v[0]);
            break;
          }
          T s = u[k];
          for (int i = 1; i <= k; ++i) s = A::sub(s, A::mul(v[i], c[j][k - i]));
          w = A::div(s, v[0]);
          break;
        }
        case Op::Exp: {
          const auto& u = c[in.a];
          if (k == 0) {
            w = A::exp(u[0]);
            break;
          }
          T s = zero;
          for (int i = 1; i <= k; ++i)
            s = A::add(s, A::scale(A::mul(u[i], c[j][k - i]), Interval(static_cast<double>(i))));
          w = A::div(s, A::lift(kk));
          break;
        }
        case Op::Log: {
          const auto& u = c[in.a];
          if (k == 0) {
            w = A::log(u[0]);
            break;
          }
          T s = zero;
          for (int i = 1; i < k; ++i)
            s = A::add(s, A::scale(A::mul(c[j][i], u[k - i]), Interval(static_cast<double>(i))));
          w = A::div(A::sub(u[k], A::div(s, A::lift(kk))), u[0]);
          break;
        }
        case Op::Sin:
        case Op::Cos: {
          const auto& u = c[in.a];
          auto& partner = aux[j];
          if (k == 0) {
            partner.assign(order + 1, zero);
            const T s0 = A::sin(u[0]), c0 = A::cos(u[0]);
            w = in.op == Op::Sin ? s0 : c0;
            partner[0] = in.op == Op::Sin ? c0 : s0;
            break;
          }
          // s' = c u', c' = -s u'
          const auto& self = c[j];
          const auto& sin_s = in.op == Op::Sin ? self : partner;
          const auto& cos_s = in.op == Op::Sin ? partner : self;
          T ss = zero, cs = zero;
          for (int i = 1; i <= k; ++i) {
            const T ui = A::scale(u[i], Interval(static_cast<double>(i)));
            ss = A::add(ss, A::mul(ui, cos_s[k - i]));
            cs = A::sub(cs, A::mul(ui, sin_s[k - i]));
          }
          const T sk = A::div(ss, A::lift(kk)), ck = A::div(cs, A::lift(kk));
          if (in.op == Op::Sin) {
            w = sk;
            partner[k] = ck;
          } else {
            w = ck;
            partner[k] = sk;
          }
          break;
        }
        case Op::Sqrt: {
          const auto& u = c[in.a];
          if (k == 0) {
            w = A::sqrt(u[0]);
            break;
          }
          T s = u[k];
          for (int i = 1; i < k; ++i) s = A::sub(s, A::mul(c[j][i], c[j][k - i]));
          w = A::div(s, A::scale(c[j][0], Interval(2.0)));
          break;
        }
        case Op::Abs: {
          const Interval& v0 = A::value(c[in.a][0]);
          if (v0.lo() >= 0)
            w = c[in.a][k];
          else if (v0.hi() <= 0)
            w = A::neg(c[in.a][k]);
          else
            throw DomainError("abs() of a sign-changing argument in a flow");
          break;
        }
        case Op::PowInt:
        case Op::PowReal: throw Error("power node survived lowering");
      }
    }
    if (k < order) {
      const Interval k1(static_cast<double>(k + 1));
      for (std::size_t i = 0; i < n; ++i) coef[k + 1][i] = A::div(c[outputs_[i]][k], A::lift(k1));
    }
  }
}

}  // namespace vreach
