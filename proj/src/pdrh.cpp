#include "vreach/pdrh.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "vreach/program.hpp"

namespace vreach {

PdrhError::PdrhError(Kind kind, const std::string& msg, int line, int column)
    : Error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + msg : msg),
      kind_(kind),
      line_(line),
      column_(column) {}

const char* kind_name(PdrhError::Kind k) {
  using K = PdrhError::Kind;
  switch (k) {
    case K::Syntax: return "syntax";
    case K::UndeclaredVariable: return "undeclared-variable";
    case K::DuplicateDeclaration: return "duplicate-declaration";
    case K::DuplicateMode: return "duplicate-mode";
    case K::UnknownMode: return "unknown-mode";
    case K::MissingFlow: return "missing-flow";
    case K::DuplicateFlow: return "duplicate-flow";
    case K::MissingTime: return "missing-time";
    case K::MissingInit: return "missing-init";
    case K::MissingGoal: return "missing-goal";
    case K::MissingGoalC: return "missing-goal_c";
    case K::GoalModeMismatch: return "goal-mode-mismatch";
    case K::UnsupportedReset: return "unsupported-reset";
    case K::UnknownDistribution: return "unknown-distribution";
    case K::InvalidDistribution: return "invalid-distribution";
    case K::MissingRandom: return "missing-random";
    case K::Unsupported: return "unsupported";
  }
  return "?";
}

const FlowEq* Mode::flow(const std::string& var) const {
  for (const auto& f : flows)
    if (f.var == var) return &f;
  return nullptr;
}

const Mode& HybridModel::mode(int id) const {
  for (const auto& m : modes)
    if (m.id == id) return m;
  throw PdrhError(PdrhError::Kind::UnknownMode, "no mode " + std::to_string(id));
}

std::vector<std::string> HybridModel::state_names() const {
  std::vector<std::string> names;
  for (const auto& v : vars) names.push_back(v.name);
  for (const auto& r : randoms) names.push_back(r.name);
  return names;
}

int HybridModel::slot(const std::string& name) const {
  int i = 0;
  for (const auto& v : vars) {
    if (v.name == name) return i;
    ++i;
  }
  for (const auto& r : randoms) {
    if (r.name == name) return i;
    ++i;
  }
  throw PdrhError(PdrhError::Kind::UndeclaredVariable, "undeclared variable '" + name + "'");
}

namespace {

using Kind = PdrhError::Kind;

struct Token {
  enum Type { Ident, Number, Punct, End } type = End;
  std::string text;
  int line = 0, col = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : s_(src) {}

  std::vector<Token> run(std::vector<std::pair<std::string, std::string>>& defines) {
    std::vector<Token> raw;
    std::map<std::string, std::vector<Token>> macro;
    while (true) {
      skip_space_and_comments();
      if (pos_ >= s_.size()) break;
      if (s_[pos_] == '#') {
        read_define(macro, defines);
        continue;
      }
      raw.push_back(next());
    }
    std::vector<Token> out;
    for (const auto& t : raw) expand(t, macro, out, 0);
    Token end;
    end.type = Token::End;
    end.line = line_;
    end.col = col_;
    out.push_back(end);
    return out;
  }

 private:
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        advance();
      } else if (s_.compare(pos_, 2, "//") == 0) {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg) const { throw PdrhError(Kind::Syntax, msg, line_, col_); }

  Token next() {
    Token t;
    t.line = line_;
    t.col = col_;
    const char c = s_[pos_];
    auto is_ident_start = [](char ch) { return std::isalpha(static_cast<unsigned char>(ch)) || ch == '_'; };
    auto is_ident = [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; };
    if (is_ident_start(c)) {
      t.type = Token::Ident;
      while (pos_ < s_.size() && is_ident(s_[pos_])) {
        t.text += s_[pos_];
        advance();
      }
      if (pos_ < s_.size() && s_[pos_] == '\'') {
        t.text += '\'';
        advance();
      }
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))) {
      t.type = Token::Number;
      auto digits = [&] {
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
          t.text += s_[pos_];
          advance();
        }
      };
      digits();
      if (pos_ < s_.size() && s_[pos_] == '.') {
        t.text += '.';
        advance();
        digits();
      }
      if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
        std::size_t p = pos_ + 1;
        if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
        if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
          while (pos_ < p) {
            t.text += s_[pos_];
            advance();
          }
          digits();
        }
      }
      return t;
    }
    t.type = Token::Punct;
    static const char* multi[] = {"==>", "<=", ">="};
    for (const char* m : multi) {
      if (s_.compare(pos_, std::char_traits<char>::length(m), m) == 0) {
        t.text = m;
        for (std::size_t i = 0; i < t.text.size(); ++i) advance();
        return t;
      }
    }
    static const std::string single = "[](){};,:@+-*/^<>=";
    if (single.find(c) == std::string::npos) fail(std::string("unexpected character '") + c + "'");
    t.text = c;
    advance();
    return t;
  }

  void read_define(std::map<std::string, std::vector<Token>>& macro,
                   std::vector<std::pair<std::string, std::string>>& defines) {
    const int line = line_, col = col_;
    advance();  // '#'
    Token kw = next();
    if (kw.type != Token::Ident || kw.text != "define") throw PdrhError(Kind::Syntax, "expected '#define'", line, col);
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) advance();
    if (pos_ >= s_.size() || s_[pos_] == '\n') throw PdrhError(Kind::Syntax, "#define without a name", line, col);
    Token name = next();
    if (name.type != Token::Ident) throw PdrhError(Kind::Syntax, "#define name must be an identifier", name.line, name.col);
    if (macro.count(name.text)) throw PdrhError(Kind::DuplicateDeclaration, "duplicate #define " + name.text, name.line, name.col);
    std::vector<Token> body;
    std::string text;
    while (true) {
      while (pos_ < s_.size() && s_[pos_] != '\n' && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
      if (pos_ >= s_.size() || s_[pos_] == '\n' || s_.compare(pos_, 2, "//") == 0) break;
      Token t = next();
      if (!text.empty()) text += ' ';
      text += t.text;
      body.push_back(t);
    }
    if (body.empty()) throw PdrhError(Kind::Syntax, "#define " + name.text + " has no value", name.line, name.col);
    macro[name.text] = body;
    defines.emplace_back(name.text, text);
  }

  void expand(const Token& t, const std::map<std::string, std::vector<Token>>& macro, std::vector<Token>& out,
              int depth) const {
    if (t.type == Token::Ident) {
      auto it = macro.find(t.text);
      if (it != macro.end()) {
        if (depth > 32) throw PdrhError(Kind::Syntax, "recursive #define " + t.text, t.line, t.col);
        // a define used as an operand keeps its grouping
        const bool group = it->second.size() > 1;
        Token lp{Token::Punct, "(", t.line, t.col}, rp{Token::Punct, ")", t.line, t.col};
        if (group) out.push_back(lp);
        for (Token b : it->second) {
          b.line = t.line;
          b.col = t.col;
          expand(b, macro, out, depth + 1);
        }
        if (group) out.push_back(rp);
        return;
      }
    }
    out.push_back(t);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  HybridModel parse_model(HybridModel m) {
    if (peek().type == Token::End) fail("empty model");
    while (peek().type != Token::End) {
      const Token& t = peek();
      if (is("[")) {
        m.vars.push_back(parse_range());
      } else if (is("{")) {
        m.modes.push_back(parse_mode());
      } else if (t.type == Token::Ident && (t.text == "init" || t.text == "goal" || t.text == "goal_c")) {
        parse_section(m);
      } else if (t.type == Token::Ident && peek(1).type == Token::Punct && peek(1).text == "(") {
        m.randoms.push_back(parse_random());
      } else {
        fail("unexpected '" + t.text + "'");
      }
    }
    return m;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return t_[std::min(i_ + ahead, t_.size() - 1)]; }
  bool is(const char* p) const { return peek().type == Token::Punct && peek().text == p; }
  bool is_word(const char* w) const { return peek().type == Token::Ident && peek().text == w; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw PdrhError(Kind::Syntax, msg, peek().line, peek().col);
  }

  Token take() {
    Token t = peek();
    if (t.type != Token::End) ++i_;
    return t;
  }

  void expect(const char* p) {
    if (!is(p)) fail(std::string("expected '") + p + "' but found '" + describe(peek()) + "'");
    take();
  }

  void expect_word(const char* w) {
    if (!is_word(w)) fail(std::string("expected '") + w + "' but found '" + describe(peek()) + "'");
    take();
  }

  static std::string describe(const Token& t) { return t.type == Token::End ? "end of input" : t.text; }

  std::string ident() {
    if (peek().type != Token::Ident) fail("expected identifier but found '" + describe(peek()) + "'");
    return take().text;
  }

  int integer() {
    const Token& t = peek();
    if (t.type != Token::Number || t.text.find_first_not_of("0123456789") != std::string::npos)
      fail("expected mode number but found '" + describe(t) + "'");
    return std::stoi(take().text);
  }

  VarDecl parse_range() {
    VarDecl d;
    d.line = peek().line;
    expect("[");
    d.lo = parse_expr();
    expect(",");
    d.hi = parse_expr();
    expect("]");
    d.name = ident();
    expect(";");
    Box empty;
    Interval lo, hi;
    try {
      lo = eval(*d.lo, empty);
      hi = eval(*d.hi, empty);
    } catch (const Error&) {
      throw PdrhError(Kind::Syntax, "range bounds of '" + d.name + "' must be constant", d.line, 1);
    }
    if (lo.lo() > hi.hi()) throw PdrhError(Kind::Syntax, "empty range for '" + d.name + "'", d.line, 1);
    d.range = Interval(lo.lo(), hi.hi());
    return d;
  }

  RandomDecl parse_random() {
    RandomDecl r;
    r.line = peek().line;
    r.column = peek().col;
    r.dist = ident();
    expect("(");
    if (!is(")")) {
      r.args.push_back(parse_expr());
      while (is(",")) {
        take();
        r.args.push_back(parse_expr());
      }
    }
    expect(")");
    r.name = ident();
    expect(";");
    return r;
  }

  Mode parse_mode() {
    Mode m;
    m.line = peek().line;
    expect("{");
    expect_word("mode");
    m.id = integer();
    expect(";");
    if (is_word("invt")) {
      take();
      expect(":");
      while (is("(") || is_word("true") || is_word("false")) {
        m.invariants.push_back(parse_pred());
        expect(";");
      }
    }
    if (is_word("flow")) {
      take();
      expect(":");
      while (is_word("d")) m.flows.push_back(parse_flow());
    }
    if (is_word("jump")) {
      take();
      expect(":");
      while (!is("}") && peek().type != Token::End) m.jumps.push_back(parse_jump());
    }
    expect("}");
    return m;
  }

  FlowEq parse_flow() {
    FlowEq f;
    f.line = peek().line;
    expect_word("d");
    expect("/");
    expect_word("dt");
    expect("[");
    f.var = ident();
    expect("]");
    expect("=");
    f.rhs = parse_expr();
    expect(";");
    return f;
  }

  Jump parse_jump() {
    Jump j;
    j.line = peek().line;
    j.guard = parse_pred();
    expect("==>");
    expect("@");
    j.target = integer();
    j.reset = parse_pred();
    expect(";");
    return j;
  }

  void parse_section(HybridModel& m) {
    const std::string name = take().text;
    expect(":");
    ModalPred p;
    p.line = peek().line;
    expect("@");
    p.mode = integer();
    p.pred = parse_pred();
    expect(";");
    int& seen = name == "init" ? seen_init_ : name == "goal" ? seen_goal_ : seen_goal_c_;
    if (seen) throw PdrhError(Kind::DuplicateDeclaration, "duplicate " + name + " section", p.line, 1);
    seen = 1;
    (name == "init" ? m.init : name == "goal" ? m.goal : m.goal_c) = std::move(p);
  }

 public:
  int seen_init_ = 0, seen_goal_ = 0, seen_goal_c_ = 0;

  Pred parse_pred() {
    if (is_word("true")) {
      take();
      return Pred::constant(true);
    }
    if (is_word("false")) {
      take();
      return Pred::constant(false);
    }
    expect("(");
    Pred p;
    if (is_word("and") || is_word("or")) {
      const bool conj = take().text == "and";
      std::vector<Pred> kids;
      while (!is(")")) {
        if (peek().type == Token::End) fail("unterminated predicate");
        kids.push_back(parse_pred());
      }
      p = conj ? Pred::all(std::move(kids)) : Pred::any(std::move(kids));
    } else if (is_word("not")) {
      take();
      p = Pred::negate(parse_pred());
    } else {
      ExprPtr l = parse_expr();
      Cmp c;
      if (is("<")) c = Cmp::Lt;
      else if (is("<=")) c = Cmp::Le;
      else if (is(">")) c = Cmp::Gt;
      else if (is(">=")) c = Cmp::Ge;
      else if (is("=")) c = Cmp::Eq;
      else fail("expected comparison but found '" + describe(peek()) + "'");
      take();
      ExprPtr r = parse_expr();
      p = Pred::atom(std::move(l), c, std::move(r));
    }
    expect(")");
    return p;
  }

  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    while (is("+") || is("-")) {
      const ExprKind k = take().text == "+" ? ExprKind::Add : ExprKind::Sub;
      e = make_binary(k, e, parse_term());
    }
    return e;
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_unary();
    while (is("*") || is("/")) {
      const ExprKind k = take().text == "*" ? ExprKind::Mul : ExprKind::Div;
      e = make_binary(k, e, parse_unary());
    }
    return e;
  }

  ExprPtr parse_unary() {
    if (is("-")) {
      take();
      return make_neg(parse_unary());
    }
    if (is("+")) {
      take();
      return parse_unary();
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_primary();
    if (is("^")) {
      take();
      return make_binary(ExprKind::Pow, base, parse_unary());
    }
    return base;
  }

  ExprPtr parse_primary() {
    const Token t = peek();
    if (t.type == Token::Number) {
      take();
      return make_const(t.text);
    }
    if (t.type == Token::Ident) {
      take();
      if (is("(")) {
        static const std::map<std::string, Func> funcs = {{"exp", Func::Exp},   {"log", Func::Log},
                                                          {"ln", Func::Log},    {"sin", Func::Sin},
                                                          {"cos", Func::Cos},   {"sqrt", Func::Sqrt},
                                                          {"abs", Func::Abs}};
        auto it = funcs.find(t.text);
        if (it == funcs.end()) throw PdrhError(Kind::Syntax, "unknown function '" + t.text + "'", t.line, t.col);
        take();
        ExprPtr a = parse_expr();
        expect(")");
        return make_call(it->second, a);
      }
      static const std::set<std::string> reserved = {"and", "or", "not", "true", "false", "mode"};
      if (reserved.count(t.text)) throw PdrhError(Kind::Syntax, "unexpected keyword '" + t.text + "'", t.line, t.col);
      return make_var(t.text);
    }
    if (is("(")) {
      take();
      ExprPtr e = parse_expr();
      expect(")");
      return e;
    }
    fail("expected expression but found '" + describe(t) + "'");
  }

 private:
  std::vector<Token> t_;
  std::size_t i_ = 0;
};

bool is_primed(const std::string& n) { return !n.empty() && n.back() == '\''; }

void check_vars(const std::set<std::string>& used, const std::set<std::string>& known, int line,
                const std::string& where) {
  for (const auto& v : used)
    if (!known.count(v))
      throw PdrhError(Kind::UndeclaredVariable, "undeclared variable '" + v + "' in " + where, line, 1);
}

void check_pred(const Pred& p, const std::set<std::string>& known, int line, const std::string& where) {
  std::set<std::string> used;
  free_vars(p, used);
  check_vars(used, known, line, where);
}

// Splits a reset into var' = expr assignments.
void collect_assignments(const Pred& p, Jump& j, const std::set<std::string>& known) {
  switch (p.kind) {
    case Pred::Kind::True: return;
    case Pred::Kind::And:
      for (const auto& k : p.kids) collect_assignments(k, j, known);
      return;
    case Pred::Kind::Atom: {
      if (p.cmp != Cmp::Eq) break;
      ExprPtr lhs = p.lhs, rhs = p.rhs;
      if (!(lhs->kind == ExprKind::Var && is_primed(lhs->text))) std::swap(lhs, rhs);
      if (!(lhs->kind == ExprKind::Var && is_primed(lhs->text))) break;
      std::set<std::string> used;
      free_vars(*rhs, used);
      for (const auto& v : used)
        if (is_primed(v))
          throw PdrhError(Kind::UnsupportedReset, "reset right-hand side uses primed variable " + v, j.line, 1);
      check_vars(used, known, j.line, "reset");
      const std::string var = lhs->text.substr(0, lhs->text.size() - 1);
      if (!known.count(var))
        throw PdrhError(Kind::UndeclaredVariable, "undeclared variable '" + var + "' in reset", j.line, 1);
      if (var == "time") throw PdrhError(Kind::UnsupportedReset, "time cannot be reset", j.line, 1);
      for (const auto& a : j.assignments)
        if (a.var == var) throw PdrhError(Kind::UnsupportedReset, "variable " + var + " reset twice", j.line, 1);
      j.assignments.push_back({var, rhs});
      return;
    }
    default: break;
  }
  throw PdrhError(Kind::UnsupportedReset, "resets must be conjunctions of var' = expr, got " + print(p), j.line, 1);
}

void validate(HybridModel& m, const Parser& parser) {
  std::set<std::string> known;
  for (const auto& v : m.vars) {
    if (!known.insert(v.name).second)
      throw PdrhError(Kind::DuplicateDeclaration, "variable '" + v.name + "' declared twice", v.line, 1);
  }
  if (!known.count("time")) throw PdrhError(Kind::MissingTime, "missing declaration of 'time' (mode time bound)");
  for (const auto& r : m.randoms) {
    if (!known.insert(r.name).second)
      throw PdrhError(Kind::DuplicateDeclaration, "random parameter '" + r.name + "' collides with a declaration",
                      r.line, r.column);
  }
  if (m.modes.empty()) throw PdrhError(Kind::Syntax, "model has no modes");
  std::set<int> ids;
  for (const auto& md : m.modes)
    if (!ids.insert(md.id).second)
      throw PdrhError(Kind::DuplicateMode, "mode " + std::to_string(md.id) + " defined twice", md.line, 1);

  std::set<std::string> randoms;
  for (const auto& r : m.randoms) randoms.insert(r.name);

  for (auto& md : m.modes) {
    const std::string where = "mode " + std::to_string(md.id);
    std::set<std::string> flowed;
    for (const auto& f : md.flows) {
      if (!known.count(f.var))
        throw PdrhError(Kind::UndeclaredVariable, "flow for undeclared variable '" + f.var + "' in " + where, f.line, 1);
      if (f.var == "time") throw PdrhError(Kind::Syntax, "time has an implicit flow of 1 in " + where, f.line, 1);
      if (!flowed.insert(f.var).second)
        throw PdrhError(Kind::DuplicateFlow, "two flows for '" + f.var + "' in " + where, f.line, 1);
      std::set<std::string> used;
      free_vars(*f.rhs, used);
      check_vars(used, known, f.line, where);
    }
    for (const auto& v : m.vars)
      if (v.name != "time" && !flowed.count(v.name))
        throw PdrhError(Kind::MissingFlow, "no flow for '" + v.name + "' in " + where, md.line, 1);
    for (const auto& p : md.invariants) check_pred(p, known, md.line, where + " invariant");
    for (auto& j : md.jumps) {
      if (!ids.count(j.target))
        throw PdrhError(Kind::UnknownMode, "jump to undeclared mode " + std::to_string(j.target), j.line, 1);
      check_pred(j.guard, known, j.line, where + " guard");
      j.assignments.clear();
      collect_assignments(j.reset, j, known);
    }
  }
  if (!parser.seen_init_) throw PdrhError(Kind::MissingInit, "missing init section");
  if (!parser.seen_goal_) throw PdrhError(Kind::MissingGoal, "missing goal section");
  if (!parser.seen_goal_c_) throw PdrhError(Kind::MissingGoalC, "missing goal_c section");
  for (const ModalPred* p : {&m.init, &m.goal, &m.goal_c}) {
    if (!ids.count(p->mode))
      throw PdrhError(Kind::UnknownMode, "reference to undeclared mode " + std::to_string(p->mode), p->line, 1);
    check_pred(p->pred, known, p->line, "section");
  }
  if (m.goal.mode != m.goal_c.mode)
    throw PdrhError(Kind::GoalModeMismatch, "goal and goal_c must name the same mode", m.goal_c.line, 1);
}

}  // namespace

HybridModel parse(const std::string& text) {
  HybridModel m;
  Lexer lex(text);
  Parser parser(lex.run(m.defines));
  m = parser.parse_model(std::move(m));
  validate(m, parser);
  return m;
}

HybridModel parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read model file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string print(const HybridModel& m) {
  std::ostringstream os;
  for (const auto& [name, body] : m.defines) os << "#define " << name << " " << body << "\n";
  for (const auto& v : m.vars) os << "[" << print(*v.lo) << ", " << print(*v.hi) << "] " << v.name << ";\n";
  for (const auto& r : m.randoms) {
    os << r.dist << "(";
    for (std::size_t i = 0; i < r.args.size(); ++i) os << (i ? ", " : "") << print(*r.args[i]);
    os << ") " << r.name << ";\n";
  }
  for (const auto& md : m.modes) {
    os << "{ mode " << md.id << ";\n";
    if (!md.invariants.empty()) {
      os << "invt:\n";
      for (const auto& p : md.invariants) os << "  " << print(p) << ";\n";
    }
    if (!md.flows.empty()) {
      os << "flow:\n";
      for (const auto& f : md.flows) os << "  d/dt[" << f.var << "] = " << print(*f.rhs) << ";\n";
    }
    if (!md.jumps.empty()) {
      os << "jump:\n";
      for (const auto& j : md.jumps) os << "  " << print(j.guard) << " ==> @" << j.target << " " << print(j.reset) << ";\n";
    }
    os << "}\n";
  }
  os << "init:\n@" << m.init.mode << " " << print(m.init.pred) << ";\n";
  os << "goal:\n@" << m.goal.mode << " " << print(m.goal.pred) << ";\n";
  os << "goal_c:\n@" << m.goal_c.mode << " " << print(m.goal_c.pred) << ";\n";
  return os.str();
}

namespace {

bool equal_preds(const std::vector<Pred>& a, const std::vector<Pred>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equal(a[i], b[i])) return false;
  return true;
}

bool equal_modal(const ModalPred& a, const ModalPred& b) { return a.mode == b.mode && equal(a.pred, b.pred); }

}  // namespace

bool equal(const HybridModel& a, const HybridModel& b) {
  if (a.defines != b.defines) return false;
  if (a.vars.size() != b.vars.size() || a.randoms.size() != b.randoms.size() || a.modes.size() != b.modes.size())
    return false;
  for (std::size_t i = 0; i < a.vars.size(); ++i) {
    const auto &x = a.vars[i], &y = b.vars[i];
    if (x.name != y.name || !equal(*x.lo, *y.lo) || !equal(*x.hi, *y.hi)) return false;
  }
  for (std::size_t i = 0; i < a.randoms.size(); ++i) {
    const auto &x = a.randoms[i], &y = b.randoms[i];
    if (x.dist != y.dist || x.name != y.name || x.args.size() != y.args.size()) return false;
    for (std::size_t j = 0; j < x.args.size(); ++j)
      if (!equal(*x.args[j], *y.args[j])) return false;
  }
  for (std::size_t i = 0; i < a.modes.size(); ++i) {
    const auto &x = a.modes[i], &y = b.modes[i];
    if (x.id != y.id || !equal_preds(x.invariants, y.invariants)) return false;
    if (x.flows.size() != y.flows.size() || x.jumps.size() != y.jumps.size()) return false;
    for (std::size_t j = 0; j < x.flows.size(); ++j)
      if (x.flows[j].var != y.flows[j].var || !equal(*x.flows[j].rhs, *y.flows[j].rhs)) return false;
    for (std::size_t j = 0; j < x.jumps.size(); ++j) {
      const auto &p = x.jumps[j], &q = y.jumps[j];
      if (p.target != q.target || !equal(p.guard, q.guard) || !equal(p.reset, q.reset)) return false;
    }
  }
  return equal_modal(a.init, b.init) && equal_modal(a.goal, b.goal) && equal_modal(a.goal_c, b.goal_c);
}

std::pair<ReachQuery, ReachQuery> instantiate(const HybridModel& m, const Interval& cell, int k, double delta) {
  if (m.randoms.size() != 1)
    throw PdrhError(Kind::Unsupported, m.randoms.empty() ? "model declares no random parameter"
                                                        : "more than one random parameter is not yet supported");
  ReachQuery q;
  q.model = &m;
  q.init_mode = m.init.mode;
  for (const auto& v : m.vars) q.init.push_back(v.range);
  q.init.push_back(cell);
  q.init[m.time_slot()] = Interval(0.0);
  const PredEval init(m.init.pred, [&](const std::string& n) { return m.slot(n); });
  q.init_empty = !init.contract(q.init, 0.0);
  q.k = k;
  q.delta = delta;
  q.target_mode = m.goal.mode;
  ReachQuery qc = q;
  q.target = &m.goal.pred;
  qc.target = &m.goal_c.pred;
  return {q, qc};
}

}  // namespace vreach
