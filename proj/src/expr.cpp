#include "pmk/expr.hpp"

#include <sstream>

namespace pmk {

Expr Expr::constant(std::int64_t v) {
  Expr e;
  e.op = Op::Const;
  e.value = v;
  return e;
}

Expr Expr::ref(std::string n) {
  Expr e;
  e.op = Op::Ref;
  e.name = std::move(n);
  return e;
}

Expr Expr::unary(Op op, Expr a) {
  Expr e;
  e.op = op;
  e.args.push_back(std::move(a));
  return e;
}

Expr Expr::binary(Op op, Expr a, Expr b) {
  Expr e;
  e.op = op;
  e.args.push_back(std::move(a));
  e.args.push_back(std::move(b));
  return e;
}

std::int64_t evaluate(const Expr& e, const Resolver& resolve) {
  using Op = Expr::Op;
  switch (e.op) {
    case Op::Const: return e.value;
    case Op::Ref: {
      auto v = resolve(e.name);
      if (!v) throw EvalError("unbound name '" + e.name + "'");
      return *v;
    }
    case Op::Neg: return -evaluate(e.args[0], resolve);
    case Op::Not: return evaluate(e.args[0], resolve) == 0 ? 1 : 0;
    case Op::And:
      return (evaluate(e.args[0], resolve) != 0 && evaluate(e.args[1], resolve) != 0) ? 1 : 0;
    case Op::Or:
      return (evaluate(e.args[0], resolve) != 0 || evaluate(e.args[1], resolve) != 0) ? 1 : 0;
    default: break;
  }
  std::int64_t a = evaluate(e.args[0], resolve);
  std::int64_t b = evaluate(e.args[1], resolve);
  switch (e.op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Eq: return a == b;
    case Op::Ne: return a != b;
    case Op::Lt: return a < b;
    case Op::Le: return a <= b;
    case Op::Gt: return a > b;
    case Op::Ge: return a >= b;
    default: break;
  }
  throw EvalError("malformed expression");
}

void collect_refs(const Expr& e, std::set<std::string>& out) {
  if (e.op == Expr::Op::Ref) out.insert(e.name);
  for (const auto& a : e.args) collect_refs(a, out);
}

std::set<std::string> refs_of(const Expr& e) {
  std::set<std::string> out;
  collect_refs(e, out);
  return out;
}

Expr substitute(const Expr& e, std::string_view name, std::int64_t value) {
  if (e.op == Expr::Op::Ref) {
    return e.name == name ? Expr::constant(value) : e;
  }
  Expr out = e;
  for (auto& a : out.args) a = substitute(a, name, value);
  return out;
}

namespace {

// Binding strength; higher binds tighter.
int precedence(Expr::Op op) {
  using Op = Expr::Op;
  switch (op) {
    case Op::Or: return 1;
    case Op::And: return 2;
    case Op::Eq: case Op::Ne: return 3;
    case Op::Lt: case Op::Le: case Op::Gt: case Op::Ge: return 4;
    case Op::Add: case Op::Sub: return 5;
    case Op::Mul: return 6;
    case Op::Neg: case Op::Not: return 7;
    default: return 8;
  }
}

const char* symbol(Expr::Op op) {
  using Op = Expr::Op;
  switch (op) {
    case Op::Or: return "||";
    case Op::And: return "&&";
    case Op::Eq: return "==";
    case Op::Ne: return "!=";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Neg: return "-";
    case Op::Not: return "!";
    default: return "?";
  }
}

void print(std::ostream& os, const Expr& e) {
  using Op = Expr::Op;
  switch (e.op) {
    case Op::Const:
      if (e.value < 0) {
        os << "(" << e.value << ")";
      } else {
        os << e.value;
      }
      return;
    case Op::Ref: os << quote_name(e.name); return;
    case Op::Neg:
    case Op::Not: {
      os << symbol(e.op);
      const Expr& a = e.args[0];
      bool paren = precedence(a.op) < precedence(e.op) || a.op == Op::Neg || a.op == Op::Not;
      if (paren) os << "(";
      print(os, a);
      if (paren) os << ")";
      return;
    }
    default: break;
  }
  int p = precedence(e.op);
  const Expr& l = e.args[0];
  const Expr& r = e.args[1];
  bool lp = precedence(l.op) < p;
  // Left-associative: a right operand of equal precedence needs parentheses.
  bool rp = precedence(r.op) <= p;
  if (lp) os << "(";
  print(os, l);
  if (lp) os << ")";
  os << " " << symbol(e.op) << " ";
  if (rp) os << "(";
  print(os, r);
  if (rp) os << ")";
}

class Parser {
 public:
  explicit Parser(TokenStream& ts) : ts_(ts) {}

  Expr parse() { return parse_binary(1); }

 private:
  static std::optional<Expr::Op> binary_op(const Token& t) {
    if (t.kind != TokenKind::Symbol) return std::nullopt;
    using Op = Expr::Op;
    const std::string& s = t.text;
    if (s == "||") return Op::Or;
    if (s == "&&") return Op::And;
    if (s == "==") return Op::Eq;
    if (s == "!=") return Op::Ne;
    if (s == "<") return Op::Lt;
    if (s == "<=") return Op::Le;
    if (s == ">") return Op::Gt;
    if (s == ">=") return Op::Ge;
    if (s == "+") return Op::Add;
    if (s == "-") return Op::Sub;
    if (s == "*") return Op::Mul;
    return std::nullopt;
  }

  Expr parse_binary(int min_prec) {
    Expr lhs = parse_unary();
    while (true) {
      auto op = binary_op(ts_.peek());
      if (!op || precedence(*op) < min_prec) break;
      ts_.next();
      Expr rhs = parse_binary(precedence(*op) + 1);
      lhs = Expr::binary(*op, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr parse_unary() {
    if (ts_.accept_symbol("-")) {
      if (ts_.peek().kind == TokenKind::Integer) {
        return Expr::constant(-parse_int());
      }
      return Expr::unary(Expr::Op::Neg, parse_unary());
    }
    if (ts_.accept_symbol("!")) return Expr::unary(Expr::Op::Not, parse_unary());
    return parse_primary();
  }

  std::int64_t parse_int() {
    const Token& t = ts_.next();
    try {
      return std::stoll(t.text);
    } catch (const std::exception&) {
      ts_.fail_at(t, "integer out of range");
    }
  }

  Expr parse_primary() {
    const Token& t = ts_.peek();
    if (t.kind == TokenKind::Integer) return Expr::constant(parse_int());
    if (t.kind == TokenKind::Identifier) {
      ts_.next();
      if (t.text == "true") return Expr::constant(1);
      if (t.text == "false") return Expr::constant(0);
      return Expr::ref(t.text);
    }
    if (t.kind == TokenKind::String) {
      ts_.next();
      return Expr::ref(t.text);
    }
    if (ts_.accept_symbol("(")) {
      Expr inner = parse_binary(1);
      ts_.expect_symbol(")");
      return inner;
    }
    ts_.fail("expected expression");
  }

  TokenStream& ts_;
};

}  // namespace

std::string to_string(const Expr& e) {
  std::ostringstream os;
  print(os, e);
  return os.str();
}

Expr parse_expr(TokenStream& ts) { return Parser(ts).parse(); }

Expr parse_expr(std::string_view text) {
  TokenStream ts(tokenize(text));
  Expr e = parse_expr(ts);
  if (!ts.at_end()) ts.fail("unexpected trailing input");
  return e;
}

std::optional<std::int64_t> increment_of(const Expr& e, std::string_view name) {
  if (e.op != Expr::Op::Add) return std::nullopt;
  const Expr& a = e.args[0];
  const Expr& b = e.args[1];
  if (a.op == Expr::Op::Ref && a.name == name && b.is_constant()) return b.value;
  if (b.op == Expr::Op::Ref && b.name == name && a.is_constant()) return a.value;
  return std::nullopt;
}

std::vector<std::int64_t> upper_bounds_on(const Expr& e, std::string_view name) {
  using Op = Expr::Op;
  std::vector<std::int64_t> out;
  if (e.op == Op::And) {
    for (const auto& a : e.args) {
      auto sub = upper_bounds_on(a, name);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }
  if (e.args.size() != 2) return out;
  const Expr& l = e.args[0];
  const Expr& r = e.args[1];
  auto is_name = [&](const Expr& x) { return x.op == Op::Ref && x.name == name; };
  if (is_name(l) && r.is_constant()) {
    if (e.op == Op::Le || e.op == Op::Eq) out.push_back(r.value);
    if (e.op == Op::Lt) out.push_back(r.value - 1);
  } else if (is_name(r) && l.is_constant()) {
    if (e.op == Op::Ge || e.op == Op::Eq) out.push_back(l.value);
    if (e.op == Op::Gt) out.push_back(l.value - 1);
  }
  return out;
}

}  // namespace pmk
