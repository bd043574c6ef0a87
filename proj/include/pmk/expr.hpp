#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pmk/lexer.hpp"

namespace pmk {

/// Integer/boolean expression tree used for guards, assignments and arc
/// multiplicities. Booleans are integers (0 false, anything else true).
struct Expr {
  enum class Op {
    Const, Ref,
    Neg, Not,
    Add, Sub, Mul,
    Eq, Ne, Lt, Le, Gt, Ge,
    And, Or,
  };

  Op op = Op::Const;
  std::int64_t value = 0;
  std::string name;  // Ref only
  std::vector<Expr> args;

  static Expr constant(std::int64_t v);
  static Expr ref(std::string name);
  static Expr unary(Op op, Expr a);
  static Expr binary(Op op, Expr a, Expr b);

  bool is_constant() const { return op == Op::Const; }

  friend bool operator==(const Expr&, const Expr&) = default;
};

/// Resolves a reference to its current integer value; returns nullopt for
/// unknown names.
using Resolver = std::function<std::optional<std::int64_t>(std::string_view)>;

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::int64_t evaluate(const Expr& e, const Resolver& resolve);

/// Names referenced anywhere in `e`.
void collect_refs(const Expr& e, std::set<std::string>& out);
std::set<std::string> refs_of(const Expr& e);

/// Replaces every reference to `name` by the constant `value`.
Expr substitute(const Expr& e, std::string_view name, std::int64_t value);

/// Canonical text form; `parse_expr(to_string(e)) == e` for every tree the
/// parser can produce.
std::string to_string(const Expr& e);

Expr parse_expr(std::string_view text);
Expr parse_expr(TokenStream& ts);

/// Matches `name + k` / `k + name` with integer constant k; returns k.
std::optional<std::int64_t> increment_of(const Expr& e, std::string_view name);

/// Collects upper bounds `name <= k` / `name < k` (and mirrored forms) from the
/// top-level conjunction of `e`. Strict bounds are converted to `k - 1`.
std::vector<std::int64_t> upper_bounds_on(const Expr& e, std::string_view name);

}  // namespace pmk
