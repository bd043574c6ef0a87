#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pmk {

/// Source location, 1-based.
struct Location {
  std::size_t line = 1;
  std::size_t column = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(Location loc, const std::string& message);

  Location location() const { return loc_; }
  const std::string& detail() const { return detail_; }

 private:
  Location loc_;
  std::string detail_;
};

enum class TokenKind { Identifier, Integer, Decimal, String, Symbol, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  Location loc;
};

/// Splits model and expression text into tokens. `#` starts a comment that
/// runs to the end of the line. Multi-character symbols are matched greedily.
std::vector<Token> tokenize(std::string_view text);

/// Cursor over a token vector with the usual expect/accept helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens);

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == TokenKind::End; }

  bool accept_symbol(std::string_view sym);
  bool accept_keyword(std::string_view word);
  void expect_symbol(std::string_view sym);
  void expect_keyword(std::string_view word);
  bool peek_symbol(std::string_view sym, std::size_t ahead = 0) const;
  bool peek_keyword(std::string_view word, std::size_t ahead = 0) const;

  std::string expect_identifier(std::string_view what);
  /// A name is either a bare identifier or a quoted string.
  std::string expect_name(std::string_view what);
  long long expect_integer(std::string_view what);

  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(const Token& tok, const std::string& message) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

/// Quotes `s` when it is not a plain identifier.
std::string quote_name(std::string_view s);
bool is_plain_identifier(std::string_view s);

}  // namespace pmk
