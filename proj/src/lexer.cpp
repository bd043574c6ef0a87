#include "pmk/lexer.hpp"

#include <array>
#include <cctype>
#include <sstream>

namespace pmk {

namespace {

std::string format_error(Location loc, const std::string& message) {
  std::ostringstream os;
  os << loc.line << ":" << loc.column << ": " << message;
  return os.str();
}

constexpr std::array<std::string_view, 10> kLongSymbols = {
    "-->", ":=", "==", "!=", "<=", ">=", "&&", "||", "++", "--"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

ParseError::ParseError(Location loc, const std::string& message)
    : std::runtime_error(format_error(loc, message)), loc_(loc), detail_(message) {}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  Location loc;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++loc.line;
        loc.column = 1;
      } else {
        ++loc.column;
      }
    }
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token tok;
    tok.loc = loc;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      tok.kind = TokenKind::Identifier;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      tok.kind = TokenKind::Integer;
      if (j + 1 < text.size() && text[j] == '.' &&
          std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
        ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
          std::size_t k = j + 1;
          if (k < text.size() && (text[k] == '-' || text[k] == '+')) ++k;
          if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
            j = k;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
          }
        }
        tok.kind = TokenKind::Decimal;
      }
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (c == '"') {
      std::string value;
      std::size_t j = i + 1;
      bool closed = false;
      while (j < text.size()) {
        if (text[j] == '\\' && j + 1 < text.size()) {
          value.push_back(text[j + 1]);
          j += 2;
          continue;
        }
        if (text[j] == '"') {
          closed = true;
          break;
        }
        if (text[j] == '\n') break;
        value.push_back(text[j]);
        ++j;
      }
      if (!closed) throw ParseError(loc, "unterminated string");
      tok.kind = TokenKind::String;
      tok.text = std::move(value);
      advance(j + 1 - i);
    } else {
      tok.kind = TokenKind::Symbol;
      bool matched = false;
      for (auto sym : kLongSymbols) {
        if (text.substr(i, sym.size()) == sym) {
          tok.text = std::string(sym);
          matched = true;
          break;
        }
      }
      if (!matched) {
        static constexpr std::string_view singles = "{}()[];:,=<>+-*!/`";
        if (singles.find(c) == std::string_view::npos) {
          throw ParseError(loc, std::string("unexpected character '") + c + "'");
        }
        tok.text = std::string(1, c);
      }
      advance(tok.text.size());
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.kind = TokenKind::End;
  end.loc = loc;
  out.push_back(end);
  return out;
}

TokenStream::TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty() || tokens_.back().kind != TokenKind::End) {
    tokens_.push_back(Token{});
  }
}

const Token& TokenStream::peek(std::size_t ahead) const {
  std::size_t idx = pos_ + ahead;
  if (idx >= tokens_.size()) return tokens_.back();
  return tokens_[idx];
}

const Token& TokenStream::next() {
  const Token& t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool TokenStream::peek_symbol(std::string_view sym, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == TokenKind::Symbol && t.text == sym;
}

bool TokenStream::peek_keyword(std::string_view word, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == TokenKind::Identifier && t.text == word;
}

bool TokenStream::accept_symbol(std::string_view sym) {
  if (!peek_symbol(sym)) return false;
  next();
  return true;
}

bool TokenStream::accept_keyword(std::string_view word) {
  if (!peek_keyword(word)) return false;
  next();
  return true;
}

void TokenStream::expect_symbol(std::string_view sym) {
  if (!accept_symbol(sym)) fail("expected '" + std::string(sym) + "'");
}

void TokenStream::expect_keyword(std::string_view word) {
  if (!accept_keyword(word)) fail("expected '" + std::string(word) + "'");
}

std::string TokenStream::expect_identifier(std::string_view what) {
  if (peek().kind != TokenKind::Identifier) fail("expected " + std::string(what));
  return next().text;
}

std::string TokenStream::expect_name(std::string_view what) {
  auto k = peek().kind;
  if (k != TokenKind::Identifier && k != TokenKind::String) fail("expected " + std::string(what));
  return next().text;
}

long long TokenStream::expect_integer(std::string_view what) {
  bool negative = accept_symbol("-");
  if (peek().kind != TokenKind::Integer) fail("expected " + std::string(what));
  const Token& t = next();
  long long v = 0;
  try {
    v = std::stoll(t.text);
  } catch (const std::exception&) {
    fail_at(t, "integer out of range");
  }
  return negative ? -v : v;
}

void TokenStream::fail(const std::string& message) const { fail_at(peek(), message); }

void TokenStream::fail_at(const Token& tok, const std::string& message) const {
  std::string found;
  switch (tok.kind) {
    case TokenKind::End: found = "end of input"; break;
    case TokenKind::String: found = "\"" + tok.text + "\""; break;
    default: found = "'" + tok.text + "'"; break;
  }
  throw ParseError(tok.loc, message + ", found " + found);
}

bool is_plain_identifier(std::string_view s) {
  if (s.empty() || !ident_start(s.front())) return false;
  for (char c : s) {
    if (!ident_char(c)) return false;
  }
  return true;
}

std::string quote_name(std::string_view s) {
  if (is_plain_identifier(s)) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace pmk
