#include "fspace/parse.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <string>

#include "fspace/error.hpp"

namespace fspace {

namespace {

enum class Tok { number, word, symbol, arrow, end };

struct Token {
  Tok kind = Tok::end;
  std::string_view text;
  std::size_t pos = 0;
  Nat value = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  bool accept(std::string_view sym) {
    if ((tok_.kind == Tok::symbol || tok_.kind == Tok::arrow || tok_.kind == Tok::word) &&
        tok_.text == sym) {
      advance();
      return true;
    }
    return false;
  }

  void expect(std::string_view sym) {
    if (!accept(sym)) fail("expected '" + std::string(sym) + "'");
  }

  Nat number() {
    if (tok_.kind != Tok::number) fail("expected a number");
    return take().value;
  }

  [[noreturn]] void fail(const std::string& what) const {
    const std::string got = tok_.kind == Tok::end ? "end of input" : "'" + std::string(tok_.text) + "'";
    throw SyntaxError(tok_.pos, what + ", found " + got);
  }

  /// Two-token lookahead without consuming.
  Token peek_second() const {
    Lexer copy = *this;
    copy.advance();
    return copy.tok_;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    tok_ = Token{Tok::end, {}, pos_, 0};
    if (pos_ >= src_.size()) return;
    const std::size_t start = pos_;
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      tok_.kind = Tok::number;
      tok_.text = src_.substr(start, pos_ - start);
      const auto [ptr, ec] = std::from_chars(tok_.text.data(), tok_.text.data() + tok_.text.size(), tok_.value);
      if (ec != std::errc{}) throw SyntaxError(start, "number out of range");
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
      tok_.kind = Tok::word;
      tok_.text = src_.substr(start, pos_ - start);
    } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      pos_ += 2;
      tok_.kind = Tok::arrow;
      tok_.text = src_.substr(start, 2);
    } else if (std::string_view("%{},()+-&~[];:").find(c) != std::string_view::npos) {
      ++pos_;
      tok_.kind = Tok::symbol;
      tok_.text = src_.substr(start, 1);
    } else {
      throw SyntaxError(start, std::string("unexpected character '") + c + "'");
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token tok_;
};

PeriodicSet set_expr(Lexer& lx);

PeriodicSet atom(Lexer& lx) {
  const Token t = lx.peek();
  if (lx.accept("(")) {
    auto inner = set_expr(lx);
    lx.expect(")");
    return inner;
  }
  if (lx.accept("omega")) return PeriodicSet::omega();
  if (lx.accept("empty")) return PeriodicSet::empty();
  if (lx.accept("{")) {
    std::vector<Nat> elems;
    if (!lx.accept("}")) {
      do elems.push_back(lx.number());
      while (lx.accept(","));
      lx.expect("}");
    }
    return PeriodicSet::finite(std::move(elems));
  }
  if (t.kind == Tok::number) {
    const Nat r = lx.take().value;
    lx.expect("%");
    const Token mt = lx.peek();
    const Nat m = lx.number();
    if (m == 0) throw SyntaxError(mt.pos, "modulus 0");
    if (m > kMaxModulus) throw SyntaxError(mt.pos, "modulus exceeds " + std::to_string(kMaxModulus));
    if (r >= m) throw SyntaxError(t.pos, "residue " + std::to_string(r) + " is not below modulus " + std::to_string(m));
    return PeriodicSet::residue(r, m);
  }
  lx.fail("expected a set");
}

PeriodicSet unary(Lexer& lx) {
  if (lx.accept("~")) return ~unary(lx);
  return atom(lx);
}

PeriodicSet term(Lexer& lx) {
  auto acc = unary(lx);
  while (lx.accept("&")) acc = acc & unary(lx);
  return acc;
}

PeriodicSet set_expr(Lexer& lx) {
  auto acc = term(lx);
  for (;;) {
    if (lx.accept("+")) {
      acc = acc | term(lx);
    } else if (lx.accept("-")) {
      acc = acc - term(lx);
    } else {
      return acc;
    }
  }
}

void expect_end(Lexer& lx) {
  if (lx.peek().kind != Tok::end) lx.fail("expected end of input");
}

// Domain-level errors raised while building a value are reported at the
// position of the construct that caused them.
template <class F>
auto at(std::size_t pos, F&& f) {
  try {
    return f();
  } catch (const SyntaxError&) {
    throw;
  } catch (const Error& e) {
    throw SyntaxError(pos, e.what());
  }
}

SubbasicBox subbasic(Lexer& lx) {
  lx.expect("[");
  auto a = set_expr(lx);
  lx.expect("->");
  auto b = set_expr(lx);
  lx.expect("]");
  return {std::move(a), std::move(b)};
}

Nat call_arg(Lexer& lx) {
  lx.expect("(");
  const Nat c = lx.number();
  lx.expect(")");
  return c;
}

}  // namespace

PeriodicSet parse_set(std::string_view text) {
  Lexer lx(text);
  auto s = at(0, [&] { return set_expr(lx); });
  expect_end(lx);
  return s;
}

std::vector<SubbasicBox> parse_box(std::string_view text) {
  Lexer lx(text);
  std::vector<SubbasicBox> out;
  at(0, [&] {
    do out.push_back(subbasic(lx));
    while (lx.accept("&"));
    return 0;
  });
  expect_end(lx);
  return out;
}

ProgressionMap parse_map(std::string_view text) {
  Lexer lx(text);
  const Token first = lx.peek();
  if (first.kind == Tok::word && first.text != "piece" && first.text != "table") {
    lx.take();
    ProgressionMap f;
    if (first.text == "id") {
      f = ProgressionMap::identity();
    } else if (first.text == "double") {
      f = ProgressionMap::scale(2);
    } else if (first.text == "shift") {
      f = ProgressionMap::shift(call_arg(lx));
    } else if (first.text == "const") {
      f = ProgressionMap::constant(call_arg(lx));
    } else {
      throw SyntaxError(first.pos, "unknown map '" + std::string(first.text) + "'");
    }
    expect_end(lx);
    return f;
  }
  std::vector<DomainPiece> pieces;
  std::map<Nat, Nat> table;
  bool any = false;
  while (lx.peek().kind != Tok::end) {
    if (any) lx.accept(",");
    const Token item = lx.peek();
    if (lx.accept("piece")) {
      lx.expect("(");
      std::optional<PeriodicSet> domain;
      const Token head = lx.peek();
      const bool plain = head.kind == Tok::number && lx.peek_second().text == ",";
      if (!plain) {
        domain = set_expr(lx);
        lx.expect(";");
      }
      AffinePiece p;
      p.a = lx.number();
      lx.expect(",");
      const Token dt = lx.peek();
      p.d = lx.number();
      if (p.d == 0) throw SyntaxError(dt.pos, "piece step 0");
      lx.expect("->");
      p.b = lx.number();
      lx.expect(",");
      p.e = lx.number();
      lx.expect(")");
      if (!domain) {
        domain = at(item.pos, [&] {
          std::vector<Nat> below;
          for (Nat n = p.a % p.d; n < p.a; n += p.d) below.push_back(n);
          return PeriodicSet::residue(p.a % p.d, p.d) - PeriodicSet::finite(std::move(below));
        });
      }
      pieces.push_back({std::move(*domain), p});
    } else if (lx.accept("table")) {
      lx.expect("{");
      if (!lx.accept("}")) {
        do {
          const Token kt = lx.peek();
          const Nat n = lx.number();
          lx.expect(":");
          const Nat v = lx.number();
          if (!table.emplace(n, v).second) throw SyntaxError(kt.pos, "duplicate table key " + std::to_string(n));
        } while (lx.accept(","));
        lx.expect("}");
      }
    } else {
      lx.fail("expected 'piece' or 'table'");
    }
    any = true;
  }
  if (!any) lx.fail("expected a map");
  return at(0, [&] { return ProgressionMap::from_domain_pieces(pieces, table); });
}

}  // namespace fspace
