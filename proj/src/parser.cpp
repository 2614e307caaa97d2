#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "mereo/formula.hpp"

namespace mereo {

namespace {

enum class Tok {
  Ident, Nat, LParen, RParen, Bar, Amp, Tilde, Arrow, IffTok,
  Leq, Eq, Dot, UnionTok, InterTok, Minus, ExistsTok, ForallTok, End
};

struct Token {
  Tok kind;
  std::string text;
  uint64_t nat = 0;
  int line = 1, col = 1;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto bump = [&](size_t n) {
    for (size_t j = 0; j < n; ++j) {
      if (s[i + j] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      bump(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      t.text = s.substr(i, j - i);
      if (t.text == "E")
        t.kind = Tok::ExistsTok;
      else if (t.text == "A")
        t.kind = Tok::ForallTok;
      else
        t.kind = Tok::Ident;
      bump(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      uint64_t v = 0;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
        v = v * 10 + static_cast<uint64_t>(s[j] - '0');
        if (v > 1000000000ull) throw ParseError("numeric literal too large", line, col);
        ++j;
      }
      t.kind = Tok::Nat;
      t.nat = v;
      t.text = s.substr(i, j - i);
      bump(j - i);
      out.push_back(std::move(t));
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < s.size() && s[i + 1] == b;
    };
    if (two('<', '-') && i + 2 < s.size() && s[i + 2] == '>') {
      t.kind = Tok::IffTok;
      bump(3);
    } else if (two('<', '=')) {
      t.kind = Tok::Leq;
      bump(2);
    } else if (two('-', '>')) {
      t.kind = Tok::Arrow;
      bump(2);
    } else if (two('\\', '/')) {
      t.kind = Tok::UnionTok;
      bump(2);
    } else if (two('/', '\\')) {
      t.kind = Tok::InterTok;
      bump(2);
    } else {
      switch (c) {
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case '|': t.kind = Tok::Bar; break;
        case '&': t.kind = Tok::Amp; break;
        case '~': t.kind = Tok::Tilde; break;
        case '=': t.kind = Tok::Eq; break;
        case '.': t.kind = Tok::Dot; break;
        case '-': t.kind = Tok::Minus; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", line, col);
      }
      bump(1);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  out.push_back(std::move(end));
  return out;
}

// Recursive-descent parser over the token stream. Term-vs-formula ambiguity
// at '(' is resolved by a bounded backtrack: try a relational atom first and
// fall back to a parenthesized formula.
class Parser {
 public:
  Parser(std::vector<Token> toks, TheoryMode mode)
      : toks_(std::move(toks)), mode_(mode) {}

  Formula run() {
    Formula f = parse_iff();
    expect(Tok::End, "unexpected trailing input");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& get() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind == k) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(Tok k, const char* what) {
    if (!accept(k)) throw ParseError(what, peek().line, peek().col);
  }

  Formula parse_iff() {
    Formula f = parse_imp();
    while (accept(Tok::IffTok)) f = Formula::iff(std::move(f), parse_imp());
    return f;
  }

  Formula parse_imp() {
    std::vector<Formula> parts;
    parts.push_back(parse_or());
    while (accept(Tok::Arrow)) parts.push_back(parse_or());
    Formula f = std::move(parts.back());
    for (size_t i = parts.size() - 1; i-- > 0;)
      f = Formula::implies(std::move(parts[i]), std::move(f));
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (accept(Tok::Bar)) f = Formula::disj(std::move(f), parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (accept(Tok::Amp)) f = Formula::conj(std::move(f), parse_unary());
    return f;
  }

  Formula parse_unary() {
    if (accept(Tok::Tilde)) return Formula::neg(parse_unary());
    if (peek().kind == Tok::ExistsTok || peek().kind == Tok::ForallTok) {
      bool ex = get().kind == Tok::ExistsTok;
      const Token& v = peek();
      expect(Tok::Ident, "expected variable after quantifier");
      expect(Tok::Dot, "expected '.' after quantified variable");
      Formula body = parse_unary();
      return ex ? Formula::exists(v.text, std::move(body))
                : Formula::forall(v.text, std::move(body));
    }
    return parse_atom();
  }

  Formula parse_atom() {
    if (accept(Tok::Bar)) {
      Term t = parse_term();
      expect(Tok::Bar, "expected closing '|'");
      expect(Tok::Eq, "expected '=' after cardinality");
      const Token& n = peek();
      expect(Tok::Nat, "expected numeral");
      return Formula::card_eq(std::move(t), n.nat);
    }
    // Relational atom, or a parenthesized formula.
    size_t save = pos_;
    std::optional<Term> t = try_parse_term();
    if (t && (peek().kind == Tok::Leq || peek().kind == Tok::Eq)) {
      bool leq = get().kind == Tok::Leq;
      Term rhs = parse_term();
      return leq ? Formula::subseteq(std::move(*t), std::move(rhs))
                 : Formula::equal(std::move(*t), std::move(rhs));
    }
    pos_ = save;
    if (accept(Tok::LParen)) {
      Formula f = parse_iff();
      expect(Tok::RParen, "expected ')'");
      return f;
    }
    throw ParseError("expected formula", peek().line, peek().col);
  }

  std::optional<Term> try_parse_term() {
    size_t save = pos_;
    ++probing_;
    std::optional<Term> t;
    try {
      t = parse_term();
    } catch (const ParseError&) {
      pos_ = save;
    }
    --probing_;
    return t;
  }

  Term parse_term() {
    Term t = parse_tfactor();
    for (;;) {
      if (accept(Tok::UnionTok))
        t = Term::union_of(std::move(t), parse_tfactor());
      else if (accept(Tok::Minus))
        t = Term::diff(std::move(t), parse_tfactor());
      else
        return t;
    }
  }

  Term parse_tfactor() {
    Term t = parse_tatom();
    while (accept(Tok::InterTok)) t = Term::inter(std::move(t), parse_tatom());
    return t;
  }

  Term parse_tatom() {
    const Token& tok = peek();
    if (tok.kind == Tok::Ident) {
      get();
      return Term::var(tok.text);
    }
    if (tok.kind == Tok::Nat) {
      if (tok.nat == 0) {
        get();
        return Term::empty();
      }
      if (tok.nat == 1) {
        // The universe constant is a mode error in set mode regardless of
        // backtracking: no other reading of '1' exists.
        if (mode_ == TheoryMode::Set)
          throw ModeError("the universe constant 1 is not available in set mode (line " +
                          std::to_string(tok.line) + ", column " + std::to_string(tok.col) + ")");
        get();
        return Term::universe();
      }
      throw ParseError("expected term", tok.line, tok.col);
    }
    if (tok.kind == Tok::LParen) {
      get();
      Term t = parse_term();
      expect(Tok::RParen, "expected ')' in term");
      return t;
    }
    throw ParseError("expected term", tok.line, tok.col);
  }

  std::vector<Token> toks_;
  TheoryMode mode_;
  size_t pos_ = 0;
  int probing_ = 0;
};

bool compound_term(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Empty:
    case Term::Kind::Universe:
      return false;
    default:
      return true;
  }
}

std::string render_term(const Term& t, bool parens) {
  std::string inner;
  switch (t.kind()) {
    case Term::Kind::Var: return t.name();
    case Term::Kind::Empty: return "0";
    case Term::Kind::Universe: return "1";
    case Term::Kind::Union:
      inner = render_term(t.left(), true) + " \\/ " + render_term(t.right(), true);
      break;
    case Term::Kind::Inter:
      inner = render_term(t.left(), true) + " /\\ " + render_term(t.right(), true);
      break;
    case Term::Kind::Diff:
      inner = render_term(t.left(), true) + " - " + render_term(t.right(), true);
      break;
  }
  return parens ? "(" + inner + ")" : inner;
}

std::string render_sub(const Formula& f);

// Top-level rendering: atoms bare, everything below fully parenthesized.
std::string render_top(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Subseteq:
      return render_term(f.lhs(), compound_term(f.lhs())) + " <= " +
             render_term(f.rhs(), compound_term(f.rhs()));
    case Formula::Kind::Equal:
      return render_term(f.lhs(), compound_term(f.lhs())) + " = " +
             render_term(f.rhs(), compound_term(f.rhs()));
    case Formula::Kind::CardEq:
      return "|" + render_term(f.term(), compound_term(f.term())) + "| = " +
             std::to_string(f.k());
    case Formula::Kind::Not:
      return "~" + render_sub(f.child(0));
    case Formula::Kind::And:
      return render_sub(f.child(0)) + " & " + render_sub(f.child(1));
    case Formula::Kind::Or:
      return render_sub(f.child(0)) + " | " + render_sub(f.child(1));
    case Formula::Kind::Implies:
      return render_sub(f.child(0)) + " -> " + render_sub(f.child(1));
    case Formula::Kind::Iff:
      return render_sub(f.child(0)) + " <-> " + render_sub(f.child(1));
    case Formula::Kind::Exists:
      return "E " + f.var() + ". " + render_sub(f.child(0));
    case Formula::Kind::Forall:
      return "A " + f.var() + ". " + render_sub(f.child(0));
  }
  throw std::logic_error("bad formula kind");
}

std::string render_sub(const Formula& f) { return "(" + render_top(f) + ")"; }

}  // namespace

Formula parse(const std::string& text, TheoryMode mode) {
  Parser p(lex(text), mode);
  return p.run();
}

std::string render(const Formula& f) { return render_top(f); }

std::string render(const Term& t) { return render_term(t, false); }

}  // namespace mereo
