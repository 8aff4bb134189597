#include "pdl/parser.hpp"

#include <cctype>
#include <optional>
#include <ostream>
#include <vector>

namespace pdl {

namespace {

enum class Tok {
  Ident, False, LBrack, RBrack, LParen, RParen, And, Or, Arrow, Semi, Plus, Star, Quest,
  Comma, Colon, Turnstile, Dash, End
};

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::False: return "'false'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Arrow: return "'->'";
    case Tok::Semi: return "';'";
    case Tok::Plus: return "'+'";
    case Tok::Star: return "'*'";
    case Tok::Quest: return "'?'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Turnstile: return "'|-'";
    case Tok::Dash: return "'-'";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t len) {
    out.push_back({k, std::string(s.substr(i, len)), {i, i + len}});
    i += len;
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      push(s.substr(i, j - i) == "false" ? Tok::False : Tok::Ident, j - i);
      continue;
    }
    switch (c) {
      case '[': push(Tok::LBrack, 1); break;
      case ']': push(Tok::RBrack, 1); break;
      case '(': push(Tok::LParen, 1); break;
      case ')': push(Tok::RParen, 1); break;
      case '&': push(Tok::And, 1); break;
      case ';': push(Tok::Semi, 1); break;
      case '+': push(Tok::Plus, 1); break;
      case '*': push(Tok::Star, 1); break;
      case '?': push(Tok::Quest, 1); break;
      case ',': push(Tok::Comma, 1); break;
      case ':': push(Tok::Colon, 1); break;
      case '|':
        if (i + 1 < s.size() && s[i + 1] == '-') push(Tok::Turnstile, 2);
        else push(Tok::Or, 1);
        break;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') push(Tok::Arrow, 2);
        else push(Tok::Dash, 1);
        break;
      default:
        throw ParseError({i, i + 1}, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::End, "", {s.size(), s.size()}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : toks_(lex(s)) {}

  Formula formula() {
    Formula a = disj();
    if (accept(Tok::Arrow)) return Formula::implies(a, formula());
    return a;
  }

  Program program() {
    Program a = seq();
    while (accept(Tok::Plus)) a = Program::choice(a, seq());
    return a;
  }

  Sequent sequent() {
    Sequent s;
    if (peek().kind != Tok::Turnstile) items(s.antecedent);
    expect(Tok::Turnstile);
    if (peek().kind != Tok::End) items(s.consequent);
    return s;
  }

  Item item() {
    Token x = expect(Tok::Ident);
    if (accept(Tok::Colon)) return LabelledFormula{Label{x.text}, formula()};
    if (accept(Tok::Dash)) {
      Token a = expect(Tok::Ident);
      expect(Tok::Arrow);
      Token y = expect(Tok::Ident);
      return RelAtom{Label{x.text}, a.text, Label{y.text}};
    }
    fail("':' or '-'");
  }

  void finish() { expect(Tok::End); }

 private:
  const Token& peek() const { return toks_[pos_]; }

  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }

  Token expect(Tok k) {
    if (peek().kind != k) fail(tok_name(k));
    return toks_[pos_++];
  }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    throw ParseError(t.span, "expected " + expected + ", found " +
                                 (t.kind == Tok::End ? std::string("end of input") : "'" + t.text + "'"));
  }

  void items(ItemSet& out) {
    out.insert(item());
    while (accept(Tok::Comma)) out.insert(item());
  }

  Formula disj() {
    Formula a = conj();
    while (accept(Tok::Or)) a = Formula::disj(a, conj());
    return a;
  }

  Formula conj() {
    Formula a = unary();
    while (accept(Tok::And)) a = Formula::conj(a, unary());
    return a;
  }

  Formula unary() {
    if (accept(Tok::LBrack)) {
      Program p = program();
      expect(Tok::RBrack);
      return Formula::box(p, unary());
    }
    if (accept(Tok::False)) return Formula::bottom();
    if (peek().kind == Tok::Ident) return Formula::atom(toks_[pos_++].text);
    if (accept(Tok::LParen)) {
      Formula f = formula();
      expect(Tok::RParen);
      return f;
    }
    fail("formula");
  }

  Program seq() {
    Program a = post();
    while (accept(Tok::Semi)) a = Program::seq(a, post());
    return a;
  }

  Program post() {
    Program a = prim();
    while (accept(Tok::Star)) a = Program::star(a);
    return a;
  }

  // A test is a unary formula followed by '?'; try that first and fall back
  // to a plain program when no '?' follows.
  Program prim() {
    std::size_t save = pos_;
    std::optional<Formula> f;
    try {
      f = unary();
    } catch (const ParseError&) {
      f.reset();
    }
    if (f && accept(Tok::Quest)) return Program::test(*f);
    pos_ = save;
    if (peek().kind == Tok::Ident) return Program::atomic(toks_[pos_++].text);
    if (accept(Tok::LParen)) {
      Program p = program();
      expect(Tok::RParen);
      return p;
    }
    fail("program");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Printing with minimal parentheses, mirroring the grammar levels.
enum FPrec { F_IMP = 1, F_OR = 2, F_AND = 3, F_UNARY = 4 };
enum PPrec { P_CHOICE = 1, P_SEQ = 2, P_POST = 3 };

void print_p(std::string& out, const Program& p, int ctx);

void print_f(std::string& out, const Formula& f, int ctx) {
  int prec = F_UNARY;
  switch (f.kind()) {
    case FormulaKind::Implies: prec = F_IMP; break;
    case FormulaKind::Or: prec = F_OR; break;
    case FormulaKind::And: prec = F_AND; break;
    default: break;
  }
  bool paren = prec < ctx;
  if (paren) out += '(';
  switch (f.kind()) {
    case FormulaKind::Bottom: out += "false"; break;
    case FormulaKind::Atom: out += f.name(); break;
    case FormulaKind::And:
      print_f(out, f.lhs(), F_AND);
      out += " & ";
      print_f(out, f.rhs(), F_UNARY);
      break;
    case FormulaKind::Or:
      print_f(out, f.lhs(), F_OR);
      out += " | ";
      print_f(out, f.rhs(), F_AND);
      break;
    case FormulaKind::Implies:
      print_f(out, f.lhs(), F_OR);
      out += " -> ";
      print_f(out, f.rhs(), F_IMP);
      break;
    case FormulaKind::Box:
      out += '[';
      print_p(out, f.program(), P_CHOICE);
      out += ']';
      print_f(out, f.body(), F_UNARY);
      break;
  }
  if (paren) out += ')';
}

void print_p(std::string& out, const Program& p, int ctx) {
  int prec = P_POST;
  if (p.kind() == ProgramKind::Choice) prec = P_CHOICE;
  if (p.kind() == ProgramKind::Seq) prec = P_SEQ;
  bool paren = prec < ctx;
  if (paren) out += '(';
  switch (p.kind()) {
    case ProgramKind::Atomic: out += p.name(); break;
    case ProgramKind::Choice:
      print_p(out, p.lhs(), P_CHOICE);
      out += " + ";
      print_p(out, p.rhs(), P_SEQ);
      break;
    case ProgramKind::Seq:
      print_p(out, p.lhs(), P_SEQ);
      out += ";";
      print_p(out, p.rhs(), P_POST);
      break;
    case ProgramKind::Star:
      // A star directly on a test needs no parentheses: "p?*".
      print_p(out, p.inner(), P_POST);
      out += '*';
      break;
    case ProgramKind::Test:
      print_f(out, p.formula(), F_UNARY);
      out += '?';
      break;
  }
  if (paren) out += ')';
}

}  // namespace

Formula parse_formula(std::string_view text) {
  Parser p(text);
  Formula f = p.formula();
  p.finish();
  return f;
}

Program parse_program(std::string_view text) {
  Parser p(text);
  Program g = p.program();
  p.finish();
  return g;
}

Sequent parse_sequent(std::string_view text) {
  Parser p(text);
  Sequent s = p.sequent();
  p.finish();
  return s;
}

Item parse_item(std::string_view text) {
  Parser p(text);
  Item i = p.item();
  p.finish();
  return i;
}

std::string to_string(const Formula& f) {
  std::string out;
  print_f(out, f, F_IMP);
  return out;
}

std::string to_string(const Program& p) {
  std::string out;
  print_p(out, p, P_CHOICE);
  return out;
}

std::string to_string(const Item& i) {
  if (auto r = as_atom(i)) return r->src.name + " -" + r->prog + "-> " + r->dst.name;
  const auto& lf = std::get<LabelledFormula>(i);
  return lf.label.name + ": " + to_string(lf.formula);
}

std::string to_string(const ItemSet& s) {
  std::string out;
  for (const auto& i : s) {
    if (!out.empty()) out += ", ";
    out += to_string(i);
  }
  return out;
}

std::string to_string(const Sequent& s) {
  std::string a = to_string(s.antecedent), c = to_string(s.consequent);
  std::string out = a;
  if (!a.empty()) out += ' ';
  out += "|-";
  if (!c.empty()) out += ' ' + c;
  return out;
}

std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << to_string(f); }
std::ostream& operator<<(std::ostream& os, const Program& p) { return os << to_string(p); }
std::ostream& operator<<(std::ostream& os, const Item& i) { return os << to_string(i); }
std::ostream& operator<<(std::ostream& os, const Sequent& s) { return os << to_string(s); }
std::ostream& operator<<(std::ostream& os, const Label& l) { return os << l.name; }

}  // namespace pdl
