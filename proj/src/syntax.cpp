#include "fuzzbis/syntax.hpp"

#include <cctype>
#include <utility>
#include <vector>

namespace fuzzbis {

// ---------------------------------------------------------------------------
// Factories

ProgramPtr Program::atomic(std::string action) {
  auto p = std::make_shared<Program>();
  p->kind = Kind::Atomic;
  p->action = std::move(action);
  return p;
}

ProgramPtr Program::test_of(FormulaPtr f) {
  auto p = std::make_shared<Program>();
  p->kind = Kind::Test;
  p->test = std::move(f);
  return p;
}

ProgramPtr Program::union_(ProgramPtr a, ProgramPtr b) {
  auto p = std::make_shared<Program>();
  p->kind = Kind::Union;
  p->left = std::move(a);
  p->right = std::move(b);
  return p;
}

ProgramPtr Program::compose(ProgramPtr a, ProgramPtr b) {
  auto p = std::make_shared<Program>();
  p->kind = Kind::Compose;
  p->left = std::move(a);
  p->right = std::move(b);
  return p;
}

ProgramPtr Program::star(ProgramPtr a) {
  auto p = std::make_shared<Program>();
  p->kind = Kind::Star;
  p->left = std::move(a);
  return p;
}

FormulaPtr Formula::constant_of(Value v) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Const;
  f->constant = std::move(v);
  return f;
}

FormulaPtr Formula::prop_of(std::string name) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Prop;
  f->prop = std::move(name);
  return f;
}

static FormulaPtr binary(Formula::Kind k, FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->left = std::move(a);
  f->right = std::move(b);
  return f;
}

FormulaPtr Formula::and_(FormulaPtr a, FormulaPtr b) {
  return binary(Kind::And, std::move(a), std::move(b));
}

FormulaPtr Formula::or_(FormulaPtr a, FormulaPtr b) {
  return binary(Kind::Or, std::move(a), std::move(b));
}

FormulaPtr Formula::otimes(FormulaPtr a, FormulaPtr b) {
  return binary(Kind::Otimes, std::move(a), std::move(b));
}

FormulaPtr Formula::implies(FormulaPtr a, FormulaPtr b) {
  if (a->kind == Kind::Const) {
    auto f = std::make_shared<Formula>();
    f->kind = Kind::ImpliesFromConst;
    f->constant = a->constant;
    f->left = std::move(b);
    return f;
  }
  if (b->kind == Kind::Const) {
    auto f = std::make_shared<Formula>();
    f->kind = Kind::ImpliesToConst;
    f->constant = b->constant;
    f->left = std::move(a);
    return f;
  }
  return binary(Kind::Implies, std::move(a), std::move(b));
}

FormulaPtr Formula::not_(FormulaPtr a) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Not;
  f->left = std::move(a);
  return f;
}

FormulaPtr Formula::box(ProgramPtr p, FormulaPtr f) {
  auto out = std::make_shared<Formula>();
  out->kind = Kind::Box;
  out->prog = std::move(p);
  out->left = std::move(f);
  return out;
}

FormulaPtr Formula::diamond(ProgramPtr p, FormulaPtr f) {
  auto out = std::make_shared<Formula>();
  out->kind = Kind::Diamond;
  out->prog = std::move(p);
  out->left = std::move(f);
  return out;
}

// ---------------------------------------------------------------------------
// Printing
//
// Precedence: implication 1, \/ 2, /\ and (x) 3, unary 4, atoms 5.
// Programs: | 1, ; 2, postfix 3, atoms 4.

namespace {

void print_formula(const Formula& f, int parent_prec, std::string& out);

void print_program(const Program& p, int parent_prec, std::string& out) {
  auto wrap = [&](int prec, auto&& body) {
    bool paren = prec < parent_prec;
    if (paren) out += '(';
    body();
    if (paren) out += ')';
  };
  switch (p.kind) {
    case Program::Kind::Atomic:
      out += p.action;
      break;
    case Program::Kind::Test:
      // The payload prints at atom level so the trailing '?' reattaches to
      // exactly this formula on reparse.
      print_formula(*p.test, 5, out);
      out += '?';
      break;
    case Program::Kind::Union:
      wrap(1, [&] {
        print_program(*p.left, 1, out);
        out += " | ";
        print_program(*p.right, 2, out);
      });
      break;
    case Program::Kind::Compose:
      wrap(2, [&] {
        print_program(*p.left, 2, out);
        out += " ; ";
        print_program(*p.right, 3, out);
      });
      break;
    case Program::Kind::Star:
      // postfix on postfix needs no parentheses: a** reparses identically
      wrap(3, [&] {
        print_program(*p.left, 3, out);
        out += '*';
      });
      break;
  }
}

void print_formula(const Formula& f, int parent_prec, std::string& out) {
  auto wrap = [&](int prec, auto&& body) {
    bool paren = prec < parent_prec;
    if (paren) out += '(';
    body();
    if (paren) out += ')';
  };
  switch (f.kind) {
    case Formula::Kind::Const:
      out += to_string(f.constant);
      break;
    case Formula::Kind::Prop:
      out += f.prop;
      break;
    case Formula::Kind::And:
      wrap(3, [&] {
        print_formula(*f.left, 3, out);
        out += " /\\ ";
        print_formula(*f.right, 4, out);
      });
      break;
    case Formula::Kind::Otimes:
      wrap(3, [&] {
        print_formula(*f.left, 3, out);
        out += " (x) ";  // not part of the surface grammar
        print_formula(*f.right, 4, out);
      });
      break;
    case Formula::Kind::Or:
      wrap(2, [&] {
        print_formula(*f.left, 2, out);
        out += " \\/ ";
        print_formula(*f.right, 3, out);
      });
      break;
    case Formula::Kind::Implies:
      wrap(1, [&] {
        print_formula(*f.left, 2, out);
        out += " -> ";
        print_formula(*f.right, 1, out);
      });
      break;
    case Formula::Kind::ImpliesFromConst:
      wrap(1, [&] {
        out += to_string(f.constant);
        out += " -> ";
        print_formula(*f.left, 1, out);
      });
      break;
    case Formula::Kind::ImpliesToConst:
      wrap(1, [&] {
        print_formula(*f.left, 2, out);
        out += " -> ";
        out += to_string(f.constant);
      });
      break;
    case Formula::Kind::Not:
      wrap(4, [&] {
        out += '~';
        print_formula(*f.left, 4, out);
      });
      break;
    case Formula::Kind::Box:
      wrap(4, [&] {
        out += '[';
        print_program(*f.prog, 1, out);
        out += ']';
        print_formula(*f.left, 4, out);
      });
      break;
    case Formula::Kind::Diamond:
      wrap(4, [&] {
        out += '<';
        print_program(*f.prog, 1, out);
        out += '>';
        print_formula(*f.left, 4, out);
      });
      break;
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print_formula(f, 1, out);
  return out;
}

std::string to_string(const Program& p) {
  std::string out;
  print_program(p, 1, out);
  return out;
}

// ---------------------------------------------------------------------------
// Structural equality

bool structurally_equal(const Program& a, const Program& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Program::Kind::Atomic:
      return a.action == b.action;
    case Program::Kind::Test:
      return structurally_equal(*a.test, *b.test);
    case Program::Kind::Star:
      return structurally_equal(*a.left, *b.left);
    case Program::Kind::Union:
    case Program::Kind::Compose:
      return structurally_equal(*a.left, *b.left) &&
             structurally_equal(*a.right, *b.right);
  }
  return false;
}

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Formula::Kind::Const:
      return a.constant.identical(b.constant);
    case Formula::Kind::Prop:
      return a.prop == b.prop;
    case Formula::Kind::Not:
      return structurally_equal(*a.left, *b.left);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Otimes:
    case Formula::Kind::Implies:
      return structurally_equal(*a.left, *b.left) &&
             structurally_equal(*a.right, *b.right);
    case Formula::Kind::ImpliesFromConst:
    case Formula::Kind::ImpliesToConst:
      return a.constant.identical(b.constant) &&
             structurally_equal(*a.left, *b.left);
    case Formula::Kind::Box:
    case Formula::Kind::Diamond:
      return structurally_equal(*a.prog, *b.prog) &&
             structurally_equal(*a.left, *b.left);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Lexer / parser

namespace {

struct Token {
  enum class Type {
    Ident,
    Number,
    LParen,
    RParen,
    LAngle,
    RAngle,
    LBracket,
    RBracket,
    Semi,
    Bar,
    Star,
    Question,
    Tilde,
    AndOp,
    OrOp,
    Arrow,
    End
  };
  Type type;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Token::Type t, std::size_t pos, std::string s = "") {
    out.push_back({t, std::move(s), pos});
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) ||
              text[j] == '_' || text[j] == '\''))
        ++j;
      push(Token::Type::Ident, start, text.substr(i, j - i));
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[j])))
        ++j;
      if (j < text.size() && (text[j] == '/' || text[j] == '.')) {
        std::size_t k = j + 1;
        while (k < text.size() &&
               std::isdigit(static_cast<unsigned char>(text[k])))
          ++k;
        if (k > j + 1) j = k;
      }
      push(Token::Type::Number, start, text.substr(i, j - i));
      i = j;
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '\\') {
      push(Token::Type::AndOp, start);
      i += 2;
      continue;
    }
    if (c == '\\' && i + 1 < text.size() && text[i + 1] == '/') {
      push(Token::Type::OrOp, start);
      i += 2;
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      push(Token::Type::Arrow, start);
      i += 2;
      continue;
    }
    switch (c) {
      case '(':
        push(Token::Type::LParen, start);
        break;
      case ')':
        push(Token::Type::RParen, start);
        break;
      case '<':
        push(Token::Type::LAngle, start);
        break;
      case '>':
        push(Token::Type::RAngle, start);
        break;
      case '[':
        push(Token::Type::LBracket, start);
        break;
      case ']':
        push(Token::Type::RBracket, start);
        break;
      case ';':
        push(Token::Type::Semi, start);
        break;
      case '|':
        push(Token::Type::Bar, start);
        break;
      case '*':
        push(Token::Type::Star, start);
        break;
      case '?':
        push(Token::Type::Question, start);
        break;
      case '~':
        push(Token::Type::Tilde, start);
        break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'",
                         start);
    }
    ++i;
  }
  push(Token::Type::End, text.size());
  return out;
}

class Parser {
 public:
  Parser(const std::string& text, LatticePtr lattice)
      : tokens_(lex(text)), lattice_(std::move(lattice)) {}

  FormulaPtr parse_formula_all() {
    FormulaPtr f = formula();
    expect(Token::Type::End, "end of input");
    return f;
  }

  ProgramPtr parse_program_all() {
    ProgramPtr p = program();
    expect(Token::Type::End, "end of input");
    return p;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }
  bool accept(Token::Type t) {
    if (peek().type == t) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(Token::Type t, const std::string& what) {
    if (!accept(t))
      throw ParseError("expected " + what, peek().pos);
  }

  FormulaPtr formula() {  // implication level, right associative
    FormulaPtr lhs = or_level();
    if (accept(Token::Type::Arrow)) {
      FormulaPtr rhs = formula();
      return Formula::implies(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  FormulaPtr or_level() {
    FormulaPtr f = and_level();
    while (accept(Token::Type::OrOp))
      f = Formula::or_(std::move(f), and_level());
    return f;
  }

  FormulaPtr and_level() {
    FormulaPtr f = unary();
    while (accept(Token::Type::AndOp))
      f = Formula::and_(std::move(f), unary());
    return f;
  }

  FormulaPtr unary() {
    if (accept(Token::Type::Tilde)) return Formula::not_(unary());
    if (accept(Token::Type::LAngle)) {
      ProgramPtr p = program();
      expect(Token::Type::RAngle, "'>'");
      return Formula::diamond(std::move(p), unary());
    }
    if (accept(Token::Type::LBracket)) {
      ProgramPtr p = program();
      expect(Token::Type::RBracket, "']'");
      return Formula::box(std::move(p), unary());
    }
    return atom();
  }

  FormulaPtr atom() {
    const Token& t = peek();
    if (t.type == Token::Type::Number) {
      Token tok = take();
      try {
        return Formula::constant_of(lattice_->parse(tok.text));
      } catch (const ValidationError& e) {
        throw ParseError(e.what(), tok.pos);
      }
    }
    if (t.type == Token::Type::Ident) {
      Token tok = take();
      if (lattice_->is_finite()) {
        const auto& elems = lattice_->elements();
        if (std::find(elems.begin(), elems.end(), tok.text) != elems.end())
          return Formula::constant_of(lattice_->element(tok.text));
      }
      return Formula::prop_of(tok.text);
    }
    if (accept(Token::Type::LParen)) {
      FormulaPtr f = formula();
      expect(Token::Type::RParen, "')'");
      return f;
    }
    throw ParseError("expected a formula", t.pos);
  }

  ProgramPtr program() {  // union level
    ProgramPtr p = compose_level();
    while (accept(Token::Type::Bar))
      p = Program::union_(std::move(p), compose_level());
    return p;
  }

  ProgramPtr compose_level() {
    ProgramPtr p = postfix_level();
    while (accept(Token::Type::Semi))
      p = Program::compose(std::move(p), postfix_level());
    return p;
  }

  ProgramPtr postfix_level() {
    ProgramPtr p = program_atom();
    while (accept(Token::Type::Star)) p = Program::star(std::move(p));
    return p;
  }

  // A program atom is a test "formula ?", an atomic action, or a
  // parenthesized program. Tests are tried first with backtracking since a
  // leading identifier or '(' is ambiguous until the '?' appears.
  ProgramPtr program_atom() {
    std::size_t saved = pos_;
    try {
      FormulaPtr f = formula();
      if (accept(Token::Type::Question)) return Program::test_of(std::move(f));
    } catch (const ParseError&) {
    }
    pos_ = saved;
    if (peek().type == Token::Type::Ident) return Program::atomic(take().text);
    if (accept(Token::Type::LParen)) {
      ProgramPtr p = program();
      expect(Token::Type::RParen, "')'");
      return p;
    }
    throw ParseError("expected a program", peek().pos);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  LatticePtr lattice_;
};

}  // namespace

FormulaPtr parse_formula(const std::string& text, const LatticePtr& lattice) {
  return Parser(text, lattice).parse_formula_all();
}

ProgramPtr parse_program(const std::string& text, const LatticePtr& lattice) {
  return Parser(text, lattice).parse_program_all();
}

// ---------------------------------------------------------------------------
// Fragments

FragmentSpec FragmentSpec::parse(const std::string& text) {
  FragmentSpec phi;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string item = text.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    // trim
    while (!item.empty() && std::isspace(static_cast<unsigned char>(
                                item.front())))
      item.erase(item.begin());
    while (!item.empty() &&
           std::isspace(static_cast<unsigned char>(item.back())))
      item.pop_back();
    if (!item.empty()) {
      if (item == "union")
        phi.exclude_union = true;
      else if (item == "implies")
        phi.exclude_implies = true;
      else if (item == "test")
        phi.exclude_test = true;
      else
        throw ValidationError("unknown fragment exclusion '" + item +
                              "' (use union, implies, test)");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return phi;
}

std::string FragmentSpec::str() const {
  std::string out = "{";
  auto add = [&](const char* s) {
    if (out.size() > 1) out += ",";
    out += s;
  };
  if (exclude_union) add("union");
  if (exclude_implies) add("implies");
  if (exclude_test) add("test");
  return out + "}";
}

bool in_fragment(const Program& p, const FragmentSpec& phi) {
  switch (p.kind) {
    case Program::Kind::Atomic:
      return true;
    case Program::Kind::Test:
      return !phi.exclude_test && in_fragment(*p.test, phi);
    case Program::Kind::Union:
      return !phi.exclude_union && in_fragment(*p.left, phi) &&
             in_fragment(*p.right, phi);
    case Program::Kind::Compose:
      return in_fragment(*p.left, phi) && in_fragment(*p.right, phi);
    case Program::Kind::Star:
      return in_fragment(*p.left, phi);
  }
  return false;
}

bool in_fragment(const Formula& f, const FragmentSpec& phi) {
  switch (f.kind) {
    case Formula::Kind::Const:
    case Formula::Kind::Prop:
      return true;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Otimes:
      return in_fragment(*f.left, phi) && in_fragment(*f.right, phi);
    case Formula::Kind::Implies:
      // Only the full implication between two non-constant formulas is
      // gated; a -> f, f -> a and ~f stay available in every fragment.
      return !phi.exclude_implies && in_fragment(*f.left, phi) &&
             in_fragment(*f.right, phi);
    case Formula::Kind::ImpliesFromConst:
    case Formula::Kind::ImpliesToConst:
    case Formula::Kind::Not:
      return in_fragment(*f.left, phi);
    case Formula::Kind::Box:
    case Formula::Kind::Diamond:
      return in_fragment(*f.prog, phi) && in_fragment(*f.left, phi);
  }
  return false;
}

bool is_fKz(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Const:
    case Formula::Kind::Prop:
      return true;
    case Formula::Kind::And:
      return is_fKz(*f.left) && is_fKz(*f.right);
    case Formula::Kind::ImpliesFromConst:
    case Formula::Kind::ImpliesToConst:
      return is_fKz(*f.left);
    case Formula::Kind::Diamond:
      return f.prog->kind == Program::Kind::Atomic && is_fKz(*f.left);
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Folds

static FormulaPtr fold_right(std::span<const FormulaPtr> gamma,
                             const LatticePtr& lattice,
                             FormulaPtr (*combine)(FormulaPtr, FormulaPtr)) {
  FormulaPtr acc = Formula::constant_of(lattice->top());
  for (std::size_t i = gamma.size(); i > 0; --i)
    acc = combine(gamma[i - 1], std::move(acc));
  return acc;
}

FormulaPtr big_wedge(std::span<const FormulaPtr> gamma,
                     const LatticePtr& lattice) {
  return fold_right(gamma, lattice, &Formula::and_);
}

FormulaPtr big_otimes(std::span<const FormulaPtr> gamma,
                      const LatticePtr& lattice) {
  return fold_right(gamma, lattice, &Formula::otimes);
}

}  // namespace fuzzbis
