// Recursive-descent parser for loop files, guards and polynomials.

#include <algorithm>
#include "twn/error.hpp"
#include "twn/loop.hpp"

#include <cctype>
#include <fstream>
#include <memory>
#include <sstream>

namespace twn {

namespace {

enum class Tok { Ident, Int, Op, End };

struct Token {
  Tok kind;
  std::string text;
  int line, column;
};

class Lexer {
public:
  Lexer(std::string_view text, int line, int column_offset) : text_(text), line_(line), col0_(column_offset)
  {
    tokenize();
  }

  const Token &peek(std::size_t ahead = 0) const
  {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(std::string_view op)
  {
    if (peek().kind == Tok::Op && peek().text == op) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(std::string_view op)
  {
    if (!accept(op))
      fail("expected '" + std::string(op) + "'", peek());
  }
  std::size_t mark() const { return pos_; }
  void reset(std::size_t m) { pos_ = m; }

  [[noreturn]] static void fail(const std::string &msg, const Token &t)
  {
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + " (got " + got + ")", t.line, t.column);
  }

private:
  void tokenize()
  {
    std::size_t i = 0;
    while (i < text_.size()) {
      char c = text_[i];
      int col = col0_ + static_cast<int>(i) + 1;
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_' || text_[j] == '\''))
          ++j;
        toks_.push_back({Tok::Ident, std::string(text_.substr(i, j - i)), line_, col});
        i = j;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j])))
          ++j;
        if (j < text_.size() && (text_[j] == '.' || text_[j] == 'e' || text_[j] == 'E')) {
          std::size_t k = j;
          while (k < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[k])) || text_[k] == '.'))
            ++k;
          throw ParseError("non-rational literal '" + std::string(text_.substr(i, k - i)) + "'", line_, col);
        }
        toks_.push_back({Tok::Int, std::string(text_.substr(i, j - i)), line_, col});
        i = j;
        continue;
      }
      static const char *two[] = {">=", "<=", "==", "!=", "&&", "||", ":="};
      bool matched = false;
      for (const char *op : two) {
        if (text_.substr(i, 2) == op) {
          toks_.push_back({Tok::Op, op, line_, col});
          i += 2;
          matched = true;
          break;
        }
      }
      if (matched)
        continue;
      if (std::string_view("+-*/^()<>=!").find(c) != std::string_view::npos) {
        toks_.push_back({Tok::Op, std::string(1, c), line_, col});
        ++i;
        continue;
      }
      throw ParseError(std::string("unexpected character '") + c + "'", line_, col);
    }
    toks_.push_back({Tok::End, "", line_, col0_ + static_cast<int>(text_.size()) + 1});
  }

  std::string_view text_;
  int line_, col0_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Called for every identifier; throws if the variable is not allowed.
using VarCheck = std::function<void(const Token &)>;

class ExprParser {
public:
  ExprParser(Lexer &lex, VarCheck check) : lex_(lex), check_(std::move(check)) {}

  // poly ::= ['-'|'+'] term (('+'|'-') term)*
  Polynomial poly()
  {
    Polynomial acc;
    bool neg = false;
    if (lex_.accept("-"))
      neg = true;
    else
      lex_.accept("+");
    Polynomial t = term();
    acc = neg ? -t : t;
    while (true) {
      if (lex_.accept("+"))
        acc += term();
      else if (lex_.accept("-"))
        acc -= term();
      else
        break;
    }
    return acc;
  }

private:
  // term ::= factor (('*' factor) | ('/' int))*
  Polynomial term()
  {
    Polynomial acc = factor();
    while (true) {
      if (lex_.accept("*")) {
        acc *= factor();
      } else if (lex_.peek().kind == Tok::Op && lex_.peek().text == "/") {
        Token slash = lex_.next();
        Token d = lex_.next();
        if (d.kind != Tok::Int)
          Lexer::fail("division only by rational literals", d);
        Rational den(Integer(d.text, 10));
        if (den == 0)
          throw ParseError("division by zero", slash.line, slash.column);
        acc = acc.scaled(1 / den);
      } else {
        break;
      }
    }
    return acc;
  }

  // factor ::= atom ['^' int] | '-' factor
  Polynomial factor()
  {
    if (lex_.accept("-"))
      return -factor();
    Polynomial base = primary();
    if (lex_.accept("^")) {
      Token e = lex_.next();
      if (e.kind != Tok::Int || Integer(e.text, 10) < 1 || Integer(e.text, 10) > 100000)
        Lexer::fail("exponent must be a positive integer", e);
      base = base.pow(static_cast<unsigned>(std::stoul(e.text)));
    }
    return base;
  }

  Polynomial primary()
  {
    Token t = lex_.next();
    if (t.kind == Tok::Int)
      return Polynomial(Rational(Integer(t.text, 10)));
    if (t.kind == Tok::Ident) {
      if (t.text == "true" || t.text == "false")
        Lexer::fail("expected polynomial", t);
      check_(t);
      return Polynomial(Var(t.text));
    }
    if (t.kind == Tok::Op && t.text == "(") {
      Polynomial p = poly();
      lex_.expect(")");
      return p;
    }
    Lexer::fail("expected polynomial", t);
  }

  Lexer &lex_;
  VarCheck check_;
};

// Boolean structure before desugaring.
struct BExpr {
  enum Kind { And, Or, Not, Cmp } kind;
  std::vector<std::unique_ptr<BExpr>> kids;
  Polynomial lhs, rhs;
  std::string op;
};

class BoolParser {
public:
  BoolParser(Lexer &lex, VarCheck check) : lex_(lex), expr_(lex, std::move(check)) {}

  std::unique_ptr<BExpr> disj()
  {
    auto first = conj();
    if (!(lex_.peek().kind == Tok::Op && lex_.peek().text == "||"))
      return first;
    auto node = std::make_unique<BExpr>();
    node->kind = BExpr::Or;
    node->kids.push_back(std::move(first));
    while (lex_.accept("||"))
      node->kids.push_back(conj());
    return node;
  }

private:
  std::unique_ptr<BExpr> conj()
  {
    auto first = unary();
    if (!(lex_.peek().kind == Tok::Op && lex_.peek().text == "&&"))
      return first;
    auto node = std::make_unique<BExpr>();
    node->kind = BExpr::And;
    node->kids.push_back(std::move(first));
    while (lex_.accept("&&"))
      node->kids.push_back(unary());
    return node;
  }

  std::unique_ptr<BExpr> unary()
  {
    if (lex_.accept("!")) {
      auto node = std::make_unique<BExpr>();
      node->kind = BExpr::Not;
      node->kids.push_back(unary());
      return node;
    }
    if (lex_.peek().kind == Tok::Op && lex_.peek().text == "(") {
      // Either a parenthesised formula or a comparison starting with '('.
      std::size_t m = lex_.mark();
      try {
        return comparison();
      } catch (const ParseError &) {
        lex_.reset(m);
      }
      lex_.expect("(");
      auto inner = disj();
      lex_.expect(")");
      return inner;
    }
    return comparison();
  }

  std::unique_ptr<BExpr> comparison()
  {
    auto node = std::make_unique<BExpr>();
    node->kind = BExpr::Cmp;
    node->lhs = expr_.poly();
    Token op = lex_.next();
    static const std::set<std::string> rels{">", ">=", "<", "<=", "==", "=", "!="};
    if (op.kind != Tok::Op || !rels.count(op.text))
      Lexer::fail("expected comparison operator", op);
    node->op = op.text == "=" ? "==" : op.text;
    node->rhs = expr_.poly();
    return node;
  }

  Lexer &lex_;
  ExprParser expr_;
};

Formula leaf(Polynomial p, Rel r) { return Formula(Atom{std::move(p), r}); }

// Pushes negations into atoms and removes <, <=, ==, != sugar.
Formula lower(const BExpr &e, bool negated, bool keep_eq)
{
  switch (e.kind) {
  case BExpr::Not:
    return lower(*e.kids[0], !negated, keep_eq);
  case BExpr::And:
  case BExpr::Or: {
    std::vector<Formula> cs;
    for (const auto &k : e.kids)
      cs.push_back(lower(*k, negated, keep_eq));
    bool is_and = (e.kind == BExpr::And) != negated;
    return is_and ? Formula::conj(std::move(cs)) : Formula::disj(std::move(cs));
  }
  case BExpr::Cmp:
    break;
  }
  Polynomial d = e.lhs - e.rhs;
  std::string op = e.op;
  if (negated) {
    static const std::map<std::string, std::string> flip{{">", "<="}, {">=", "<"}, {"<", ">="},
                                                         {"<=", ">"}, {"==", "!="}, {"!=", "=="}};
    op = flip.at(op);
  }
  if (op == ">")
    return leaf(d, Rel::Greater);
  if (op == ">=")
    return leaf(d, Rel::GreaterEq);
  if (op == "<")
    return leaf(-d, Rel::Greater);
  if (op == "<=")
    return leaf(-d, Rel::GreaterEq);
  if (op == "==") {
    if (keep_eq)
      return leaf(d, Rel::Equal);
    return Formula::conj({leaf(d, Rel::GreaterEq), leaf(-d, Rel::GreaterEq)});
  }
  return Formula::disj({leaf(d, Rel::Greater), leaf(-d, Rel::Greater)});
}

Formula parse_bool(std::string_view text, int line, int col0, bool keep_eq, const VarCheck &check)
{
  Lexer lex(text, line, col0);
  BoolParser p(lex, check);
  auto tree = p.disj();
  if (lex.peek().kind != Tok::End)
    Lexer::fail("trailing input", lex.peek());
  return lower(*tree, false, keep_eq);
}

Polynomial parse_poly(std::string_view text, int line, int col0, const VarCheck &check)
{
  Lexer lex(text, line, col0);
  ExprParser p(lex, check);
  Polynomial r = p.poly();
  if (lex.peek().kind != Tok::End)
    Lexer::fail("trailing input", lex.peek());
  return r;
}

std::string_view trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

bool valid_ident(std::string_view s)
{
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''))
      return false;
  return true;
}

} // namespace

Polynomial parse_polynomial(std::string_view text)
{
  return parse_poly(text, 1, 0, [](const Token &) {});
}

Formula parse_formula(std::string_view text, bool keep_equalities)
{
  return parse_bool(text, 1, 0, keep_equalities, [](const Token &) {});
}

Loop parse_loop(std::string_view text)
{
  Loop loop;
  bool have_vars = false, have_guard = false, in_update = false;
  std::set<std::string> declared;
  std::map<Var, Polynomial> updates;
  struct Pending {
    std::string text;
    int line, col;
  };
  std::optional<Pending> guard_src;
  std::vector<std::pair<std::string, Pending>> update_src;

  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string_view::npos)
      raw = raw.substr(0, hash);
    std::string_view line = trim(raw);
    if (line.empty()) {
      if (end == text.size())
        break;
      continue;
    }
    int indent = static_cast<int>(raw.find(line.front()));

    auto keyword = [&](std::string_view key) -> std::optional<std::string_view> {
      if (line.substr(0, key.size()) == key && line.size() > key.size() && line[key.size()] == ':' &&
          (line.size() == key.size() + 1 || line[key.size() + 1] != '='))
        return line.substr(key.size() + 1);
      return std::nullopt;
    };

    if (auto rest = keyword("vars")) {
      in_update = false;
      if (have_vars)
        throw ParseError("duplicate vars declaration", line_no, indent + 1);
      have_vars = true;
      std::string list(*rest);
      std::replace(list.begin(), list.end(), ',', ' ');
      std::istringstream names{list};
      std::string name;
      while (names >> name) {
        if (!valid_ident(name))
          throw ParseError("invalid variable name '" + name + "'", line_no, indent + 1);
        if (!declared.insert(name).second)
          throw ParseError("variable '" + name + "' declared twice", line_no, indent + 1);
        loop.vars.emplace_back(name);
      }
      if (loop.vars.empty())
        throw ParseError("no variables declared", line_no, indent + 1);
    } else if (auto rest = keyword("ring")) {
      in_update = false;
      auto r = parse_ring(trim(*rest));
      if (!r)
        throw ParseError("unknown ring '" + std::string(trim(*rest)) + "'", line_no, indent + 1);
      loop.ring = *r;
    } else if (auto rest = keyword("guard")) {
      in_update = false;
      if (have_guard)
        throw ParseError("duplicate guard", line_no, indent + 1);
      have_guard = true;
      int col = indent + 6; // "guard:" prefix
      guard_src = Pending{std::string(*rest), line_no, col};
    } else if (auto rest = keyword("update")) {
      in_update = true;
      if (!trim(*rest).empty())
        throw ParseError("update assignments go on the following lines", line_no, indent + 8);
    } else if (in_update) {
      auto assign = line.find(":=");
      if (assign == std::string_view::npos)
        throw ParseError("expected '<var> := <poly>'", line_no, indent + 1);
      std::string lhs(trim(line.substr(0, assign)));
      if (!valid_ident(lhs))
        throw ParseError("invalid assignment target '" + lhs + "'", line_no, indent + 1);
      update_src.emplace_back(lhs, Pending{std::string(line.substr(assign + 2)), line_no,
                                           indent + static_cast<int>(assign) + 2});
    } else {
      throw ParseError("unexpected line", line_no, indent + 1);
    }
    if (end == text.size())
      break;
  }

  if (!have_vars)
    throw ParseError("missing 'vars:' declaration", 1, 1);
  VarCheck check = [&](const Token &t) {
    if (!declared.count(t.text))
      throw ParseError("undeclared variable '" + t.text + "'", t.line, t.column);
  };
  if (guard_src)
    loop.guard = parse_bool(guard_src->text, guard_src->line, guard_src->col, false, check);
  for (const auto &[name, src] : update_src) {
    if (!declared.count(name))
      throw ParseError("assignment to undeclared variable '" + name + "'", src.line, 1);
    Var v(name);
    if (updates.count(v))
      throw ParseError("variable '" + name + "' updated twice", src.line, 1);
    updates.emplace(v, parse_poly(src.text, src.line, src.col, check));
  }
  for (Var v : loop.vars) {
    auto it = updates.find(v);
    loop.update.push_back(it == updates.end() ? Polynomial(v) : it->second);
  }
  return loop;
}

Loop load_loop(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_loop(buf.str());
}

} // namespace twn
