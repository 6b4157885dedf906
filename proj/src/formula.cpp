#include "twn/formula.hpp"

#include "twn/error.hpp"

namespace twn {

const char *rel_symbol(Rel r)
{
  switch (r) {
  case Rel::GreaterEq:
    return ">=";
  case Rel::Greater:
    return ">";
  case Rel::Equal:
    return "==";
  }
  return "?";
}

bool Atom::holds(const std::map<Var, Rational> &point) const
{
  Rational v = poly.evaluate(point);
  switch (rel) {
  case Rel::GreaterEq:
    return v >= 0;
  case Rel::Greater:
    return v > 0;
  case Rel::Equal:
    return v == 0;
  }
  return false;
}

Formula::Formula(Atom atom) : kind_(Kind::Leaf), atom_(std::make_shared<const Atom>(std::move(atom))) {}

Formula Formula::conj(std::vector<Formula> children)
{
  if (children.empty())
    throw Error("conjunction without children");
  if (children.size() == 1)
    return std::move(children.front());
  Formula f(Kind::And);
  f.children_ = std::move(children);
  return f;
}

Formula Formula::disj(std::vector<Formula> children)
{
  if (children.empty())
    throw Error("disjunction without children");
  if (children.size() == 1)
    return std::move(children.front());
  Formula f(Kind::Or);
  f.children_ = std::move(children);
  return f;
}

Formula Formula::constant(bool value)
{
  Formula f(Kind::Const);
  f.value_ = value;
  return f;
}

bool Formula::holds(const std::map<Var, Rational> &point) const
{
  switch (kind_) {
  case Kind::Leaf:
    return atom_->holds(point);
  case Kind::And:
    for (const auto &c : children_)
      if (!c.holds(point))
        return false;
    return true;
  case Kind::Or:
    for (const auto &c : children_)
      if (c.holds(point))
        return true;
    return false;
  case Kind::Const:
    return value_;
  }
  return false;
}

std::set<Var> Formula::vars() const
{
  std::set<Var> out;
  for (const auto &a : atoms()) {
    auto vs = a.poly.vars();
    out.insert(vs.begin(), vs.end());
  }
  return out;
}

std::vector<Atom> Formula::atoms() const
{
  std::vector<Atom> out;
  std::function<void(const Formula &)> walk = [&](const Formula &f) {
    if (f.kind_ == Kind::Leaf)
      out.push_back(*f.atom_);
    for (const auto &c : f.children_)
      walk(c);
  };
  walk(*this);
  return out;
}

std::size_t Formula::atom_count() const
{
  if (kind_ == Kind::Leaf)
    return 1;
  std::size_t n = 0;
  for (const auto &c : children_)
    n += c.atom_count();
  return n;
}

Formula Formula::map(const std::function<Formula(const Atom &)> &f) const
{
  switch (kind_) {
  case Kind::Leaf:
    return f(*atom_);
  case Kind::Const:
    return *this;
  case Kind::And:
  case Kind::Or: {
    Formula r(kind_);
    r.children_.reserve(children_.size());
    for (const auto &c : children_)
      r.children_.push_back(c.map(f));
    return r;
  }
  }
  return *this;
}

Formula Formula::substitute(const PolyMap &bindings) const
{
  return map([&](const Atom &a) { return Formula(Atom{a.poly.substitute(bindings), a.rel}); });
}

std::string Formula::to_string(const VarOrder &order) const
{
  switch (kind_) {
  case Kind::Leaf:
    return atom_->poly.to_string(order) + " " + rel_symbol(atom_->rel) + " 0";
  case Kind::Const:
    return value_ ? "0 >= 0" : "0 > 0";
  case Kind::And:
  case Kind::Or: {
    std::string out = "(";
    for (std::size_t i = 0; i < children_.size(); ++i) {
      if (i > 0)
        out += kind_ == Kind::And ? " && " : " || ";
      out += children_[i].to_string(order);
    }
    return out + ")";
  }
  }
  return "";
}

bool operator==(const Formula &a, const Formula &b)
{
  if (a.kind_ != b.kind_)
    return false;
  switch (a.kind_) {
  case Formula::Kind::Leaf:
    return *a.atom_ == *b.atom_;
  case Formula::Kind::Const:
    return a.value_ == b.value_;
  default:
    return a.children_ == b.children_;
  }
}

Formula guard_map(const std::function<Formula(const Atom &)> &f, const Formula &phi)
{
  return phi.map(f);
}

Formula operator&&(const Formula &a, const Formula &b)
{
  std::vector<Formula> cs;
  auto add = [&](const Formula &f) {
    if (f.kind() == Formula::Kind::Const && f.const_value())
      return;
    if (f.kind() == Formula::Kind::And)
      cs.insert(cs.end(), f.children().begin(), f.children().end());
    else
      cs.push_back(f);
  };
  add(a);
  add(b);
  if (cs.empty())
    return Formula::top();
  return Formula::conj(std::move(cs));
}

} // namespace twn
