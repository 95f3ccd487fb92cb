#pragma once

#include <fpvc/core/expr.hpp>

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace fpvc {

enum class Rel : unsigned char { LE, LT, GE, GT, EQ };

inline const char* rel_name(Rel r) {
  switch (r) {
    case Rel::LE: return "<=";
    case Rel::LT: return "<";
    case Rel::GE: return ">=";
    case Rel::GT: return ">";
    case Rel::EQ: return "=";
  }
  return "?";
}

enum class FKind : unsigned char { True, False, Atom, Not, And, Or, Implies };

/// Immutable propositional structure over comparison atoms. And/Or are n-ary.
class Formula {
 public:
  struct Node {
    FKind kind = FKind::True;
    Rel rel = Rel::LE;
    Expr lhs, rhs;  // Atom
    std::vector<Formula> args;
    std::size_t hash = 0;
    std::size_t size = 1;
  };

  Formula() : Formula(truth(true)) {}

  static Formula truth(bool v) {
    Node n;
    n.kind = v ? FKind::True : FKind::False;
    return finish(std::move(n));
  }
  static Formula atom(Rel rel, Expr lhs, Expr rhs) {
    Node n;
    n.kind = FKind::Atom;
    n.rel = rel;
    n.lhs = std::move(lhs);
    n.rhs = std::move(rhs);
    return finish(std::move(n));
  }
  static Formula le(Expr a, Expr b) { return atom(Rel::LE, std::move(a), std::move(b)); }
  static Formula lt(Expr a, Expr b) { return atom(Rel::LT, std::move(a), std::move(b)); }
  static Formula ge(Expr a, Expr b) { return atom(Rel::GE, std::move(a), std::move(b)); }
  static Formula gt(Expr a, Expr b) { return atom(Rel::GT, std::move(a), std::move(b)); }
  static Formula eq(Expr a, Expr b) { return atom(Rel::EQ, std::move(a), std::move(b)); }
  static Formula negate(Formula f) {
    Node n;
    n.kind = FKind::Not;
    n.args = {std::move(f)};
    return finish(std::move(n));
  }
  static Formula conj(std::vector<Formula> fs) {
    Node n;
    n.kind = FKind::And;
    n.args = std::move(fs);
    return finish(std::move(n));
  }
  static Formula disj(std::vector<Formula> fs) {
    Node n;
    n.kind = FKind::Or;
    n.args = std::move(fs);
    return finish(std::move(n));
  }
  static Formula implies(Formula a, Formula b) {
    Node n;
    n.kind = FKind::Implies;
    n.args = {std::move(a), std::move(b)};
    return finish(std::move(n));
  }

  Formula with_args(std::vector<Formula> args) const {
    Node n = *node_;
    n.args = std::move(args);
    return finish(std::move(n));
  }
  Formula with_sides(Expr lhs, Expr rhs) const { return atom(rel(), std::move(lhs), std::move(rhs)); }

  FKind kind() const { return node_->kind; }
  Rel rel() const { return node_->rel; }
  const Expr& lhs() const { return node_->lhs; }
  const Expr& rhs() const { return node_->rhs; }
  const std::vector<Formula>& args() const { return node_->args; }
  const Formula& arg(std::size_t i = 0) const { return node_->args.at(i); }
  std::size_t hash() const { return node_->hash; }
  std::size_t size() const { return node_->size; }
  const Node* node() const { return node_.get(); }

  bool is_true() const { return kind() == FKind::True; }
  bool is_false() const { return kind() == FKind::False; }
  bool is_atom() const { return kind() == FKind::Atom; }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.kind() != b.kind() || a.size() != b.size()) return false;
    if (a.kind() == FKind::Atom) return a.rel() == b.rel() && a.lhs() == b.lhs() && a.rhs() == b.rhs();
    if (a.args().size() != b.args().size()) return false;
    for (std::size_t i = 0; i < a.args().size(); ++i)
      if (!(a.args()[i] == b.args()[i])) return false;
    return true;
  }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Formula finish(Node n) {
    std::size_t h = (static_cast<std::size_t>(n.kind) + 1) * 0x9e3779b97f4a7c15ULL;
    auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    n.size = 1;
    if (n.kind == FKind::Atom) {
      mix(static_cast<std::size_t>(n.rel));
      mix(n.lhs.hash());
      mix(n.rhs.hash());
      n.size += n.lhs.size() + n.rhs.size();
    }
    for (const Formula& c : n.args) {
      mix(c.hash());
      n.size += c.size();
    }
    n.hash = h;
    return Formula(std::make_shared<const Node>(std::move(n)));
  }

  std::shared_ptr<const Node> node_;
};

inline void collect_free_vars(const Formula& f, std::set<std::string>& out) {
  if (f.is_atom()) {
    collect_free_vars(f.lhs(), out);
    collect_free_vars(f.rhs(), out);
    return;
  }
  for (const Formula& c : f.args()) collect_free_vars(c, out);
}

inline std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> s;
  collect_free_vars(f, s);
  return s;
}

inline bool mentions(const Formula& f, const std::string& name) {
  if (f.is_atom()) return mentions(f.lhs(), name) || mentions(f.rhs(), name);
  for (const Formula& c : f.args())
    if (mentions(c, name)) return true;
  return false;
}

/// Applies g to both sides of every atom.
inline Formula map_exprs(const Formula& f, const std::function<Expr(const Expr&)>& g) {
  if (f.is_atom()) {
    Expr l = g(f.lhs());
    Expr r = g(f.rhs());
    if (l.node() == f.lhs().node() && r.node() == f.rhs().node()) return f;
    return f.with_sides(std::move(l), std::move(r));
  }
  if (f.args().empty()) return f;
  std::vector<Formula> args;
  args.reserve(f.args().size());
  bool changed = false;
  for (const Formula& c : f.args()) {
    args.push_back(map_exprs(c, g));
    changed = changed || args.back().node() != c.node();
  }
  return changed ? f.with_args(std::move(args)) : f;
}

/// Bottom-up rewrite over formula nodes.
inline Formula transform(const Formula& f, const std::function<Formula(const Formula&)>& g) {
  if (f.args().empty()) return g(f);
  std::vector<Formula> args;
  args.reserve(f.args().size());
  bool changed = false;
  for (const Formula& c : f.args()) {
    args.push_back(transform(c, g));
    changed = changed || args.back().node() != c.node();
  }
  return g(changed ? f.with_args(std::move(args)) : f);
}

inline Formula substitute(const Formula& f, const std::string& name, const Expr& replacement) {
  return map_exprs(f, [&](const Expr& e) { return substitute(e, name, replacement); });
}

inline bool has_round_fp(const Formula& f) {
  if (f.is_atom()) return f.lhs().has_round_fp() || f.rhs().has_round_fp();
  for (const Formula& c : f.args())
    if (has_round_fp(c)) return true;
  return false;
}

inline bool contains_op(const Formula& f, Op op) {
  if (f.is_atom()) return contains_op(f.lhs(), op) || contains_op(f.rhs(), op);
  for (const Formula& c : f.args())
    if (contains_op(c, op)) return true;
  return false;
}

/// Splits nested top-level conjunctions into a flat list.
inline void flatten_conjuncts(const Formula& f, std::vector<Formula>& out) {
  if (f.kind() == FKind::And) {
    for (const Formula& c : f.args()) flatten_conjuncts(c, out);
    return;
  }
  out.push_back(f);
}

inline void print_sexpr(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case FKind::True: out += "true"; return;
    case FKind::False: out += "false"; return;
    case FKind::Atom:
      out += "(";
      out += rel_name(f.rel());
      out += " ";
      print_sexpr(f.lhs(), out);
      out += " ";
      print_sexpr(f.rhs(), out);
      out += ")";
      return;
    case FKind::Not: out += "(not "; break;
    case FKind::And: out += "(and"; break;
    case FKind::Or: out += "(or"; break;
    case FKind::Implies: out += "(=> "; break;
  }
  bool first = true;
  for (const Formula& c : f.args()) {
    if (!first || f.kind() == FKind::And || f.kind() == FKind::Or) out += " ";
    first = false;
    print_sexpr(c, out);
  }
  out += ")";
}

inline std::string to_sexpr(const Formula& f) {
  std::string s;
  print_sexpr(f, s);
  return s;
}

}  // namespace fpvc
