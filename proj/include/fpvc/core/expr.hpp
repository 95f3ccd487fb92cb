#pragma once

#include <fpvc/core/float_format.hpp>
#include <fpvc/core/scalar.hpp>

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fpvc {

enum class Op : unsigned char {
  Var,
  Lit,
  Pi,
  // unary
  Neg,
  Abs,
  Sqrt,
  Sin,
  Cos,
  Exp,
  Log,
  // binary
  Add,
  Sub,
  Mul,
  Div,
  Min,
  Max,
  Mod,
  // special
  Pow,         // integer literal exponent
  RoundFP,     // rounding point: argument is the exact value
  RoundToInt,  // nearest integer with a tie mode
};

inline bool is_unary(Op op) { return op >= Op::Neg && op <= Op::Log; }
inline bool is_binary(Op op) { return op >= Op::Add && op <= Op::Mod; }

inline const char* op_name(Op op) {
  switch (op) {
    case Op::Var: return "var";
    case Op::Lit: return "lit";
    case Op::Pi: return "pi";
    case Op::Neg: return "-";
    case Op::Abs: return "abs";
    case Op::Sqrt: return "sqrt";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Min: return "min";
    case Op::Max: return "max";
    case Op::Mod: return "mod";
    case Op::Pow: return "^";
    case Op::RoundFP: return "rnd";
    case Op::RoundToInt: return "round_int";
  }
  return "?";
}

/// Immutable expression tree with shared structure. Copies are cheap; all
/// nodes are safe to share between threads.
class Expr {
 public:
  struct Node {
    Op op = Op::Lit;
    std::string name;                   // Var
    std::optional<Scalar> value;        // Lit
    std::optional<FloatKind> lit_type;  // Lit decoded from an FP bit pattern
    FloatKind format = FloatKind::Single;
    RoundMode mode = RoundMode::NearestEven;
    unsigned exponent = 0;  // Pow
    std::vector<Expr> args;
    std::size_t hash = 0;
    std::size_t size = 1;
    bool has_round_fp = false;
  };

  Expr() : Expr(lit(Scalar(0))) {}

  static Expr var(std::string name) {
    Node n;
    n.op = Op::Var;
    n.name = std::move(name);
    return finish(std::move(n));
  }
  static Expr lit(Scalar v, std::optional<FloatKind> type = std::nullopt) {
    Node n;
    n.op = Op::Lit;
    n.value = std::move(v);
    n.lit_type = type;
    return finish(std::move(n));
  }
  static Expr lit(long v) { return lit(Scalar(v)); }
  static Expr pi() {
    Node n;
    n.op = Op::Pi;
    return finish(std::move(n));
  }
  static Expr unary(Op op, Expr a) {
    if (!is_unary(op)) throw std::invalid_argument("Expr::unary: not a unary operator");
    Node n;
    n.op = op;
    n.args = {std::move(a)};
    return finish(std::move(n));
  }
  static Expr binary(Op op, Expr a, Expr b) {
    if (!is_binary(op)) throw std::invalid_argument("Expr::binary: not a binary operator");
    Node n;
    n.op = op;
    n.args = {std::move(a), std::move(b)};
    return finish(std::move(n));
  }
  static Expr pow(Expr a, unsigned exponent) {
    Node n;
    n.op = Op::Pow;
    n.exponent = exponent;
    n.args = {std::move(a)};
    return finish(std::move(n));
  }
  static Expr round_fp(FloatKind format, RoundMode mode, Expr a) {
    Node n;
    n.op = Op::RoundFP;
    n.format = format;
    n.mode = mode;
    n.args = {std::move(a)};
    return finish(std::move(n));
  }
  static Expr round_to_int(RoundMode mode, Expr a) {
    Node n;
    n.op = Op::RoundToInt;
    n.mode = mode;
    n.args = {std::move(a)};
    return finish(std::move(n));
  }

  /// Same node kind and payload with new children.
  Expr with_args(std::vector<Expr> args) const {
    Node n = *node_;
    n.args = std::move(args);
    return finish(std::move(n));
  }

  Op op() const { return node_->op; }
  const std::string& name() const { return node_->name; }
  const Scalar& value() const { return *node_->value; }
  std::optional<FloatKind> lit_type() const { return node_->lit_type; }
  FloatKind format() const { return node_->format; }
  RoundMode mode() const { return node_->mode; }
  unsigned exponent() const { return node_->exponent; }
  const std::vector<Expr>& args() const { return node_->args; }
  const Expr& arg(std::size_t i = 0) const { return node_->args.at(i); }
  std::size_t hash() const { return node_->hash; }
  std::size_t size() const { return node_->size; }
  bool has_round_fp() const { return node_->has_round_fp; }
  const Node* node() const { return node_.get(); }

  bool is_lit() const { return op() == Op::Lit; }
  bool is_lit(long v) const { return op() == Op::Lit && value() == v; }
  bool is_var() const { return op() == Op::Var; }

  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.op() != b.op() || a.size() != b.size()) return false;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    if (x.name != y.name || x.value != y.value || x.format != y.format || x.mode != y.mode || x.exponent != y.exponent)
      return false;
    for (std::size_t i = 0; i < x.args.size(); ++i)
      if (!(x.args[i] == y.args[i])) return false;
    return true;
  }
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

  static Expr finish(Node n) {
    std::size_t h = static_cast<std::size_t>(n.op) * 0x100000001b3ULL;
    n.size = 1;
    n.has_round_fp = n.op == Op::RoundFP;
    switch (n.op) {
      case Op::Var: h = mix(h, std::hash<std::string>{}(n.name)); break;
      case Op::Lit:
        h = mix(h, std::hash<std::string>{}(n.value->get_num().get_str(16)));
        h = mix(h, std::hash<std::string>{}(n.value->get_den().get_str(16)));
        break;
      case Op::RoundFP: h = mix(h, static_cast<std::size_t>(n.format) * 7 + static_cast<std::size_t>(n.mode)); break;
      case Op::RoundToInt: h = mix(h, static_cast<std::size_t>(n.mode)); break;
      case Op::Pow: h = mix(h, n.exponent); break;
      default: break;
    }
    for (const Expr& c : n.args) {
      h = mix(h, c.hash());
      n.size += c.size();
      n.has_round_fp = n.has_round_fp || c.has_round_fp();
    }
    n.hash = h;
    return Expr(std::make_shared<const Node>(std::move(n)));
  }

  std::shared_ptr<const Node> node_;
};

struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

// Convenience builders used throughout the code base and the tests.
inline Expr operator+(Expr a, Expr b) { return Expr::binary(Op::Add, std::move(a), std::move(b)); }
inline Expr operator-(Expr a, Expr b) { return Expr::binary(Op::Sub, std::move(a), std::move(b)); }
inline Expr operator*(Expr a, Expr b) { return Expr::binary(Op::Mul, std::move(a), std::move(b)); }
inline Expr operator/(Expr a, Expr b) { return Expr::binary(Op::Div, std::move(a), std::move(b)); }
inline Expr operator-(Expr a) { return Expr::unary(Op::Neg, std::move(a)); }

inline void collect_free_vars(const Expr& e, std::set<std::string>& out) {
  if (e.op() == Op::Var) {
    out.insert(e.name());
    return;
  }
  for (const Expr& c : e.args()) collect_free_vars(c, out);
}

inline std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> s;
  collect_free_vars(e, s);
  return s;
}

inline bool mentions(const Expr& e, const std::string& name) {
  if (e.op() == Op::Var) return e.name() == name;
  for (const Expr& c : e.args())
    if (mentions(c, name)) return true;
  return false;
}

inline bool contains_op(const Expr& e, Op op) {
  if (e.op() == op) return true;
  for (const Expr& c : e.args())
    if (contains_op(c, op)) return true;
  return false;
}

/// Bottom-up rewrite; f receives a node whose children are already rewritten.
inline Expr transform(const Expr& e, const std::function<Expr(const Expr&)>& f) {
  if (e.args().empty()) return f(e);
  std::vector<Expr> args;
  args.reserve(e.args().size());
  bool changed = false;
  for (const Expr& c : e.args()) {
    args.push_back(transform(c, f));
    changed = changed || args.back().node() != c.node();
  }
  return f(changed ? e.with_args(std::move(args)) : e);
}

inline Expr substitute(const Expr& e, const std::string& name, const Expr& replacement) {
  return transform(e, [&](const Expr& n) { return n.op() == Op::Var && n.name() == name ? replacement : n; });
}

/// The same tree with every rounding point replaced by its exact argument.
inline Expr strip_rounding(const Expr& e) {
  if (!e.has_round_fp()) return e;
  return transform(e, [](const Expr& n) { return n.op() == Op::RoundFP ? n.arg() : n; });
}

// --- canonical s-expression printing ----------------------------------------

inline std::string literal_sexpr(const Scalar& v) {
  Scalar a = abs_of(v);
  std::string s = is_integer(a) ? a.get_num().get_str() : "(/ " + a.get_num().get_str() + " " + a.get_den().get_str() + ")";
  return v < 0 ? "(- " + s + ")" : s;
}

inline void print_sexpr(const Expr& e, std::string& out) {
  switch (e.op()) {
    case Op::Var: out += e.name(); return;
    case Op::Lit: out += literal_sexpr(e.value()); return;
    case Op::Pi: out += "pi"; return;
    case Op::Pow:
      out += "(^ ";
      print_sexpr(e.arg(), out);
      out += " " + std::to_string(e.exponent()) + ")";
      return;
    case Op::RoundFP:
      out += e.format() == FloatKind::Single ? "(rnd32 " : "(rnd64 ";
      out += smt_token(e.mode());
      out += " ";
      print_sexpr(e.arg(), out);
      out += ")";
      return;
    case Op::RoundToInt:
      out += "(round_int ";
      out += smt_token(e.mode());
      out += " ";
      print_sexpr(e.arg(), out);
      out += ")";
      return;
    default: break;
  }
  out += "(";
  out += op_name(e.op());
  for (const Expr& c : e.args()) {
    out += " ";
    print_sexpr(c, out);
  }
  out += ")";
}

inline std::string to_sexpr(const Expr& e) {
  std::string s;
  print_sexpr(e, s);
  return s;
}

}  // namespace fpvc
