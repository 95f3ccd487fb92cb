#pragma once

#include <fpvc/core/nvc.hpp>

#include <optional>
#include <string>
#include <vector>

namespace fpvc {

enum class BoundSource : unsigned char { Internal, External };

/// A maximal atom side containing rounding points, with its error cushion.
struct FPContext {
  std::string id;
  Expr expr;   // with rounding points
  Expr exact;  // rounding points stripped
  std::optional<Scalar> bound;
  BoundSource source = BoundSource::Internal;
  std::string tool;  // External only
  std::string raw;   // External only: the text the bound was read from
};

inline std::string context_id(const Expr& e) { return hex64(fnv1a64(to_sexpr(e))); }

inline FPContext make_context(const Expr& e) {
  FPContext c;
  c.id = context_id(e);
  c.expr = e;
  c.exact = strip_rounding(e);
  return c;
}

namespace detail {

inline void collect_contexts(const Formula& f, std::vector<FPContext>& out) {
  if (f.is_atom()) {
    for (const Expr* side : {&f.lhs(), &f.rhs()}) {
      if (!side->has_round_fp()) continue;
      bool seen = false;
      for (const FPContext& c : out) seen = seen || c.expr == *side;
      if (!seen) out.push_back(make_context(*side));
    }
    return;
  }
  for (const Formula& c : f.args()) collect_contexts(c, out);
}

}  // namespace detail

/// Every atom side containing a rounding point, deduplicated, in order of appearance.
inline std::vector<FPContext> collect_fp_contexts(const ProcessedNVC& nvc) {
  std::vector<FPContext> out;
  for (const Formula& f : nvc.assertions) detail::collect_contexts(f, out);
  return out;
}

}  // namespace fpvc
