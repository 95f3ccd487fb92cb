#pragma once

#include <fpvc/core/formula.hpp>
#include <fpvc/core/interval.hpp>

#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fpvc {

/// Base class of every error the library reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SortKind : unsigned char { Real, Int, Float };

struct Sort {
  SortKind kind = SortKind::Real;
  FloatKind format = FloatKind::Single;  // meaningful for Float only

  static Sort real() { return {SortKind::Real, FloatKind::Single}; }
  static Sort integer() { return {SortKind::Int, FloatKind::Single}; }
  static Sort floating(FloatKind k) { return {SortKind::Float, k}; }

  bool is_int() const { return kind == SortKind::Int; }
  bool is_float() const { return kind == SortKind::Float; }
  friend bool operator==(const Sort& a, const Sort& b) {
    return a.kind == b.kind && (a.kind != SortKind::Float || a.format == b.format);
  }

  std::string to_string() const {
    switch (kind) {
      case SortKind::Real: return "real";
      case SortKind::Int: return "int";
      case SortKind::Float: return format == FloatKind::Single ? "float32" : "float64";
    }
    return "real";
  }

  static std::optional<Sort> parse(std::string_view s) {
    if (s == "real" || s == "Real") return real();
    if (s == "int" || s == "Int" || s == "integer") return integer();
    if (s == "float32" || s == "Float32" || s == "single") return floating(FloatKind::Single);
    if (s == "float64" || s == "Float64" || s == "double") return floating(FloatKind::Double);
    return std::nullopt;
  }
};

struct VarSpec {
  std::string name;
  Sort sort;
  Interval bounds;
};

struct TraceRecord {
  std::string name;
  std::uint64_t before = 0;
  std::uint64_t after = 0;
};

inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

/// A negated verification condition at some pipeline stage: the conjunction
/// of all assertions, restricted to the variable bounds.
struct ProcessedNVC {
  std::vector<VarSpec> vars;
  std::vector<Formula> assertions;
  std::vector<std::pair<std::string, Expr>> definitions;  // variables eliminated by substitution
  std::vector<TraceRecord> trace;

  const VarSpec* find(std::string_view name) const {
    for (const VarSpec& v : vars)
      if (v.name == name) return &v;
    return nullptr;
  }
  VarSpec* find(std::string_view name) {
    for (VarSpec& v : vars)
      if (v.name == name) return &v;
    return nullptr;
  }

  Box box() const {
    Box b;
    for (const VarSpec& v : vars) b.emplace(v.name, v.bounds);
    return b;
  }

  void set_box(const Box& b) {
    for (VarSpec& v : vars) {
      auto it = b.find(v.name);
      if (it != b.end()) v.bounds = it->second;
    }
  }

  std::set<std::string> used_vars() const {
    std::set<std::string> s;
    for (const Formula& f : assertions) collect_free_vars(f, s);
    return s;
  }

  /// Stable content hash over declarations, bounds and assertions.
  std::uint64_t content_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const VarSpec& v : vars) {
      h = fnv1a64(v.name, h);
      h = fnv1a64(v.sort.to_string(), h);
      h = fnv1a64(v.bounds.lo() ? to_fraction_string(*v.bounds.lo()) : "-oo", h);
      h = fnv1a64(v.bounds.hi() ? to_fraction_string(*v.bounds.hi()) : "oo", h);
    }
    for (const Formula& f : assertions) {
      h = fnv1a64("|", h);
      h = fnv1a64(to_sexpr(f), h);
    }
    return h;
  }

  void record(std::string name, std::uint64_t before) { trace.push_back({std::move(name), before, content_hash()}); }
};

}  // namespace fpvc
