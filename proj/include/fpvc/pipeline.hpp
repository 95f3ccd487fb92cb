#pragma once

// The full processing chain for one input file:
// parse -> simplify/bounds -> error bounds -> eliminate -> simplify/bounds -> prove.

#include <fpvc/backends/answers.hpp>
#include <fpvc/backends/dreal.hpp>
#include <fpvc/backends/tptp.hpp>
#include <fpvc/fp/eliminate.hpp>
#include <fpvc/frontend/corpus.hpp>
#include <fpvc/interval/bounds.hpp>
#include <fpvc/prover/prover.hpp>

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fpvc {

struct PipelineConfig {
  EvalOptions eval;
  ProveConfig prove;
  DRealOptions dreal;
  std::map<std::string, Scalar> injected;  // context id -> external bound
  unsigned bound_rounds = kMaxBoundRounds;
};

/// A failure attributed to one stage. Input errors are those of the parse stage.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what) : Error(stage + ": " + what), stage(std::move(stage)) {}
  std::string stage;
};

struct StageTiming {
  std::string name;
  double seconds = 0;
};

struct PipelineResult {
  std::string input;
  ParseReport report;
  ProcessedNVC parsed;
  ProcessedNVC processed;  // simplified and bounded, still with rounding points
  ProcessedNVC exact;      // rounding points eliminated, re-simplified
  std::vector<FPContext> contexts;
  std::vector<std::pair<std::string, std::string>> bound_failures;
  std::vector<std::string> unknown_injections;
  std::vector<StageTiming> stages;
  std::vector<std::string> warnings;
  bool eliminated = false;
  std::optional<Verdict> verdict;
  bool actual = false;  // counterexample also satisfies the NVC with exact float rounding
};

namespace detail {

template <class F>
auto timed(PipelineResult& r, const std::string& stage, F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  auto done = [&] {
    r.stages.push_back({stage, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
  };
  try {
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      done();
    } else {
      auto v = f();
      done();
      return v;
    }
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    done();
    throw StageError(stage, e.what());
  }
}

// An empty box means the bound constraints alone are contradictory.
inline ProcessedNVC bound_or_refute(ProcessedNVC nvc, const PipelineConfig& cfg, std::vector<std::string>& warnings) {
  try {
    return simplify_and_bound(nvc, cfg.eval, cfg.bound_rounds);
  } catch (const EmptyBox& e) {
    warnings.push_back(std::string(e.what()) + "; the NVC is unsatisfiable");
    nvc.assertions = {Formula::truth(false)};
    return nvc;
  }
}

}  // namespace detail

/// Everything up to and including FP elimination. Contexts without any bound
/// leave `eliminated` false (the cause is in bound_failures).
inline PipelineResult run_process(const std::string& path, const PipelineConfig& cfg) {
  PipelineResult r;
  r.input = path;
  detail::timed(r, "parse", [&] {
    auto [nvc, report] = load_nvc(path);
    r.parsed = std::move(nvc);
    r.report = std::move(report);
  });
  for (const std::string& w : r.report.warnings) r.warnings.push_back(w);
  r.processed = detail::timed(r, "simplify", [&] { return detail::bound_or_refute(r.parsed, cfg, r.warnings); });
  detail::timed(r, "error-bounds", [&] {
    r.contexts = collect_fp_contexts(r.processed);
    for (const auto& [id, v] : cfg.injected)
      if (!inject_bound(r.contexts, id, v, "injected")) r.unknown_injections.push_back(id);
    r.bound_failures = assign_internal_bounds(r.contexts, r.processed.box(), cfg.eval);
  });
  for (const std::string& id : r.unknown_injections) r.warnings.push_back("no context with id " + id);
  if (!r.bound_failures.empty()) return r;
  ProcessedNVC elim = detail::timed(r, "eliminate-fp", [&] { return eliminate_fp(r.processed, r.contexts); });
  r.exact = detail::timed(r, "resimplify", [&] { return detail::bound_or_refute(elim, cfg, r.warnings); });
  r.eliminated = true;
  return r;
}

/// Checks a counterexample of the exact NVC against the original one, with
/// every rounding point rounded exactly.
inline bool is_actual_counterexample(const ProcessedNVC& original, const Point& p, unsigned prec = 512) {
  EvalOptions o;
  o.prec = prec;
  o.exact_rounding = true;
  return certify_point(original.assertions, p, o) == Truth::CertainlyTrue;
}

inline PipelineResult run_prove(const std::string& path, const PipelineConfig& cfg) {
  PipelineResult r = run_process(path, cfg);
  if (!r.eliminated) {
    Verdict v;
    v.kind = VerdictKind::GaveUp;
    v.reason = "no error bound for context " + r.bound_failures.front().first + " (" + r.bound_failures.front().second + ")";
    r.verdict = v;
    return r;
  }
  r.verdict = detail::timed(r, "prove", [&] { return decide(r.exact, cfg.prove); });
  if (r.verdict->kind == VerdictKind::CounterExample && r.verdict->certified) {
    Point p = r.verdict->point;
    // variables removed by substitution get no value; the original NVC has none left
    r.actual = detail::timed(r, "check-actual", [&] { return is_actual_counterexample(r.processed, p); });
  }
  return r;
}

inline int exit_code(const Verdict& v) {
  switch (v.kind) {
    case VerdictKind::Proved: return 0;
    case VerdictKind::CounterExample: return 10;
    case VerdictKind::GaveUp: return 20;
  }
  return 20;
}

}  // namespace fpvc
