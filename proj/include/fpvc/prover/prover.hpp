#pragma once

// Branch-and-prune over the variable box. The NVC (conjunction of its
// assertions) is refuted piecewise; a point where every assertion is
// certainly true is a counterexample.

#include <fpvc/core/eval.hpp>
#include <fpvc/core/nvc.hpp>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <map>
#include <mutex>
#include <queue>
#include <thread>
#include <vector>

namespace fpvc {

struct ProveConfig {
  unsigned prec = 113;
  unsigned max_depth = 200;
  Scalar min_width = pow2(-100);
  double timeout_seconds = 60;
  unsigned jobs = 1;
  FormatTable formats;
};

enum class VerdictKind : unsigned char { Proved, CounterExample, GaveUp };

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Proved: return "Proved";
    case VerdictKind::CounterExample: return "CounterExample";
    case VerdictKind::GaveUp: return "GaveUp";
  }
  return "?";
}

using Point = std::map<std::string, Scalar>;

struct ProverStats {
  std::size_t boxes = 0;
  std::size_t refuted = 0;
  std::size_t undecided = 0;  // too small or too deep to split
  unsigned max_depth = 0;
  double seconds = 0;
};

struct Verdict {
  VerdictKind kind = VerdictKind::GaveUp;
  Point point;             // CounterExample: certified; GaveUp: best candidate, if any
  bool certified = false;  // point satisfies the NVC under interval evaluation
  std::string reason;      // GaveUp only
  ProverStats stats;
};

/// Evaluates the NVC at a point, retrying with 2x and 4x the precision while
/// the answer is Unknown.
inline Truth certify_point(const std::vector<Formula>& assertions, const Point& p, const EvalOptions& base) {
  Box box;
  for (const auto& [n, v] : p) box.emplace(n, Interval::point(v));
  Truth t = Truth::Unknown;
  for (unsigned k : {1u, 2u, 4u}) {
    EvalOptions o = base;
    o.prec = base.prec * k;
    t = eval_conjunction(assertions, box, o);
    if (t != Truth::Unknown) return t;
  }
  return t;
}

namespace detail {

struct WorkBox {
  Box box;
  unsigned depth = 0;
  Scalar priority;  // scaled width of the widest splittable variable
};

struct ByPriority {
  bool operator()(const WorkBox& a, const WorkBox& b) const { return a.priority < b.priority; }
};

class BranchAndPrune {
 public:
  BranchAndPrune(const ProcessedNVC& nvc, const Box& box, const ProveConfig& cfg) : nvc_(nvc), box_(box), cfg_(cfg) {
    opts_.prec = cfg.prec;
    opts_.formats = cfg.formats;
    used_ = nvc.used_vars();
    for (const VarSpec& v : nvc.vars) {
      is_int_[v.name] = v.sort.is_int();
      auto it = box.find(v.name);
      auto w = it == box.end() ? std::optional<Scalar>() : it->second.width();
      scale_[v.name] = (w && *w > 0) ? *w : Scalar(1);
    }
  }

  Verdict run() {
    start_ = std::chrono::steady_clock::now();
    WorkBox root{box_, 0, Scalar(0)};
    root.priority = priority(root.box);
    queue_.push(std::move(root));
    unsigned jobs = std::max(1u, cfg_.jobs);
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> ts;
      for (unsigned i = 0; i < jobs; ++i) ts.emplace_back([this] { worker(); });
      for (auto& t : ts) t.join();
    }
    Verdict v;
    v.stats = stats_;
    v.stats.seconds = elapsed();
    if (found_) {
      v.kind = VerdictKind::CounterExample;
      v.point = ce_;
      v.certified = true;
      return v;
    }
    if (timed_out_ || stats_.undecided > 0 || !unsplittable_reason_.empty()) {
      v.kind = VerdictKind::GaveUp;
      // live boxes are candidates too
      for (std::size_t k = 0; k < 256 && !queue_.empty(); ++k) {
        Point p = midpoint(queue_.top().box);
        queue_.pop();
        offer(p, slack(p));
      }
      v.reason = timed_out_ ? "timeout" : !unsplittable_reason_.empty() ? unsplittable_reason_ : "box too small to split";
      if (have_best_) v.point = best_;
      return v;
    }
    v.kind = VerdictKind::Proved;
    return v;
  }

 private:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  Scalar priority(const Box& b) const {
    Scalar best(-1);
    for (const std::string& n : used_) {
      const Interval& iv = b.at(n);
      auto w = iv.width();
      if (!w) return Scalar(1000000000);  // unbounded first
      Scalar s = *w / scale_.at(n);
      if (s > best) best = s;
    }
    return best;
  }

  Point midpoint(const Box& b) const {
    Point p;
    for (const auto& [n, iv] : b) {
      Scalar m = iv.midpoint();
      if (is_int_.at(n)) {
        m = Scalar(floor_of(m));
        if (iv.lo() && m < *iv.lo()) m = *iv.lo();
      }
      p[n] = m;
    }
    return p;
  }

  // Splits the widest used variable. Returns false when none can be split.
  bool split(const WorkBox& w, std::vector<WorkBox>& out, std::string& why) const {
    const std::string* pick = nullptr;
    Scalar best(-1);
    for (const std::string& n : used_) {
      const Interval& iv = w.box.at(n);
      if (!iv.bounded()) {
        why = "UnboundedBox: " + n;
        return false;
      }
      Scalar width = *iv.width();
      bool can = is_int_.at(n) ? width >= 1 : width >= cfg_.min_width && width > 0;
      if (!can) continue;
      Scalar s = width / scale_.at(n);
      if (s > best) {
        best = s;
        pick = &n;
      }
    }
    if (!pick) {
      why = "box too small to split";
      return false;
    }
    const Interval& iv = w.box.at(*pick);
    Scalar mid = iv.midpoint();
    Interval left, right;
    if (is_int_.at(*pick)) {
      Scalar m(floor_of(mid));
      left = Interval::closed(*iv.lo(), m);
      right = Interval::closed(m + 1, *iv.hi());
    } else {
      left = Interval::closed(*iv.lo(), mid);
      right = Interval::closed(mid, *iv.hi());
    }
    for (const Interval& part : {left, right}) {
      WorkBox c{w.box, w.depth + 1, Scalar(0)};
      c.box[*pick] = part;
      c.priority = priority(c.box);
      out.push_back(std::move(c));
    }
    return true;
  }

  void offer(const Point& p, const Scalar& score) {
    if (!have_best_ || score < best_score_) {
      have_best_ = true;
      best_score_ = score;
      best_ = p;
    }
  }

  // total amount by which the assertions miss being true at p
  Scalar slack(const Point& p) const {
    Box pb;
    for (const auto& [n, v] : p) pb.emplace(n, Interval::point(v));
    Evaluator ev(pb, opts_);
    Scalar total(0);
    for (const Formula& f : nvc_.assertions) total += violation(ev, f, true);
    return total;
  }

  static Scalar gap(const Interval& a, const Interval& b) {
    // distance from a to lie below b
    if (!a.lo() || !b.hi()) return pow2(64);
    return *a.lo() > *b.hi() ? Scalar(*a.lo() - *b.hi()) : Scalar(0);
  }

  static Scalar violation(Evaluator& ev, const Formula& f, bool want) {
    Truth t = ev.eval(f);
    if (t == Truth::Unknown || (t == Truth::CertainlyTrue) == want) return Scalar(0);
    switch (f.kind()) {
      case FKind::True:
      case FKind::False: return Scalar(1);
      case FKind::Not: return violation(ev, f.arg(), !want);
      case FKind::And:
      case FKind::Or: {
        bool sum = (f.kind() == FKind::And) == want;
        Scalar acc = sum ? Scalar(0) : pow2(64);
        for (const Formula& c : f.args()) {
          Scalar v = violation(ev, c, want);
          acc = sum ? Scalar(acc + v) : std::min(acc, v);
        }
        return acc;
      }
      case FKind::Implies: {
        if (want) return std::min(violation(ev, f.arg(0), false), violation(ev, f.arg(1), true));
        return violation(ev, f.arg(0), true) + violation(ev, f.arg(1), false);
      }
      case FKind::Atom: {
        Interval a = ev.eval(f.lhs()), b = ev.eval(f.rhs());
        Rel r = f.rel();
        if (r == Rel::GE || r == Rel::GT) std::swap(a, b);
        if (r == Rel::EQ) return want ? std::max(gap(a, b), gap(b, a)) : Scalar(1);
        return want ? gap(a, b) : gap(b, a);
      }
    }
    return Scalar(0);
  }

  void process(const WorkBox& w, std::vector<WorkBox>& children) {
    Truth t = eval_conjunction(nvc_.assertions, w.box, opts_);
    if (t == Truth::CertainlyFalse) {
      std::lock_guard lk(mu_);
      ++stats_.refuted;
      return;
    }
    Point mid = midpoint(w.box);
    Truth at_mid = t == Truth::CertainlyTrue ? t : certify_point(nvc_.assertions, mid, opts_);
    if (at_mid == Truth::CertainlyTrue) {
      std::lock_guard lk(mu_);
      if (!found_) {
        found_ = true;
        ce_ = mid;
      }
      return;
    }
    std::string why;
    if (w.depth >= cfg_.max_depth || !split(w, children, why)) {
      if (why.empty()) why = "maximum depth reached";
      Scalar score = slack(mid);
      std::lock_guard lk(mu_);
      ++stats_.undecided;
      if (why.rfind("UnboundedBox", 0) == 0) unsplittable_reason_ = why;
      offer(mid, score);
    }
  }

  void worker() {
    std::unique_lock lk(mu_);
    for (;;) {
      cv_.wait(lk, [&] { return !queue_.empty() || active_ == 0 || found_ || timed_out_; });
      if (found_ || timed_out_ || queue_.empty()) break;
      WorkBox w = queue_.top();
      queue_.pop();
      ++active_;
      ++stats_.boxes;
      stats_.max_depth = std::max(stats_.max_depth, w.depth);
      lk.unlock();
      std::vector<WorkBox> children;
      process(w, children);
      bool late = elapsed() > cfg_.timeout_seconds;
      lk.lock();
      --active_;
      for (auto& c : children) queue_.push(std::move(c));
      if (late && !found_ && !queue_.empty()) timed_out_ = true;
      cv_.notify_all();
    }
    cv_.notify_all();
  }

  const ProcessedNVC& nvc_;
  Box box_;
  const ProveConfig& cfg_;
  EvalOptions opts_;
  std::set<std::string> used_;
  std::map<std::string, bool> is_int_;
  std::map<std::string, Scalar> scale_;

  std::mutex mu_;
  std::condition_variable cv_;
  std::priority_queue<WorkBox, std::vector<WorkBox>, ByPriority> queue_;
  unsigned active_ = 0;
  bool found_ = false;
  bool timed_out_ = false;
  Point ce_;
  bool have_best_ = false;
  Scalar best_score_;
  Point best_;
  std::string unsplittable_reason_;
  ProverStats stats_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

/// Decides the real-valued NVC (no rounding points left) over its variable box.
inline Verdict decide(const ProcessedNVC& nvc, const Box& box, const ProveConfig& cfg = {}) {
  for (const Formula& f : nvc.assertions)
    if (has_round_fp(f)) throw Error("decide: rounding points must be eliminated first");
  for (const std::string& n : nvc.used_vars()) {
    auto it = box.find(n);
    if (it == box.end() || !it->second.bounded()) {
      Verdict v;
      v.kind = VerdictKind::GaveUp;
      v.reason = "UnboundedBox: " + n;
      return v;
    }
  }
  detail::BranchAndPrune bp(nvc, box, cfg);
  return bp.run();
}

inline Verdict decide(const ProcessedNVC& nvc, const ProveConfig& cfg = {}) { return decide(nvc, nvc.box(), cfg); }

}  // namespace fpvc
