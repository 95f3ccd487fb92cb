// fpvc: prove / process / bounds for floating-point verification conditions.

#include <fpvc/pipeline.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace fpvc;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitWarning = 3;

struct Options {
  std::vector<std::string> files;
  unsigned prec = 113;
  double timeout = 60;
  unsigned max_depth = 200;
  unsigned jobs = 1;
  std::vector<std::string> inject;
  std::vector<std::string> emit;
  std::string report;
  std::string config;
  std::string out_dir;
  std::vector<std::string> run_external;
};

std::string trim(const std::string& s) { return detail::trim(s); }

Scalar scalar_or_throw(const std::string& key, const std::string& v) {
  auto q = parse_scalar(trim(v));
  if (!q) throw Error("bad number for " + key + ": " + v);
  return *q;
}

// key = value lines; '#' starts a comment
void apply_config_file(const std::string& path, PipelineConfig& cfg) {
  std::istringstream in(read_file(path));
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty() || line[0] == '[') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(path + ":" + std::to_string(n) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (val.size() >= 2 && val.front() == '"' && val.back() == '"') val = val.substr(1, val.size() - 2);
    auto as_uint = [&] { return static_cast<unsigned>(std::stoul(val)); };
    if (key == "prec") cfg.eval.prec = cfg.prove.prec = as_uint();
    else if (key == "timeout") cfg.prove.timeout_seconds = std::stod(val);
    else if (key == "max_depth") cfg.prove.max_depth = as_uint();
    else if (key == "jobs") cfg.prove.jobs = as_uint();
    else if (key == "min_width") cfg.prove.min_width = scalar_or_throw(key, val);
    else if (key == "eps32") cfg.eval.formats.single.eps = scalar_or_throw(key, val);
    else if (key == "zeta32") cfg.eval.formats.single.zeta = scalar_or_throw(key, val);
    else if (key == "eps64") cfg.eval.formats.dbl.eps = scalar_or_throw(key, val);
    else if (key == "zeta64") cfg.eval.formats.dbl.zeta = scalar_or_throw(key, val);
    else if (key == "delta") cfg.dreal.delta = scalar_or_throw(key, val);
    else if (key == "dreal_max_digits") cfg.dreal.max_digits = as_uint();
    else throw Error(path + ":" + std::to_string(n) + ": unknown key " + key);
  }
  cfg.prove.formats = cfg.eval.formats;
}

PipelineConfig make_config(const Options& o, const CLI::App& sub) {
  PipelineConfig cfg;
  if (!o.config.empty()) apply_config_file(o.config, cfg);
  auto given = [&](const char* name) { return sub.get_option(name)->count() > 0; };
  if (given("--prec")) cfg.eval.prec = cfg.prove.prec = o.prec;
  if (given("--timeout")) cfg.prove.timeout_seconds = o.timeout;
  if (given("--max-depth")) cfg.prove.max_depth = o.max_depth;
  if (given("--jobs")) cfg.prove.jobs = o.jobs;
  for (const std::string& spec : o.inject) {
    auto eq = spec.find('=');
    if (eq == std::string::npos) throw Error("--inject-bound expects ID=DECIMAL, got " + spec);
    Scalar v = scalar_or_throw("--inject-bound", spec.substr(eq + 1));
    if (v < 0) throw Error("--inject-bound: negative bound " + spec);
    cfg.injected[spec.substr(0, eq)] = v;
  }
  return cfg;
}

std::string approx(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.7g", d);
  return buf;
}

std::string decimal(const Scalar& q) {
  if (auto d = to_exact_decimal(q, 40)) return *d;
  return to_fraction_string(q);
}

std::string point_string(const Point& p) {
  std::string s;
  for (const auto& [n, v] : p) s += (s.empty() ? "" : ", ") + n + "=" + to_display_string(v) + " (~" + approx(to_double(v)) + ")";
  return s;
}

std::string verdict_name(const Verdict& v) {
  return v.kind == VerdictKind::CounterExample ? "PotentialCounterexample" : to_string(v.kind);
}

json bound_json(const Interval& iv) {
  return {{"lo", iv.lo() ? json(to_fraction_string(*iv.lo())) : json(nullptr)},
          {"hi", iv.hi() ? json(to_fraction_string(*iv.hi())) : json(nullptr)},
          {"text", bounds_string(iv)}};
}

json report_json(const PipelineResult& r, const std::string& command, int code) {
  json j;
  j["input"] = r.input;
  j["command"] = command;
  j["stages"] = json::array();
  for (const StageTiming& s : r.stages) j["stages"].push_back({{"name", s.name}, {"seconds", s.seconds}});
  j["dropped"] = json::array();
  for (const DroppedAssertion& d : r.report.dropped)
    j["dropped"].push_back({{"index", d.index}, {"reason", to_string(d.reason)}, {"detail", d.detail}});
  j["warnings"] = r.warnings;
  const ProcessedNVC& shown = r.eliminated ? r.exact : r.processed;
  j["bounds"] = json::object();
  for (const VarSpec& v : shown.vars) {
    json b = bound_json(v.bounds);
    b["sort"] = v.sort.to_string();
    j["bounds"][v.name] = b;
  }
  j["contexts"] = json::array();
  for (const FPContext& c : r.contexts) {
    json cj{{"id", c.id}, {"expr", to_sexpr(c.expr)}};
    cj["delta"] = c.bound ? json(decimal(*c.bound)) : json(nullptr);
    cj["delta_approx"] = c.bound ? json(to_double(*c.bound)) : json(nullptr);
    cj["source"] = c.source == BoundSource::Internal ? "internal" : "external";
    if (c.source == BoundSource::External) cj["tool"] = c.tool;
    j["contexts"].push_back(cj);
  }
  for (const auto& [id, why] : r.bound_failures) j["bound_failures"].push_back({{"id", id}, {"error", why}});
  if (r.verdict) {
    const Verdict& v = *r.verdict;
    j["verdict"] = verdict_name(v);
    if (!v.reason.empty()) j["reason"] = v.reason;
    json p = json::object();
    for (const auto& [n, q] : v.point) p[n] = {{"exact", to_fraction_string(q)}, {"approx", to_double(q)}};
    j["point"] = v.point.empty() ? json(nullptr) : p;
    j["certified"] = v.certified;
    j["actual"] = r.actual;
    j["stats"] = {{"boxes", v.stats.boxes},         {"refuted", v.stats.refuted}, {"undecided", v.stats.undecided},
                  {"max_depth", v.stats.max_depth}, {"seconds", v.stats.seconds}};
  } else {
    j["verdict"] = nullptr;
  }
  j["exit_code"] = code;
  return j;
}

std::string context_lines(const PipelineResult& r) {
  std::string out;
  for (const FPContext& c : r.contexts) {
    out += "-- context " + c.id + " delta=" + (c.bound ? decimal(*c.bound) : std::string("none"));
    out += c.source == BoundSource::Internal ? " internal" : " " + c.tool;
    out += " : " + to_sexpr(c.expr) + "\n";
  }
  return out;
}

std::string run_command(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw Error("cannot run " + cmd);
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  pclose(p);
  return out;
}

struct FileOutcome {
  int code = 0;
  std::string out, err;
  json report;
};

struct Emitted {
  std::string ext, text;
};

std::vector<Emitted> emit_exports(const PipelineResult& r, const std::vector<std::string>& formats, const PipelineConfig& cfg,
                                  std::string& err) {
  std::vector<Emitted> out;
  for (const std::string& f : formats) {
    try {
      if (f == "fptaylor") {
        std::vector<Expr> es;
        for (const FPContext& c : r.contexts) {
          try {
            to_fptaylor_expr(c.expr);
            es.push_back(c.expr);
          } catch (const UnsupportedForBackend& e) {
            err += "warning: context " + c.id + " skipped: " + e.what() + "\n";
          }
        }
        out.push_back({"fptaylor.txt", export_fptaylor(es, r.processed.box(), cfg.eval.prec)});
      } else if (!r.eliminated) {
        err += "error: " + f + " export needs every context bounded\n";
      } else if (f == "dreal") {
        out.push_back({"dreal.smt2", export_dreal_smt2(r.exact, r.exact.box(), cfg.dreal)});
      } else if (f == "metitarski") {
        out.push_back({"tptp", export_metitarski_tptp(r.exact, r.exact.box())});
      }
    } catch (const UnsupportedForBackend& e) {
      err += "n/s: " + std::string(e.what()) + "\n";
    }
  }
  return out;
}

FileOutcome process_file(const std::string& command, const std::string& path, const Options& o, const PipelineConfig& cfg) {
  FileOutcome fo;
  std::ostringstream out, err;
  PipelineResult r;
  try {
    if (command == "prove") r = run_prove(path, cfg);
    else r = run_process(path, cfg);
  } catch (const StageError& e) {
    fo.code = kExitInput;
    fo.err = path + ": error in stage " + std::string(e.what()) + "\n";
    fo.report = report_json(r, command, fo.code);
    fo.report["input"] = path;
    fo.report["error"] = e.what();
    return fo;
  }
  for (const std::string& w : r.warnings) err << path << ": warning: " << w << "\n";

  if (command == "bounds") {
    out << "Bounds on variables:\n";
    bool unbounded = false;
    for (const VarSpec& v : r.processed.vars) {
      out << bound_line(v) << "\n";
      if (!v.bounds.bounded()) unbounded = true;
    }
    if (unbounded) {
      err << path << ": warning: some variables are unbounded\n";
      fo.code = kExitWarning;
    }
  } else if (command == "process") {
    out << context_lines(r);
    for (const auto& [id, why] : r.bound_failures) err << path << ": context " << id << " has no bound: " << why << "\n";
    if (!r.eliminated) fo.code = kExitInput;
    const ProcessedNVC& shown = r.eliminated ? r.exact : r.processed;
    std::string err_text;
    auto exports = emit_exports(r, o.emit, cfg, err_text);
    err << err_text;
    if (!o.out_dir.empty()) {
      fs::create_directories(o.out_dir);
      std::string stem = fs::path(path).stem().string();
      std::ofstream(fs::path(o.out_dir) / (stem + ".nvc")) << context_lines(r) << write_corpus(shown);
      for (const Emitted& e : exports) std::ofstream(fs::path(o.out_dir) / (stem + "." + e.ext)) << e.text;
      out << "wrote " << (fs::path(o.out_dir) / (stem + ".nvc")).string() << "\n";
    } else {
      out << write_corpus(shown);
      for (const Emitted& e : exports) out << "\n-- " << e.ext << "\n" << e.text;
    }
  } else {
    const Verdict& v = *r.verdict;
    fo.code = exit_code(v);
    out << path << ": " << verdict_name(v);
    if (v.kind == VerdictKind::CounterExample)
      out << " [" << point_string(v.point) << "] " << (v.certified ? "certified" : "uncertified")
          << (r.actual ? ", actual" : ", potential");
    if (v.kind == VerdictKind::GaveUp) {
      out << " (" << v.reason << ")";
      if (!v.point.empty()) out << " best candidate [" << point_string(v.point) << "]";
    }
    out << "\n";
    for (const StageTiming& s : r.stages) out << "  " << s.name << ": " << s.seconds << " s\n";
    if (o.run_external.size() == 2 && r.eliminated) {
      const std::string& tool = o.run_external[0];
      const std::string& bin = o.run_external[1];
      try {
        bool dreal = tool == "dreal";
        if (!dreal && tool != "metitarski") throw Error("unknown tool " + tool);
        std::string text = dreal ? export_dreal_smt2(r.exact, r.exact.box(), cfg.dreal) : export_metitarski_tptp(r.exact, r.exact.box());
        fs::path tmp = fs::temp_directory_path() / ("fpvc_" + std::to_string(fnv1a64(path)) + (dreal ? ".smt2" : ".tptp"));
        std::ofstream(tmp) << text;
        std::string answer = run_command("'" + bin + "' '" + tmp.string() + "' 2>&1");
        ProverAnswer a = parse_prover_answer(dreal ? ExternalTool::DReal : ExternalTool::MetiTarski, answer);
        const char* k = a.kind == AnswerKind::Proved ? "Proved" : a.kind == AnswerKind::Refuted ? "delta-sat (potential, uncertified)" : "Unknown";
        out << "  " << tool << ": " << k << "\n";
      } catch (const std::exception& e) {
        err << path << ": " << tool << ": " << e.what() << "\n";
      }
    }
  }
  if (command != "bounds" && fo.code == 0 && !r.unknown_injections.empty()) fo.code = kExitWarning;
  fo.out = out.str();
  fo.err = err.str();
  fo.report = report_json(r, command, fo.code);
  return fo;
}

int combine(const std::vector<int>& codes) {
  for (int c : {kExitInput, 10, 20, kExitWarning})
    for (int x : codes)
      if (x == c) return c;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proves floating-point verification conditions by error-bound elimination and branch-and-prune."};
  app.require_subcommand(1);
  Options o;
  std::vector<CLI::App*> subs;
  const std::pair<const char*, const char*> commands[] = {
      {"prove", "prove each NVC"}, {"process", "print the simplified exact NVC"}, {"bounds", "print derived variable bounds"}};
  for (const auto& [name, help] : commands) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("files", o.files, "input files (.smt2 or corpus text)")->required()->check(CLI::ExistingFile);
    s->add_option("--prec", o.prec, "working precision in bits")->check(CLI::Range(16u, 100000u));
    s->add_option("--timeout", o.timeout, "prover timeout in seconds");
    s->add_option("--max-depth", o.max_depth, "maximum bisection depth");
    s->add_option("--jobs", o.jobs, "prover worker threads")->check(CLI::Range(1u, 256u));
    s->add_option("--inject-bound", o.inject, "ID=DEC external error bound for a context")->take_all();
    s->add_option("--emit", o.emit, "export format")->check(CLI::IsMember({"dreal", "metitarski", "fptaylor"}))->take_all();
    s->add_option("--report", o.report, "write a JSON report");
    s->add_option("--config", o.config, "key=value configuration file")->check(CLI::ExistingFile);
    s->add_option("-o,--out-dir", o.out_dir, "directory for processed NVCs and exports");
    s->add_option("--run-external", o.run_external, "TOOL PATH: also run dreal or metitarski")->expected(2);
    subs.push_back(s);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }
  CLI::App* sub = nullptr;
  for (CLI::App* s : subs)
    if (s->parsed()) sub = s;
  std::string command = sub->get_name();

  PipelineConfig cfg;
  try {
    cfg = make_config(o, *sub);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  std::vector<FileOutcome> results(o.files.size());
  if (o.files.size() == 1) {
    results[0] = process_file(command, o.files[0], o, cfg);
  } else {
    std::vector<std::future<FileOutcome>> fs;
    for (const std::string& f : o.files) fs.push_back(std::async(std::launch::async, process_file, command, f, std::cref(o), std::cref(cfg)));
    for (std::size_t i = 0; i < fs.size(); ++i) results[i] = fs[i].get();
  }
  std::vector<int> codes;
  json reports = json::array();
  for (const FileOutcome& r : results) {
    std::cout << r.out;
    std::cerr << r.err;
    codes.push_back(r.code);
    reports.push_back(r.report);
  }
  if (!o.report.empty()) {
    std::ofstream rep(o.report);
    rep << (reports.size() == 1 ? reports[0] : reports).dump(2) << "\n";
    if (!rep) {
      std::cerr << "error: cannot write " << o.report << "\n";
      return kExitInput;
    }
  }
  return combine(codes);
}
