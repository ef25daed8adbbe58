#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tsa/closure_conv.hpp"
#include "tsa/csa.hpp"
#include "tsa/interp.hpp"
#include "tsa/naive.hpp"
#include "tsa/parser.hpp"
#include "tsa/report.hpp"

namespace {

struct Options {
  std::string file;
  std::string mode = "ctx";
  size_t set_bound = 4;
  size_t ctx_depth = 8;
  size_t heap_depth = 8;
  uint64_t fuel = 1000000;
  std::string format = "text";
  bool extract_loops = false;
  bool trace = false;
  std::string input;
  bool surface = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

tsa::SurfaceProgram load(const Options& o) {
  tsa::SurfaceProgram p = tsa::parse_program(read_file(o.file));
  if (o.extract_loops) p = tsa::extract_loops(p);
  return p;
}

int cmd_parse(const Options& o) {
  auto p = load(o);
  std::cout << tsa::print_stmt(*p.body);
  return 0;
}

int cmd_convert(const Options& o) {
  auto ir = tsa::closure_convert(load(o));
  std::cout << tsa::print_ir(ir);
  return 0;
}

int cmd_run(const Options& o) {
  auto p = load(o);
  tsa::RunOptions ro;
  ro.fuel = o.fuel;
  ro.record_values = false;
  tsa::RunResult r = o.surface ? tsa::run_surface(p, o.input, ro) : tsa::run_ir(tsa::closure_convert(p), o.input, ro);
  std::cout << tsa::outcome_class(r) << "\n";
  if (r.outcome == tsa::Outcome::RuntimeError) {
    std::cout << r.message << "\n";
    return 1;
  }
  for (const auto& [name, v] : r.globals) std::cout << name << " = " << v << "\n";
  return 0;
}

int cmd_analyze(const Options& o) {
  auto ir = tsa::closure_convert(load(o));
  tsa::ProgramIndex idx = tsa::build_index(ir);
  tsa::SolverConfig sc;
  if (o.trace) sc.trace = &std::cerr;
  tsa::Report rep;
  bool ok = true;
  std::string error;
  std::vector<std::string> hot;
  if (o.mode == "naive") {
    tsa::NaiveConfig nc;
    nc.set_bound = o.set_bound;
    auto a = tsa::analyze_naive(idx, nc, sc);
    ok = a.ok, error = a.error, hot = a.hot_vars;
    for (const auto& d : a.diagnostics) std::cerr << "note: " << d << "\n";
    rep = tsa::make_report(a, idx);
  } else {
    tsa::CsConfig cc;
    cc.set_bound = o.set_bound;
    cc.ctx_depth = o.ctx_depth;
    cc.heap_depth = o.heap_depth;
    auto a = tsa::analyze_cs(idx, cc, sc);
    ok = a.ok, error = a.error, hot = a.hot_vars;
    rep = tsa::make_report(a, idx);
  }
  if (!ok) {
    std::cerr << "solver failure: " << error << "\n";
    for (const auto& h : hot) std::cerr << "  " << h << "\n";
    return 2;
  }
  if (o.format == "json") std::cout << tsa::report_json(rep, idx).dump(2) << "\n";
  else std::cout << tsa::report_text(rep, idx, ir.source);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tsa: TinyScript+ interpreter and static analyzer"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", o.file, "program file (.tsp)")->required()->check(CLI::ExistingFile);
    sub->add_flag("--extract-loops", o.extract_loops, "move loop bodies into separate functions first");
  };
  auto* parse = app.add_subcommand("parse", "parse and print the surface program");
  auto* convert = app.add_subcommand("convert", "print the closure-converted program");
  auto* run = app.add_subcommand("run", "run the program concretely");
  auto* analyze = app.add_subcommand("analyze", "run a static analysis");
  for (auto* s : {parse, convert, run, analyze}) add_common(s);
  run->add_option("--input", o.input, "value of the global `input`");
  run->add_option("--fuel", o.fuel, "step budget")->check(CLI::PositiveNumber);
  run->add_flag("--surface", o.surface, "run the surface program instead of the converted one");
  analyze->add_option("--mode", o.mode, "naive or ctx")->check(CLI::IsMember({"naive", "ctx"}));
  analyze->add_option("--set-bound", o.set_bound, "N, largest tracked set of ints or strings")->check(CLI::Range(1, 1 << 20));
  analyze->add_option("--ctx-depth", o.ctx_depth, "K, context depth kept at widening points");
  analyze->add_option("--heap-depth", o.heap_depth, "K_h, allocation path bound");
  analyze->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  analyze->add_flag("--trace-fixpoint", o.trace, "log every equation evaluation to stderr");
  analyze->add_option("--fuel", o.fuel, "unused by analyses; accepted for symmetry");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*parse) return cmd_parse(o);
    if (*convert) return cmd_convert(o);
    if (*run) return cmd_run(o);
    return cmd_analyze(o);
  } catch (const tsa::ParseError& e) {
    std::cerr << o.file << ":" << e.span.start << ": parse error: " << e.what() << "\n";
    return 1;
  } catch (const tsa::MalformedProgram& e) {
    std::cerr << o.file << ": malformed program: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
