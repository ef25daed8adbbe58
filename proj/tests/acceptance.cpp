#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "support/common.hpp"
#include "support/oracle.hpp"
#include "support/progen.hpp"
#include "support/random_values.hpp"
#include "tsa/csa.hpp"
#include "tsa/interp.hpp"
#include "tsa/naive.hpp"
#include "tsa/report.hpp"

using namespace tsa;
using namespace tsa::testing;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

constexpr size_t kN = 4;

RawVal ints(std::initializer_list<int64_t> xs) { return RawVal{BoundedSet<int64_t>::of(xs, kN), {}, false, false, false, {}, {}}; }

RawVal strs(std::initializer_list<std::string> xs) {
  RawVal r;
  r.strs = BoundedSet<std::string>::of(xs, kN);
  return r;
}

CtxVal cells(std::vector<std::pair<Ctx, RawVal>> xs) {
  std::vector<CtxEntry> es;
  for (auto& [c, r] : xs) es.push_back(CtxEntry{c, r});
  return CtxVal::from_cells(es);
}

Ctx sub(std::vector<CallSite> p) { return Ctx::subtree(p); }

// The unique label at text whose value is not ⊥.
const CsCell* cs_at(const CsAnalysis& a, const Compiled& c, const std::string& text, const std::string& fn = {}) {
  const CsCell* found = nullptr;
  for (LabelId l : labels_at(c, text, fn)) {
    auto it = a.exprs.find(l);
    if (it == a.exprs.end() || it->second.v.is_bottom()) continue;
    found = &it->second;
  }
  return found;
}

std::string show(const CtxVal& v, const Compiled& c) { return render_cv(v, make_names(c.idx)); }

Verdict fig51() {
  auto t0 = std::chrono::steady_clock::now();
  auto c = compile(load_program("fig51.tsp"));
  auto a = analyze_cs(c->idx);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CallSite al = call_at(*c, "increment(3)"), be = call_at(*c, "increment(5)");
  CtxVal x = cells({{sub({al}), ints({3})}, {sub({be}), ints({5})}});
  CtxVal x1 = cells({{sub({al}), ints({4})}, {sub({be}), ints({6})}});
  const CsCell* vx = cs_at(a, *c, "x", "increment");
  const CsCell* vx1 = cs_at(a, *c, "x + 1", "increment");
  const CsCell* r3 = cs_at(a, *c, "increment(3)");
  const CsCell* r5 = cs_at(a, *c, "increment(5)");
  bool ok = a.ok && vx && vx1 && r3 && r5 && vx->v == x && vx1->v == x1 && r3->v == CtxVal::constant(ints({4})) &&
            r5->v == CtxVal::constant(ints({6})) && secs < 1.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f s", secs);
  return {ok, "x+1 = " + (vx1 ? show(vx1->v, *c) : "missing") + ", " + buf};
}

Verdict fig54() {
  auto c = compile(load_program("fig55.tsp"));
  auto a = analyze_naive(c->idx);
  RawVal v;
  for (LabelId l : labels_at(*c, "a.x"))
    if (a.exprs.count(l)) v = a.exprs.at(l).v;
  bool ok = a.ok && v.ints == BoundedSet<int64_t>::of({1, 2}, kN) && !(v.ints == BoundedSet<int64_t>::of({2}, kN));
  return {ok, "a.x = " + render_raw(v, make_names(c->idx))};
}

Verdict fig55() {
  auto c = compile(load_program("fig55.tsp"));
  auto a = analyze_cs(c->idx);
  CallSite al = call_at(*c, "create(1)"), be = call_at(*c, "create(2)");
  LabelId lit = labels_at(*c, "{}").at(0);
  AllocPath p1a = literal_path(lit), p1b = literal_path(lit);
  p1a.escapes = {al};
  p1b.escapes = {be};
  const CsCell* va = cs_at(a, *c, "create(1)");
  const CsCell* vb = cs_at(a, *c, "create(2)");
  const CsCell* vax = cs_at(a, *c, "a.x");
  FunctionId create = c->idx.fn("create");
  CtxVal inner = a.fn_out.at(size_t(create)).st.at(literal_path(lit)).get("x");
  CtxVal want_inner = cells({{sub({al}), ints({1})}, {sub({be}), ints({2})}});
  bool ok = a.ok && va && vb && vax && va->v == CtxVal::constant(raw_path(p1a)) &&
            vb->v == CtxVal::constant(raw_path(p1b)) && vax->v == CtxVal::constant(ints({1})) && inner == want_inner;
  return {ok, "a = " + (va ? show(va->v, *c) : "missing") + ", b = " + (vb ? show(vb->v, *c) : "missing") +
                  ", a.x = " + (vax ? show(vax->v, *c) : "missing") + ", #1.x = " + show(inner, *c)};
}

Verdict workspace() {
  std::string src = load_program("workspace.tsp");
  auto c = compile(src);
  auto a = analyze_cs(c->idx);
  const CsCell* v = cs_at(a, *c, "workspace.table", "_do_work");
  if (!a.ok || !v) return {false, "no value"};
  CallSite lib = call_at(*c, "_do_work(workspace, command)");
  CallSite other = call_at(*c, "_do_work(other_workspace, \"other_command\")");
  CtxVal paper = cells({{sub({lib}), strs({"table"})}, {sub({other}), strs({"other_table"})}});
  bool shape = v->v.size() == 2;
  for (const auto& e : v->v.entries()) {
    if (e.raw == strs({"table"})) shape = shape && e.ctx.leq(sub({lib}));
    else if (e.raw == strs({"other_table"})) shape = shape && e.ctx == sub({other});
    else shape = false;
  }
  // Pointwise agreement with the paper's value on every stack the program reaches.
  size_t stacks = 0;
  bool agree = true;
  std::set<LabelId> at;
  for (LabelId l : labels_at(*c, "workspace.table", "_do_work")) at.insert(l);
  RunOptions opt;
  opt.observer = [&](LabelId l, const CValue&, const RunView& view) {
    if (!at.count(l)) return;
    ++stacks;
    Stack s = stack_of(view);
    agree = agree && v->v.lookup(s) == paper.lookup(s);
  };
  run_ir(c->ir, "", opt);
  return {shape && agree && stacks == 3,
          "workspace.table = " + show(v->v, *c) + ", agrees with the two-entry form on " + std::to_string(stacks) +
              " observed stacks"};
}

Verdict curried() {
  auto c = compile(load_program("curried_add.tsp"));
  RunResult r = run_ir(c->ir, "");
  auto a = analyze_naive(c->idx);
  std::vector<std::string> chained = {"wrapper(curried_add(2))", "curried_add(2)", "wrapper(adder1(3))",
                                      "adder1(3)", "wrapper(adder2(5))", "adder2(5)"};
  bool resolved = true;
  for (const auto& text : chained) {
    CallSite s = call_at(*c, text);
    resolved = resolved && a.call_graph.count(s) && !a.call_graph.at(s).empty();
  }
  RawVal res;
  for (LabelId l : labels_at(*c, "wrapper(adder2(5))"))
    if (a.exprs.count(l)) res = a.exprs.at(l).v;
  bool ok = r.outcome == Outcome::Finished && r.globals["result"] == "10" && a.ok && resolved && res.ints.contains(10);
  return {ok, "concrete result = " + r.globals["result"] + ", naive result = " + render_raw(res, make_names(c->idx))};
}

const std::vector<std::string> kInputs = {"", "x", "hello"};

Verdict soundness() {
  SoundnessStats stats;
  size_t programs = 0, failed_analyses = 0;
  for (uint64_t seed = 1; programs < 500; ++seed) {
    std::string src = random_program(seed);
    std::unique_ptr<Compiled> c;
    try {
      c = compile(src);
    } catch (const std::exception& e) {
      stats.violations.push_back("seed " + std::to_string(seed) + " does not compile: " + e.what());
      ++programs;
      continue;
    }
    auto n = analyze_naive(c->idx);
    auto a = analyze_cs(c->idx);
    if (!n.ok || !a.ok) {
      ++failed_analyses;
      stats.violations.push_back("seed " + std::to_string(seed) + " analysis failed");
    } else {
      size_t before = stats.violations.size();
      check_soundness(c->ir, c->idx, n, a, kInputs, 100000, stats);
      for (size_t i = before; i < stats.violations.size(); ++i)
        stats.violations[i] = "seed " + std::to_string(seed) + ": " + stats.violations[i];
    }
    ++programs;
  }
  std::string detail = std::to_string(programs) + " programs, " + std::to_string(stats.runs) + " runs (" +
                       std::to_string(stats.finished) + " finished), " + std::to_string(stats.observations) +
                       " observations, " + std::to_string(stats.violations.size()) + " violations";
  if (!stats.violations.empty()) detail += "; first: " + stats.violations.front();
  return {stats.violations.empty() && failed_analyses == 0, detail};
}

Verdict preservation() {
  size_t programs = 0, runs = 0, finished = 0;
  std::vector<std::string> bad;
  for (uint64_t seed = 1000; programs < 500; ++seed, ++programs) {
    std::string src = random_program(seed);
    SurfaceProgram sp;
    IrProgram ir;
    try {
      sp = parse_program(src);
      ir = closure_convert(sp);
    } catch (const std::exception& e) {
      bad.push_back("seed " + std::to_string(seed) + ": " + e.what());
      continue;
    }
    for (const auto& in : kInputs) {
      RunOptions opt;
      opt.fuel = 1'000'000;
      opt.record_values = false;
      RunResult s = run_surface(sp, in, opt);
      RunResult i = run_ir(ir, in, opt);
      ++runs;
      if (s.outcome == Outcome::Finished) ++finished;
      if (outcome_class(s) != outcome_class(i) || s.globals != i.globals)
        bad.push_back("seed " + std::to_string(seed) + " input \"" + in + "\": " + outcome_class(s) + " vs " +
                      outcome_class(i));
    }
  }
  std::string detail = std::to_string(programs) + " programs, " + std::to_string(runs) + " run pairs (" +
                       std::to_string(finished) + " finished), " + std::to_string(bad.size()) + " violations";
  if (!bad.empty()) detail += "; first: " + bad.front();
  return {bad.empty(), detail};
}

Verdict ctx_algebra() {
  std::mt19937_64 rng(8);
  auto stacks = all_stacks(3, 4);
  size_t pairs = 0, bad = 0;
  for (; pairs < 10000; ++pairs) {
    Ctx a = random_ctx(rng, 3, 3), b = random_ctx(rng, 3, 3), d = random_ctx(rng, 3, 3);
    Ctx u = a | b, i = a & b, na = ~a;
    for (const auto& s : stacks) {
      bool ia = a.contains(s), ib = b.contains(s);
      if (u.contains(s) != (ia || ib) || i.contains(s) != (ia && ib) || na.contains(s) == ia) ++bad;
    }
    bool laws = (a | b) == (b | a) && (a & b) == (b & a) && ((a | b) | d) == (a | (b | d)) &&
                ((a & b) & d) == (a & (b & d)) && (a & (b | d)) == ((a & b) | (a & d)) &&
                (a | (b & d)) == ((a | b) & (a | d)) && ~(a | b) == (~a & ~b) && ~(a & b) == (~a | ~b) &&
                ~~a == a && (a | (a & b)) == a && (a & (a | b)) == a && Ctx::normalize(a.parts()) == a;
    if (!laws) ++bad;
  }
  return {bad == 0, std::to_string(pairs) + " random pairs over " + std::to_string(stacks.size()) +
                        " stacks, " + std::to_string(bad) + " disagreements"};
}

Verdict pointwise() {
  std::mt19937_64 rng(9);
  size_t instances = 0, checks = 0, bad = 0;
  for (; instances < 300; ++instances) {
    CtxVal a = random_ctxval(rng, 3), b = random_ctxval(rng, 3);
    CallSite site = CallSite(1 + std::uniform_int_distribution<int>(0, 2)(rng));
    auto f = [](const RawVal& r) {
      RawVal x = r;
      x.null = true;
      return CtxVal::at(Ctx::subtree({CallSite(r.ints.size() % 3 + 1)}), x);
    };
    AllocPath p = literal_path(100);
    auto g = [&](const RawVal& r) {
      AbsState s;
      Payload pl;
      pl.set("v", CtxVal::constant(r));
      s.put(p, pl);
      return s;
    };
    CtxVal ad = lift_add(a, b), su = lift_sub(a, b), mu = lift_mul(a, b), di = lift_div(a, b), jo = cv_join(a, b);
    CtxVal bv = bind_v(a, f), en = enter_ctx(site, a), ex = exit_ctx(site, a);
    AbsState bs = bind_s(a, g);
    for (int k = 0; k < 100; ++k) {
      Stack s = random_stack(rng, 3, 6);
      RawVal x = a.lookup(s), y = b.lookup(s);
      Stack tail(s.size() > 0 ? s.begin() + 1 : s.end(), s.end());
      Stack pushed = s;
      pushed.insert(pushed.begin(), site);
      bool ok = ad.lookup(s) == raw_add(x, y) && su.lookup(s) == raw_sub(x, y) && mu.lookup(s) == raw_mul(x, y) &&
                di.lookup(s) == raw_div(x, y) && jo.lookup(s) == raw_join(x, y) && bv.lookup(s) == f(x).lookup(s) &&
                en.lookup(s) == (!s.empty() && s[0] == site ? a.lookup(tail) : RawVal{}) &&
                ex.lookup(s) == a.lookup(pushed) && bs.at(p).get("v").lookup(s) == g(x).at(p).get("v").lookup(s);
      ++checks;
      if (!ok) ++bad;
    }
    if (!(exit_ctx(site, enter_ctx(site, a)) == a)) ++bad;
    for (size_t kh = 1; kh <= 4; ++kh) {
      AllocPath q = random_path(rng, 3, kh);
      if (q.deep || q.depth >= kh) continue;
      auto back = exit_call_path(site, enter_call_path(site, q, kh), kh);
      if (back.size() != 1 || !(back[0] == q)) ++bad;
    }
  }
  return {bad == 0, std::to_string(instances) + " instances, " + std::to_string(checks) + " sampled stacks, " +
                        std::to_string(bad) + " failures"};
}

Verdict termination() {
  std::string detail;
  bool ok = true;
  for (const char* name : {"factorial.tsp", "pingpong.tsp", "fact_loop.tsp"}) {
    auto c = compile(load_program(name));
    CsConfig cfg;
    cfg.check_fixpoint = true;
    auto a = analyze_cs(c->idx, cfg);
    ok = ok && a.ok && a.fixpoint;
    detail += std::string(detail.empty() ? "" : ", ") + name + " " + (a.ok ? "stable" : "cap hit") + " after " +
              std::to_string(a.evals) + " evals" + (a.fixpoint ? " (fixpoint)" : " (not a fixpoint)");
  }
  return {ok, detail};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  std::vector<Criterion> all = {
      {"increment program, ctx mode", fig51},
      {"create program, naive weak update", fig54},
      {"create program, ctx heap specialization", fig55},
      {"workspace program, ctx mode", workspace},
      {"curried_add, concrete and naive", curried},
      {"soundness of both analyses on random programs", soundness},
      {"closure conversion preserves behaviour", preservation},
      {"context algebra against membership oracle", ctx_algebra},
      {"pointwise laws of value operations", pointwise},
      {"termination of recursive programs", termination},
  };
  int failed = 0;
  for (size_t i = 0; i < all.size(); ++i) {
    Verdict v;
    try {
      v = all[i].run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("criterion %zu: %s - %s: %s\n", i + 1, v.pass ? "PASS" : "FAIL", all[i].name, v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
