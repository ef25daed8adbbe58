#include "tsa/csa.hpp"

#include <algorithm>

#include "tsa/gen.hpp"

namespace tsa {

AllocPath env_path(FunctionId f) { return AllocPath::at(AllocSite::env(f)); }
AllocPath literal_path(LabelId l, bool global) { return AllocPath::at(AllocSite::literal(l, global)); }

namespace {

bool calls_fn(const RawVal& r, FunctionId g) {
  for (const auto& fr : r.funs)
    if (fr.fn == g) return true;
  return false;
}

struct CsDomain {
  using Cell = CsCell;

  const ProgramIndex& idx;
  CsConfig cfg;

  size_t kh() const { return cfg.heap_depth; }

  Cell join(const Cell& a, const Cell& b) const { return {state_join(a.st, b.st), cv_join(a.v, b.v)}; }

  Cell widen(const Cell& c) const {
    if (!cfg.widen) return c;
    return {state_widen(c.st, cfg.ctx_depth, cfg.max_entries),
            cv_limit(cv_truncate(c.v, cfg.ctx_depth), cfg.max_entries)};
  }

  CtxVal constant(const AbsState& st, const Expr& e) const {
    if (st.is_bottom()) return {};
    switch (e.kind) {
      case ExprKind::Int: return CtxVal::constant(raw_int(e.int_val, cfg.set_bound));
      case ExprKind::Str: return CtxVal::constant(raw_str(e.name, cfg.set_bound));
      case ExprKind::Bool: return CtxVal::constant(raw_bool(e.bool_val));
      default: return CtxVal::constant(raw_null());
    }
  }

  CtxVal var_read(const AbsState& st, FunctionId f, const std::string& name) const {
    return st.at(env_path(f)).get(name);
  }

  AbsState var_write(const AbsState& st, FunctionId f, const std::string& name, const CtxVal& v) const {
    if (st.is_bottom()) return {};
    AbsState out = st;
    Payload p = st.at(env_path(f));
    p.set(name, v);
    out.put(env_path(f), std::move(p));
    return out;
  }

  CtxVal prop_read(const AbsState& st, const CtxVal& t, const std::string& name) const {
    return state_read_prop(st, t, name);
  }

  CtxVal index_read(const AbsState& st, const CtxVal& t) const { return state_read_index(st, t); }

  AbsState prop_write(const AbsState& st, const CtxVal& t, const std::string& name, const CtxVal& v) const {
    if (st.is_bottom()) return {};
    return bind_s(t, [&](const RawVal& r) { return state_write_prop(st, r.paths, name, v, idx); });
  }

  AbsState index_write(const AbsState& st, const CtxVal& t, const CtxVal&, const CtxVal& v) const {
    if (st.is_bottom()) return {};
    return bind_s(t, [&](const RawVal& r) { return state_write_index(st, r.paths, v); });
  }

  CtxVal arith(ExprKind k, const CtxVal& a, const CtxVal& b) const {
    switch (k) {
      case ExprKind::Add: return lift_add(a, b);
      case ExprKind::Sub: return lift_sub(a, b);
      case ExprKind::Mul: return lift_mul(a, b);
      default: return lift_div(a, b);
    }
  }

  Cell literal(const AbsState& st, FunctionId f, const Expr& e, const std::vector<const CtxVal*>& vals) const {
    if (st.is_bottom()) return {};
    Ctx reach = state_reach(st, env_path(f));
    Payload fresh;
    if (e.kind == ExprKind::ObjLit) {
      fresh.dflt = CtxVal::at(reach, raw_null());
      for (size_t i = 0; i < vals.size(); ++i) fresh.set(e.names[i], cv_restrict(*vals[i], reach));
    } else {
      for (const CtxVal* v : vals) fresh.arr = cv_join(fresh.arr, cv_restrict(*v, reach));
    }
    AllocPath path = literal_path(e.label.id, f == kMain);
    const Payload& old = st.at(path);
    Payload next;
    if (is_singular(path, idx))
      next = payload_join(payload_map(old, [&](const CtxVal& x) { return cv_restrict(x, ~reach); }), fresh);
    else
      next = payload_join(old, fresh);
    AbsState out = st;
    out.put(path, std::move(next));
    return {std::move(out), CtxVal::constant(raw_path(path))};
  }

  CtxVal bind_closure(const AbsState& st, FunctionId f, FunctionId g) const {
    if (st.is_bottom()) return {};
    return CtxVal::constant(raw_fun(env_path(f), g));
  }

  AbsState call_entry(CallSite site, FunctionId f, FunctionId g, const CtxVal& callee,
                      const std::vector<const CtxVal*>& args, const AbsState& st) const {
    if (st.is_bottom()) return {};
    const FunctionInfo& gi = idx.info(g);
    Ctx reach = state_reach(st, env_path(f));
    AbsState out;
    for (const auto& e : callee.entries()) {
      RawVal closures;
      for (const auto& fr : e.raw.funs)
        if (fr.fn == g) closures = raw_join(closures, raw_path(fr.closure));
      if (closures.is_bottom()) continue;
      Ctx live = e.ctx & reach;
      if (live.is_empty()) continue;
      Payload frame;
      frame.dflt = CtxVal::at(live, raw_null());
      frame.set(gi.params[0], CtxVal::at(live, closures));
      for (size_t i = 0; i < args.size(); ++i) frame.set(gi.params[i + 1], cv_restrict(*args[i], live));
      AbsState entered = enter_call(site, state_restrict(st, live), kh());
      entered.put(env_path(g), enter_call(site, frame, kh()));
      out = state_join(out, entered);
    }
    return out;
  }

  Cell call_result(CallSite site, FunctionId, const CtxVal& callee, const AbsState& st,
                   const std::vector<std::pair<FunctionId, const Cell*>>& results) const {
    if (st.is_bottom()) return {};
    Cell out;
    for (const auto& [g, res] : results) {
      Ctx gate = cv_where(callee, [g = g](const RawVal& r) { return calls_fn(r, g); });
      if (gate.is_empty() || res->st.is_bottom()) continue;
      out.st = state_join(out.st, state_restrict(exit_call(site, state_collect(res->st, res->v), kh()), gate));
      out.v = cv_join(out.v, cv_restrict(exit_call(site, res->v, kh()), gate));
    }
    return out;
  }

  AbsState gate(const AbsState& st, const CtxVal& v, bool truthy) const {
    if (st.is_bottom()) return {};
    return state_restrict(st, cv_where(v, truthy ? may_truthy : may_falsy));
  }

  AbsState for_bind(const AbsState& head, const CtxVal& it, FunctionId f, const std::string& name) const {
    if (head.is_bottom()) return {};
    AbsState out;
    for (const auto& e : it.entries()) {
      CtxVal elem;
      for (const auto& p : e.raw.paths) elem = cv_join(elem, head.at(p).arr);
      elem = cv_restrict(elem, e.ctx);
      if (elem.is_bottom()) continue;
      out = state_join(out, var_write(state_restrict(head, elem.support()), f, name, elem));
    }
    return out;
  }

  Cell initial_main() const {
    Payload p;
    p.dflt = CtxVal::constant(raw_null());
    RawVal any_str;
    any_str.strs = BoundedSet<std::string>::top();
    p.set("input", CtxVal::constant(any_str));
    Cell c;
    c.st.put(env_path(kMain), std::move(p));
    return c;
  }
};

LatticeOps<CsCell> cs_ops(const CsDomain& dom) {
  LatticeOps<CsCell> ops;
  ops.join = [&dom](const CsCell& a, const CsCell& b) { return dom.join(a, b); };
  ops.equal = [](const CsCell& a, const CsCell& b) { return a == b; };
  ops.widen = [&dom](const CsCell& c) { return dom.widen(c); };
  return ops;
}

}  // namespace

CsEquations cs_equations(const ProgramIndex& idx, const CsConfig& cfg) {
  auto dom = std::make_shared<CsDomain>(CsDomain{idx, cfg});
  CsEquations out;
  EquationBuilder<CsDomain> gen(*dom, idx, out.sys);
  gen.build();
  out.ops = cs_ops(*dom);
  out.domain = dom;
  return out;
}

CsAnalysis analyze_cs(const ProgramIndex& idx, const CsConfig& cfg, const SolverConfig& scfg) {
  CsDomain dom{idx, cfg};
  System<CsCell> sys;
  EquationBuilder<CsDomain> gen(dom, idx, sys);
  gen.build();
  LatticeOps<CsCell> ops = cs_ops(dom);
  auto sol = solve(sys, ops, scfg);

  CsAnalysis out;
  out.ok = sol.ok;
  out.error = sol.error;
  out.hot_vars = sol.hot_vars;
  out.evals = sol.evals;
  if (cfg.check_fixpoint) out.fixpoint = is_fixpoint(sys, ops, sol.values, &out.fixpoint_failure);
  const auto& x = sol.values;
  for (const auto& [l, var] : gen.expr_out) out.exprs[l] = x[size_t(var)];
  for (const auto& [l, var] : gen.stmt_out) out.stmts[l] = x[size_t(var)].st;
  for (size_t f = 0; f < idx.functions.size(); ++f) {
    out.fn_in.push_back(x[size_t(gen.fn_in[f])]);
    out.fn_out.push_back(x[size_t(gen.fn_out[f])]);
  }
  for (const auto& [site, info] : gen.calls) {
    auto& row = out.call_graph[site];
    const CtxVal& callee = x[size_t(info.callee)].v;
    for (FunctionId g : info.candidates) {
      Ctx c = cv_where(callee, [g](const RawVal& r) { return calls_fn(r, g); });
      if (!c.is_empty()) row.push_back({g, c});
    }
  }
  return out;
}

}  // namespace tsa
