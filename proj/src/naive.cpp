#include "tsa/naive.hpp"

#include <set>

#include "tsa/csa.hpp"
#include "tsa/gen.hpp"

namespace tsa {

const RawVal& NaiveBox::get(const std::string& id) const {
  auto it = fields.find(id);
  return it == fields.end() ? dflt : it->second;
}

namespace {

NaiveBox box_join(const NaiveBox& a, const NaiveBox& b) {
  NaiveBox out;
  out.dflt = raw_join(a.dflt, b.dflt);
  out.arr = raw_join(a.arr, b.arr);
  std::set<std::string> keys;
  for (const auto& kv : a.fields) keys.insert(kv.first);
  for (const auto& kv : b.fields) keys.insert(kv.first);
  for (const auto& k : keys) {
    RawVal v = raw_join(a.get(k), b.get(k));
    if (!(v == out.dflt)) out.fields[k] = std::move(v);
  }
  return out;
}

bool box_leq(const NaiveBox& a, const NaiveBox& b) {
  if (!raw_leq(a.dflt, b.dflt) || !raw_leq(a.arr, b.arr)) return false;
  for (const auto& kv : a.fields)
    if (!raw_leq(kv.second, b.get(kv.first))) return false;
  for (const auto& kv : b.fields)
    if (!a.fields.count(kv.first) && !raw_leq(a.dflt, kv.second)) return false;
  return true;
}

void box_set(NaiveBox& b, const std::string& id, RawVal v) {
  if (v == b.dflt) b.fields.erase(id);
  else b.fields[id] = std::move(v);
}

}  // namespace

NaiveState naive_join(const NaiveState& a, const NaiveState& b) {
  if (!b.live) return a;
  if (!a.live) return b;
  NaiveState out = a;
  for (const auto& [k, v] : b.vars) {
    auto& slot = out.vars[k];
    slot = raw_join(slot, v);
  }
  for (const auto& [k, v] : b.boxes) {
    auto it = out.boxes.find(k);
    if (it == out.boxes.end()) out.boxes.emplace(k, v);
    else it->second = box_join(it->second, v);
  }
  return out;
}

bool naive_leq(const NaiveState& a, const NaiveState& b) {
  if (!a.live) return true;
  if (!b.live) return false;
  for (const auto& [k, v] : a.vars) {
    auto it = b.vars.find(k);
    if (!raw_leq(v, it == b.vars.end() ? RawVal{} : it->second)) return false;
  }
  for (const auto& [k, v] : a.boxes) {
    auto it = b.boxes.find(k);
    if (!box_leq(v, it == b.boxes.end() ? NaiveBox{} : it->second)) return false;
  }
  return true;
}

namespace {

const RawVal& var_of(const NaiveState& st, FunctionId f, const std::string& name) {
  static const RawVal bottom;
  auto it = st.vars.find({f, name});
  return it == st.vars.end() ? bottom : it->second;
}

void join_var(NaiveState& st, FunctionId f, const std::string& name, const RawVal& v) {
  auto& slot = st.vars[{f, name}];
  slot = raw_join(slot, v);
}

struct NaiveDomain {
  using Cell = NaiveCell;

  const ProgramIndex& idx;
  NaiveConfig cfg;

  Cell join(const Cell& a, const Cell& b) const { return {naive_join(a.st, b.st), raw_join(a.v, b.v)}; }

  RawVal constant(const NaiveState& st, const Expr& e) const {
    if (!st.live) return {};
    switch (e.kind) {
      case ExprKind::Int: return raw_int(e.int_val, cfg.set_bound);
      case ExprKind::Str: return raw_str(e.name, cfg.set_bound);
      case ExprKind::Bool: return raw_bool(e.bool_val);
      default: return raw_null();
    }
  }

  RawVal var_read(const NaiveState& st, FunctionId f, const std::string& name) const { return var_of(st, f, name); }

  NaiveState var_write(const NaiveState& st, FunctionId f, const std::string& name, const RawVal& v) const {
    if (!st.live) return {};
    NaiveState out = st;
    if (f == kMain) out.vars[{f, name}] = v;
    else join_var(out, f, name, v);
    return out;
  }

  RawVal prop_read(const NaiveState& st, const RawVal& t, const std::string& name) const {
    RawVal acc;
    for (const auto& p : t.paths) {
      if (p.site.kind == AllocSite::Kind::Env) {
        acc = raw_join(acc, var_of(st, p.site.id, name));
      } else {
        auto it = st.boxes.find(p.site.id);
        if (it != st.boxes.end()) acc = raw_join(acc, it->second.get(name));
      }
    }
    return acc;
  }

  RawVal index_read(const NaiveState& st, const RawVal& t) const {
    RawVal acc;
    for (const auto& p : t.paths) {
      if (p.site.kind != AllocSite::Kind::Literal) continue;
      auto it = st.boxes.find(p.site.id);
      if (it != st.boxes.end()) acc = raw_join(acc, it->second.arr);
    }
    return acc;
  }

  NaiveState prop_write(const NaiveState& st, const RawVal& t, const std::string& name, const RawVal& v) const {
    if (!st.live) return {};
    NaiveState out = st;
    if (t.paths.size() == 1 && t.paths[0] == env_path(kMain)) {
      out.vars[{kMain, name}] = v;
      return out;
    }
    for (const auto& p : t.paths) {
      if (p.site.kind == AllocSite::Kind::Env) {
        join_var(out, p.site.id, name, v);
      } else {
        NaiveBox& b = out.boxes[p.site.id];
        box_set(b, name, raw_join(b.get(name), v));
      }
    }
    return out;
  }

  NaiveState index_write(const NaiveState& st, const RawVal& t, const RawVal&, const RawVal& v) const {
    if (!st.live) return {};
    NaiveState out = st;
    for (const auto& p : t.paths) {
      if (p.site.kind != AllocSite::Kind::Literal) continue;
      NaiveBox& b = out.boxes[p.site.id];
      b.arr = raw_join(b.arr, v);
    }
    return out;
  }

  RawVal arith(ExprKind k, const RawVal& a, const RawVal& b) const {
    switch (k) {
      case ExprKind::Add: return raw_add(a, b);
      case ExprKind::Sub: return raw_sub(a, b);
      case ExprKind::Mul: return raw_mul(a, b);
      default: return raw_div(a, b);
    }
  }

  Cell literal(const NaiveState& st, FunctionId, const Expr& e, const std::vector<const RawVal*>& vals) const {
    if (!st.live) return {};
    NaiveBox fresh;
    if (e.kind == ExprKind::ObjLit) {
      fresh.dflt = raw_null();
      for (size_t i = 0; i < vals.size(); ++i) box_set(fresh, e.names[i], *vals[i]);
    } else {
      for (const RawVal* v : vals) fresh.arr = raw_join(fresh.arr, *v);
    }
    NaiveState out = st;
    auto it = out.boxes.find(e.label.id);
    if (it == out.boxes.end()) out.boxes.emplace(e.label.id, std::move(fresh));
    else it->second = box_join(it->second, fresh);
    return {std::move(out), raw_path(literal_path(e.label.id))};
  }

  RawVal bind_closure(const NaiveState& st, FunctionId f, FunctionId g) const {
    if (!st.live) return {};
    return raw_fun(env_path(f), g);
  }

  NaiveState call_entry(CallSite, FunctionId, FunctionId g, const RawVal& callee,
                        const std::vector<const RawVal*>& args, const NaiveState& st) const {
    if (!st.live) return {};
    RawVal closures;
    for (const auto& fr : callee.funs)
      if (fr.fn == g) closures = raw_join(closures, raw_path(fr.closure));
    if (closures.is_bottom()) return {};
    const FunctionInfo& gi = idx.info(g);
    NaiveState out = st;
    join_var(out, g, gi.params[0], closures);
    for (size_t i = 0; i < args.size(); ++i) join_var(out, g, gi.params[i + 1], *args[i]);
    for (const auto& l : gi.locals) join_var(out, g, l, raw_null());
    return out;
  }

  Cell call_result(CallSite, FunctionId, const RawVal& callee, const NaiveState& st,
                   const std::vector<std::pair<FunctionId, const Cell*>>& results) const {
    if (!st.live) return {};
    Cell out;
    for (const auto& [g, res] : results) {
      bool called = false;
      for (const auto& fr : callee.funs) called = called || fr.fn == g;
      if (!called) continue;
      out.st = naive_join(out.st, res->st);
      out.v = raw_join(out.v, res->v);
    }
    return out;
  }

  NaiveState gate(const NaiveState& st, const RawVal& v, bool truthy) const {
    if (!st.live) return {};
    return (truthy ? may_truthy(v) : may_falsy(v)) ? st : NaiveState{};
  }

  NaiveState for_bind(const NaiveState& head, const RawVal& it, FunctionId f, const std::string& name) const {
    if (!head.live) return {};
    RawVal elem = index_read(head, it);
    if (elem.is_bottom()) return {};
    return var_write(head, f, name, elem);
  }

  Cell initial_main() const {
    Cell c;
    c.st.live = true;
    RawVal any_str;
    any_str.strs = BoundedSet<std::string>::top();
    for (const auto& l : idx.info(kMain).locals) c.st.vars[{kMain, l}] = raw_null();
    c.st.vars[{kMain, "input"}] = any_str;
    return c;
  }
};

LatticeOps<NaiveCell> naive_ops(const NaiveDomain& dom) {
  LatticeOps<NaiveCell> ops;
  ops.join = [&dom](const NaiveCell& a, const NaiveCell& b) { return dom.join(a, b); };
  ops.equal = [](const NaiveCell& a, const NaiveCell& b) { return a == b; };
  return ops;
}

}  // namespace

NaiveEquations naive_equations(const ProgramIndex& idx, const NaiveConfig& cfg) {
  auto dom = std::make_shared<NaiveDomain>(NaiveDomain{idx, cfg});
  NaiveEquations out;
  EquationBuilder<NaiveDomain> gen(*dom, idx, out.sys);
  gen.build();
  out.ops = naive_ops(*dom);
  out.domain = dom;
  return out;
}

NaiveAnalysis analyze_naive(const ProgramIndex& idx, const NaiveConfig& cfg, const SolverConfig& scfg) {
  NaiveDomain dom{idx, cfg};
  System<NaiveCell> sys;
  EquationBuilder<NaiveDomain> gen(dom, idx, sys);
  gen.build();
  LatticeOps<NaiveCell> ops = naive_ops(dom);
  auto sol = solve(sys, ops, scfg);

  NaiveAnalysis out;
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
    const RawVal& callee = x[size_t(info.callee)].v;
    std::set<FunctionId> seen;
    for (const auto& fr : callee.funs) {
      if (!seen.insert(fr.fn).second) continue;
      bool ok = std::find(info.candidates.begin(), info.candidates.end(), fr.fn) != info.candidates.end();
      if (ok) row.push_back(fr.fn);
      else
        out.diagnostics.push_back("call site " + std::to_string(site) + ": " + idx.info(fr.fn).name +
                                  " has a different arity");
    }
  }
  return out;
}

}  // namespace tsa
