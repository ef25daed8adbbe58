#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "tsa/solver.hpp"
#include "tsa/syntax.hpp"

namespace tsa {

// Equation layout shared by both analyses. A variable holds a Cell {st, v}: the state
// after a node and, for expressions, its value. Nodes that only forward a state reuse
// their input variable. D supplies the transfer functions.
template <class D>
class EquationBuilder {
 public:
  using Cell = typename D::Cell;
  using Val = decltype(Cell{}.v);
  using State = decltype(Cell{}.st);

  struct CallInfo {
    VarId callee = -1;  // variable holding the callee value
    std::vector<FunctionId> candidates;
  };

  EquationBuilder(D& d, const ProgramIndex& idx, System<Cell>& sys) : d_(d), idx_(idx), sys_(sys) {}

  void build() {
    size_t n = idx_.functions.size();
    fn_in.resize(n);
    fn_out.resize(n);
    for (size_t f = 0; f < n; ++f) {
      const auto& fi = idx_.functions[f];
      Cell seed = f == size_t(kMain) ? d_.initial_main() : Cell{};
      fn_in[f] = sys_.add_var("in:" + fi.name, seed, true);
      fn_out[f] = sys_.add_var("out:" + fi.name);
    }
    for (size_t f = 0; f < n; ++f) {
      const auto& fi = idx_.functions[f];
      FunctionId fid = FunctionId(f);
      VarId cur = fn_in[f];
      if (fi.body) cur = stmt(*fi.body, cur, fid);
      if (fi.result) cur = expr(*fi.result, cur, fid);
      sys_.add_eq(fn_out[f], {cur}, [cur](const std::vector<Cell>& x) { return x[size_t(cur)]; },
                  "return:" + fi.name);
    }
  }

  std::vector<VarId> fn_in, fn_out;
  std::unordered_map<LabelId, VarId> expr_out, stmt_out;
  std::unordered_map<CallSite, CallInfo> calls;

 private:
  D& d_;
  const ProgramIndex& idx_;
  System<Cell>& sys_;

  std::string tag(const char* what, LabelId l) { return std::string(what) + "@" + std::to_string(l); }

  VarId fresh(const char* what, LabelId l, bool widen = false) { return sys_.add_var(tag(what, l), Cell{}, widen); }

  VarId expr(const Expr& e, VarId in, FunctionId f) {
    VarId out = expr_inner(e, in, f);
    expr_out[e.label.id] = out;
    return out;
  }

  // Evaluates kids left to right; returns their output variables.
  std::vector<VarId> chain(const std::vector<ExprPtr>& kids, VarId& cur, FunctionId f) {
    std::vector<VarId> outs;
    for (const auto& k : kids) {
      cur = expr(*k, cur, f);
      outs.push_back(cur);
    }
    return outs;
  }

  VarId expr_inner(const Expr& e, VarId in, FunctionId f) {
    LabelId l = e.label.id;
    VarId out = fresh("e", l);
    D& d = d_;
    switch (e.kind) {
      case ExprKind::Int:
      case ExprKind::Str:
      case ExprKind::Bool:
      case ExprKind::Null: {
        const Expr* ep = &e;
        sys_.add_eq(out, {in}, [&d, ep, in](const std::vector<Cell>& x) {
          const State& st = x[size_t(in)].st;
          return Cell{st, d.constant(st, *ep)};
        }, tag("const", l));
        return out;
      }
      case ExprKind::Var: {
        std::string name = e.name;
        sys_.add_eq(out, {in}, [&d, in, f, name](const std::vector<Cell>& x) {
          const State& st = x[size_t(in)].st;
          return Cell{st, d.var_read(st, f, name)};
        }, tag("var", l));
        return out;
      }
      case ExprKind::BindClosure: {
        FunctionId g = idx_.fn(e.name);
        sys_.add_eq(out, {in}, [&d, in, f, g](const std::vector<Cell>& x) {
          const State& st = x[size_t(in)].st;
          return Cell{st, d.bind_closure(st, f, g)};
        }, tag("bind", l));
        return out;
      }
      case ExprKind::Prop: {
        VarId t = expr(*e.kids[0], in, f);
        std::string name = e.name;
        sys_.add_eq(out, {t}, [&d, t, name](const std::vector<Cell>& x) {
          const Cell& c = x[size_t(t)];
          return Cell{c.st, d.prop_read(c.st, c.v, name)};
        }, tag("prop", l));
        return out;
      }
      case ExprKind::Index: {
        VarId cur = in;
        auto o = chain(e.kids, cur, f);
        VarId t = o[0], i = o[1];
        sys_.add_eq(out, {t, i}, [&d, t, i](const std::vector<Cell>& x) {
          const State& st = x[size_t(i)].st;
          return Cell{st, d.index_read(st, x[size_t(t)].v)};
        }, tag("index", l));
        return out;
      }
      case ExprKind::AssignVar: {
        VarId r = expr(*e.kids[0], in, f);
        std::string name = e.name;
        sys_.add_eq(out, {r}, [&d, r, f, name](const std::vector<Cell>& x) {
          const Cell& c = x[size_t(r)];
          return Cell{d.var_write(c.st, f, name, c.v), c.v};
        }, tag("assign", l));
        return out;
      }
      case ExprKind::AssignProp: {
        VarId cur = in;
        auto o = chain(e.kids, cur, f);
        VarId t = o[0], r = o[1];
        std::string name = e.name;
        sys_.add_eq(out, {t, r}, [&d, t, r, name](const std::vector<Cell>& x) {
          const Cell& c = x[size_t(r)];
          return Cell{d.prop_write(c.st, x[size_t(t)].v, name, c.v), c.v};
        }, tag("setprop", l));
        return out;
      }
      case ExprKind::AssignIndex: {
        VarId cur = in;
        auto o = chain(e.kids, cur, f);
        VarId t = o[0], i = o[1], r = o[2];
        sys_.add_eq(out, {t, i, r}, [&d, t, i, r](const std::vector<Cell>& x) {
          const Cell& c = x[size_t(r)];
          return Cell{d.index_write(c.st, x[size_t(t)].v, x[size_t(i)].v, c.v), c.v};
        }, tag("setindex", l));
        return out;
      }
      case ExprKind::Add:
      case ExprKind::Sub:
      case ExprKind::Mul:
      case ExprKind::Div: {
        VarId cur = in;
        auto o = chain(e.kids, cur, f);
        VarId a = o[0], b = o[1];
        ExprKind k = e.kind;
        sys_.add_eq(out, {a, b}, [&d, a, b, k](const std::vector<Cell>& x) {
          const Cell& cb = x[size_t(b)];
          return Cell{cb.st, d.arith(k, x[size_t(a)].v, cb.v)};
        }, tag("arith", l));
        return out;
      }
      case ExprKind::ObjLit:
      case ExprKind::ArrLit: {
        VarId cur = in;
        auto o = chain(e.kids, cur, f);
        std::vector<VarId> inputs = o;
        inputs.push_back(cur);
        const Expr* ep = &e;
        sys_.add_eq(out, inputs, [&d, ep, o, cur, f](const std::vector<Cell>& x) {
          std::vector<const Val*> vals;
          for (VarId k : o) vals.push_back(&x[size_t(k)].v);
          return d.literal(x[size_t(cur)].st, f, *ep, vals);
        }, tag("literal", l));
        return out;
      }
      case ExprKind::Call: return call(e, in, f, out);
      case ExprKind::Lambda: break;
    }
    throw MalformedProgram("unexpected expression in IR program");
  }

  VarId call(const Expr& e, VarId in, FunctionId f, VarId out) {
    LabelId l = e.label.id;
    D& d = d_;
    VarId cur = in;
    auto o = chain(e.kids, cur, f);
    VarId callee = o[0];
    std::vector<VarId> args(o.begin() + 1, o.end());
    VarId last = cur;
    size_t nargs = args.size();
    CallInfo info;
    info.callee = callee;
    for (size_t g = 1; g < idx_.functions.size(); ++g)
      if (idx_.functions[g].params.size() == nargs + 1) info.candidates.push_back(FunctionId(g));
    calls[l] = info;

    std::vector<VarId> base = o;
    base.push_back(last);
    for (FunctionId g : info.candidates) {
      sys_.add_eq(fn_in[size_t(g)], base, [&d, l, f, g, callee, args, last](const std::vector<Cell>& x) {
        std::vector<const Val*> vals;
        for (VarId a : args) vals.push_back(&x[size_t(a)].v);
        return Cell{d.call_entry(l, f, g, x[size_t(callee)].v, vals, x[size_t(last)].st), Val{}};
      }, tag("enter", l) + "->" + idx_.functions[size_t(g)].name);
    }
    std::vector<VarId> inputs = {callee, last};
    for (FunctionId g : info.candidates) inputs.push_back(fn_out[size_t(g)]);
    std::vector<std::pair<FunctionId, VarId>> cands;
    for (FunctionId g : info.candidates) cands.emplace_back(g, fn_out[size_t(g)]);
    sys_.add_eq(out, inputs, [&d, l, f, callee, last, cands](const std::vector<Cell>& x) {
      std::vector<std::pair<FunctionId, const Cell*>> res;
      for (auto [g, o] : cands) res.emplace_back(g, &x[size_t(o)]);
      return d.call_result(l, f, x[size_t(callee)].v, x[size_t(last)].st, res);
    }, tag("return", l));
    return out;
  }

  VarId stmt(const Stmt& s, VarId in, FunctionId f) {
    VarId out = stmt_inner(s, in, f);
    stmt_out[s.label.id] = out;
    return out;
  }

  VarId stmt_inner(const Stmt& s, VarId in, FunctionId f) {
    LabelId l = s.label.id;
    D& d = d_;
    switch (s.kind) {
      case StmtKind::Empty: return in;
      case StmtKind::ExprStmt: return expr(*s.expr, in, f);
      case StmtKind::Seq: return stmt(*s.second, stmt(*s.first, in, f), f);
      case StmtKind::VarDecl: {
        VarId e = expr(*s.expr, in, f);
        VarId out = fresh("s", l);
        std::string name = s.name;
        sys_.add_eq(out, {e}, [&d, e, f, name](const std::vector<Cell>& x) {
          const Cell& c = x[size_t(e)];
          return Cell{d.var_write(c.st, f, name, c.v), Val{}};
        }, tag("decl", l));
        return out;
      }
      case StmtKind::If: {
        VarId c = expr(*s.expr, in, f);
        VarId t_in = fresh("then", l), e_in = fresh("else", l);
        sys_.add_eq(t_in, {c}, [&d, c](const std::vector<Cell>& x) {
          return Cell{d.gate(x[size_t(c)].st, x[size_t(c)].v, true), Val{}};
        }, tag("then", l));
        sys_.add_eq(e_in, {c}, [&d, c](const std::vector<Cell>& x) {
          return Cell{d.gate(x[size_t(c)].st, x[size_t(c)].v, false), Val{}};
        }, tag("else", l));
        VarId t_out = stmt(*s.first, t_in, f);
        VarId e_out = stmt(*s.second, e_in, f);
        VarId out = fresh("s", l);
        sys_.add_eq(out, {c, t_out}, [&d, c, t_out](const std::vector<Cell>& x) {
          return Cell{d.gate(x[size_t(t_out)].st, x[size_t(c)].v, true), Val{}};
        }, tag("endthen", l));
        sys_.add_eq(out, {c, e_out}, [&d, c, e_out](const std::vector<Cell>& x) {
          return Cell{d.gate(x[size_t(e_out)].st, x[size_t(c)].v, false), Val{}};
        }, tag("endelse", l));
        return out;
      }
      case StmtKind::While: {
        VarId head = fresh("head", l, true);
        sys_.add_eq(head, {in}, [in](const std::vector<Cell>& x) { return Cell{x[size_t(in)].st, Val{}}; },
                    tag("loopin", l));
        VarId c = expr(*s.expr, head, f);
        VarId b_in = fresh("body", l);
        sys_.add_eq(b_in, {c}, [&d, c](const std::vector<Cell>& x) {
          return Cell{d.gate(x[size_t(c)].st, x[size_t(c)].v, true), Val{}};
        }, tag("body", l));
        VarId b_out = stmt(*s.first, b_in, f);
        sys_.add_eq(head, {b_out}, [b_out](const std::vector<Cell>& x) {
          return Cell{x[size_t(b_out)].st, Val{}};
        }, tag("backedge", l));
        VarId out = fresh("s", l);
        sys_.add_eq(out, {c}, [&d, c](const std::vector<Cell>& x) {
          return Cell{d.gate(x[size_t(c)].st, x[size_t(c)].v, false), Val{}};
        }, tag("exit", l));
        return out;
      }
      case StmtKind::ForIn: {
        VarId it = expr(*s.expr, in, f);
        VarId head = fresh("head", l, true);
        sys_.add_eq(head, {it}, [it](const std::vector<Cell>& x) { return Cell{x[size_t(it)].st, Val{}}; },
                    tag("loopin", l));
        VarId b_in = fresh("body", l);
        std::string name = s.name;
        sys_.add_eq(b_in, {it, head}, [&d, it, head, f, name](const std::vector<Cell>& x) {
          return Cell{d.for_bind(x[size_t(head)].st, x[size_t(it)].v, f, name), Val{}};
        }, tag("bind", l));
        VarId b_out = stmt(*s.first, b_in, f);
        sys_.add_eq(head, {b_out}, [b_out](const std::vector<Cell>& x) {
          return Cell{x[size_t(b_out)].st, Val{}};
        }, tag("backedge", l));
        return head;
      }
      case StmtKind::FunDecl: break;
    }
    throw MalformedProgram("unexpected statement in IR program");
  }
};

}  // namespace tsa
