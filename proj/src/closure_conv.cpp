#include "tsa/closure_conv.hpp"

#include <algorithm>
#include <map>

namespace tsa {

namespace {

const char* const kClosure = "closure";

void collect_bv(const Stmt& s, BoundVarSet& out) {
  switch (s.kind) {
    case StmtKind::Seq:
    case StmtKind::If:
      collect_bv(*s.first, out);
      collect_bv(*s.second, out);
      break;
    case StmtKind::VarDecl:
    case StmtKind::FunDecl: out.insert(s.name); break;
    case StmtKind::ForIn:
      out.insert(s.name);
      collect_bv(*s.first, out);
      break;
    case StmtKind::While: collect_bv(*s.first, out); break;
    default: break;
  }
}

BoundVarSet shrink(const BoundVarSet& bv, const std::vector<std::string>& params, const Stmt* body) {
  BoundVarSet out = bv;
  for (const auto& p : params) out.erase(p);
  if (body)
    for (const auto& n : bound_vars(*body)) out.erase(n);
  return out;
}

ExprPtr copy_node(const Expr& e) { return std::make_shared<Expr>(e); }
StmtPtr copy_node(const Stmt& s) { return std::make_shared<Stmt>(s); }

}  // namespace

BoundVarSet bound_vars(const Stmt& s) {
  BoundVarSet out;
  collect_bv(s, out);
  return out;
}

ExprPtr rewrite_expr(const ExprPtr& e, const BoundVarSet& bv, LabelGen& lg) {
  auto closure_var = [&](Span sp) { return mk_var(lg.fresh(sp), kClosure); };
  switch (e->kind) {
    case ExprKind::Var:
      if (bv.count(e->name)) return mk_prop(e->label, closure_var(e->label.span), e->name);
      return copy_node(*e);
    case ExprKind::AssignVar: {
      auto rhs = rewrite_expr(e->kids[0], bv, lg);
      if (bv.count(e->name)) return mk_assign_prop(e->label, closure_var(e->label.span), e->name, rhs);
      return mk_assign_var(e->label, e->name, rhs);
    }
    case ExprKind::Lambda: {
      auto out = copy_node(*e);
      auto inner = shrink(bv, e->names, e->body.get());
      out->body = e->body ? rewrite_stmt(e->body, inner, lg) : nullptr;
      out->kids = {rewrite_expr(e->kids[0], inner, lg)};
      return out;
    }
    default: {
      auto out = copy_node(*e);
      for (auto& k : out->kids) k = rewrite_expr(k, bv, lg);
      return out;
    }
  }
}

StmtPtr rewrite_stmt(const StmtPtr& s, const BoundVarSet& bv, LabelGen& lg) {
  auto out = copy_node(*s);
  if (s->kind == StmtKind::FunDecl) {
    auto inner = shrink(bv, s->params, s->first.get());
    out->first = rewrite_stmt(s->first, inner, lg);
    out->expr = rewrite_expr(s->expr, inner, lg);
    return out;
  }
  if (s->expr) out->expr = rewrite_expr(s->expr, bv, lg);
  if (s->first) out->first = rewrite_stmt(s->first, bv, lg);
  if (s->second) out->second = rewrite_stmt(s->second, bv, lg);
  return out;
}

namespace {

class Converter {
 public:
  explicit Converter(int next_label) { lg_.next = next_label; }

  IrProgram run(const SurfaceProgram& p) {
    check(*p.body);
    auto bv = bound_vars(*p.body);
    bv.insert("input");
    IrProgram out;
    out.entry = stmt(p.body, bv);
    out.decls = std::move(decls_);
    out.next_label = lg_.next;
    out.source = p.source;
    return out;
  }

 private:
  LabelGen lg_;
  std::vector<IrDecl> decls_;
  std::set<std::string> used_ = {"main"};
  std::set<std::string> globals_;
  int lambda_counter_ = 0;

  std::string claim(const std::string& base) {
    if (used_.insert(base).second) return base;
    for (int k = 1;; ++k) {
      std::string n = base + "$" + std::to_string(k);
      if (used_.insert(n).second) return n;
    }
  }

  void reserve_global_names(const Stmt& s) {
    if (s.kind == StmtKind::Seq) {
      reserve_global_names(*s.first);
      reserve_global_names(*s.second);
    } else if (s.kind == StmtKind::FunDecl) {
      globals_.insert(s.name);
    }
  }

  void check(const Stmt& top) {
    reserve_global_names(top);
    // top-level function declarations keep their own name when possible
    for (const auto& g : globals_) used_.insert(g);
    auto bad = [&](const std::string& n, bool decl_itself) {
      if (n == kClosure) throw MalformedProgram("'closure' is reserved");
      if (!decl_itself && globals_.count(n))
        throw MalformedProgram("'" + n + "' shadows a global function declaration");
    };
    walk(top, [&](const Stmt* s, const Expr* e) {
      if (s) {
        if (s->kind == StmtKind::VarDecl || s->kind == StmtKind::ForIn) bad(s->name, false);
        if (s->kind == StmtKind::FunDecl) {
          bad(s->name, true);
          for (const auto& p : s->params) bad(p, false);
        }
      } else if (e->kind == ExprKind::Lambda) {
        for (const auto& p : e->names) bad(p, false);
      } else if ((e->kind == ExprKind::Var || e->kind == ExprKind::AssignVar) && e->name == kClosure) {
        throw MalformedProgram("'closure' is reserved");
      }
    });
    // a nested declaration reusing a global name would shadow it as well
    std::map<std::string, int> fun_decls;
    walk(top, [&](const Stmt* s, const Expr*) {
      if (s && s->kind == StmtKind::FunDecl) ++fun_decls[s->name];
    });
    for (const auto& g : globals_)
      if (fun_decls[g] > 1) throw MalformedProgram("'" + g + "' shadows a global function declaration");
  }

  // Shared by the FunDecl and lambda cases of CC_S / CC_E.
  void function(const std::string& decl_name, const std::vector<std::string>& params, const StmtPtr& body,
                const ExprPtr& result, const BoundVarSet& bv, Span span) {
    BoundVarSet inner(params.begin(), params.end());
    for (const auto& n : bound_vars(*body)) inner.insert(n);
    BoundVarSet bv1;
    for (const auto& n : bv)
      if (!inner.count(n)) bv1.insert(n);
    auto s1 = rewrite_stmt(body, bv1, lg_);
    auto e1 = rewrite_expr(result, bv1, lg_);
    BoundVarSet bv2 = bv;
    bv2.insert(inner.begin(), inner.end());
    bv2.insert(kClosure);
    IrDecl d;
    d.name = decl_name;
    d.label = lg_.fresh(span);
    d.params.push_back(kClosure);
    d.params.insert(d.params.end(), params.begin(), params.end());
    d.body = stmt(s1, bv2);
    d.result = expr(e1, bv2);
    decls_.push_back(std::move(d));
  }

  StmtPtr stmt(const StmtPtr& s, const BoundVarSet& bv) {
    if (s->kind == StmtKind::FunDecl) {
      std::string decl = globals_.count(s->name) && s->name != "main" ? s->name : claim(s->name);
      function(decl, s->params, s->first, s->expr, bv, s->label.span);
      return mk_var_decl(s->label, s->name, mk_bind(lg_.fresh(s->label.span), decl));
    }
    auto out = copy_node(*s);
    if (s->expr) out->expr = expr(s->expr, bv);
    if (s->first) out->first = stmt(s->first, bv);
    if (s->second) out->second = stmt(s->second, bv);
    return out;
  }

  ExprPtr expr(const ExprPtr& e, const BoundVarSet& bv) {
    if (e->kind == ExprKind::Lambda) {
      std::string decl = claim("fn$" + std::to_string(++lambda_counter_));
      function(decl, e->names, e->body, e->kids[0], bv, e->label.span);
      return mk_bind(e->label, decl);
    }
    auto out = copy_node(*e);
    for (auto& k : out->kids) k = expr(k, bv);
    return out;
  }
};

StmtPtr seq_of(std::vector<StmtPtr> items, LabelGen& lg) {
  items.erase(std::remove_if(items.begin(), items.end(),
                             [](const StmtPtr& s) { return s->kind == StmtKind::Empty; }),
              items.end());
  if (items.empty()) return mk_stmt(StmtKind::Empty, lg.fresh());
  StmtPtr acc = items.back();
  for (size_t i = items.size() - 1; i-- > 0;) acc = mk_seq(lg.fresh(items[i]->label.span), items[i], acc);
  return acc;
}

class LoopExtractor {
 public:
  explicit LoopExtractor(LabelGen& lg) : lg_(lg) {}

  StmtPtr stmt(const StmtPtr& s) {
    switch (s->kind) {
      case StmtKind::While:
      case StmtKind::ForIn: {
        auto body = stmt(s->first);
        auto names = bound_vars(*body);
        auto out = copy_node(*s);
        out->expr = expr(s->expr);
        out->first = wrap(undeclare(body), s->label.span);
        std::vector<StmtPtr> items;
        for (const auto& n : names) {
          if (s->kind == StmtKind::ForIn && n == s->name) continue;
          Span sp = s->label.span;
          items.push_back(mk_var_decl(lg_.fresh(sp), n, mk_var(lg_.fresh(sp), n)));
        }
        items.push_back(out);
        return seq_of(items, lg_);
      }
      case StmtKind::FunDecl: {
        auto out = copy_node(*s);
        out->first = stmt(s->first);
        out->expr = expr(s->expr);
        return out;
      }
      default: {
        auto out = copy_node(*s);
        if (s->expr) out->expr = expr(s->expr);
        if (s->first) out->first = stmt(s->first);
        if (s->second) out->second = stmt(s->second);
        return out;
      }
    }
  }

 private:
  LabelGen& lg_;
  int renamed_ = 0;

  ExprPtr expr(const ExprPtr& e) {
    auto out = copy_node(*e);
    if (e->kind == ExprKind::Lambda) out->body = stmt(e->body);
    for (auto& k : out->kids) k = expr(k);
    return out;
  }

  // var x = e  ->  x = e, outside nested functions; declarations stay in the enclosing scope
  StmtPtr undeclare(const StmtPtr& s) {
    switch (s->kind) {
      case StmtKind::VarDecl:
        return mk_expr_stmt(s->label, mk_assign_var(lg_.fresh(s->label.span), s->name, s->expr));
      case StmtKind::FunDecl: {
        auto fn = mk_expr(ExprKind::Lambda, lg_.fresh(s->label.span), {s->expr});
        fn->names = s->params;
        fn->body = s->first;
        return mk_expr_stmt(s->label, mk_assign_var(lg_.fresh(s->label.span), s->name, fn));
      }
      case StmtKind::ForIn: {
        Span sp = s->label.span;
        auto out = copy_node(*s);
        out->name = s->name + "$" + std::to_string(++renamed_);
        auto bind = mk_expr_stmt(lg_.fresh(sp), mk_assign_var(lg_.fresh(sp), s->name, mk_var(lg_.fresh(sp), out->name)));
        out->first = mk_seq(lg_.fresh(sp), bind, undeclare(s->first));
        return out;
      }
      case StmtKind::Seq:
      case StmtKind::If: {
        auto out = copy_node(*s);
        out->first = undeclare(s->first);
        out->second = undeclare(s->second);
        return out;
      }
      case StmtKind::While: {
        auto out = copy_node(*s);
        out->first = undeclare(s->first);
        return out;
      }
      default: return s;
    }
  }

  StmtPtr wrap(const StmtPtr& body, Span sp) {
    auto fn = mk_expr(ExprKind::Lambda, lg_.fresh(sp), {mk_null(lg_.fresh(sp))});
    fn->body = body;
    auto call = mk_expr(ExprKind::Call, lg_.fresh(sp), {fn});
    return mk_expr_stmt(lg_.fresh(sp), call);
  }
};

}  // namespace

IrProgram closure_convert(const SurfaceProgram& p) {
  Converter c(p.next_label);
  return c.run(p);
}

SurfaceProgram extract_loops(const SurfaceProgram& p) {
  LabelGen lg{p.next_label};
  LoopExtractor x(lg);
  SurfaceProgram out;
  out.body = x.stmt(p.body);
  out.next_label = lg.next;
  out.source = p.source;
  return out;
}

}  // namespace tsa
