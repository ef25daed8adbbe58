#include "tsa/syntax.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace tsa {

ExprPtr mk_expr(ExprKind k, Label l, std::vector<ExprPtr> kids) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->label = l;
  e->kids = std::move(kids);
  return e;
}

ExprPtr mk_int(Label l, int64_t v) {
  auto e = mk_expr(ExprKind::Int, l);
  e->int_val = v;
  return e;
}

ExprPtr mk_str(Label l, std::string s) {
  auto e = mk_expr(ExprKind::Str, l);
  e->name = std::move(s);
  return e;
}

ExprPtr mk_bool(Label l, bool b) {
  auto e = mk_expr(ExprKind::Bool, l);
  e->bool_val = b;
  return e;
}

ExprPtr mk_null(Label l) { return mk_expr(ExprKind::Null, l); }

ExprPtr mk_var(Label l, std::string name) {
  auto e = mk_expr(ExprKind::Var, l);
  e->name = std::move(name);
  return e;
}

ExprPtr mk_prop(Label l, ExprPtr target, std::string name) {
  auto e = mk_expr(ExprKind::Prop, l, {std::move(target)});
  e->name = std::move(name);
  return e;
}

ExprPtr mk_assign_var(Label l, std::string name, ExprPtr rhs) {
  auto e = mk_expr(ExprKind::AssignVar, l, {std::move(rhs)});
  e->name = std::move(name);
  return e;
}

ExprPtr mk_assign_prop(Label l, ExprPtr target, std::string name, ExprPtr rhs) {
  auto e = mk_expr(ExprKind::AssignProp, l, {std::move(target), std::move(rhs)});
  e->name = std::move(name);
  return e;
}

ExprPtr mk_bind(Label l, std::string fn) {
  auto e = mk_expr(ExprKind::BindClosure, l);
  e->name = std::move(fn);
  return e;
}

StmtPtr mk_stmt(StmtKind k, Label l) {
  auto s = std::make_shared<Stmt>();
  s->kind = k;
  s->label = l;
  return s;
}

StmtPtr mk_seq(Label l, StmtPtr a, StmtPtr b) {
  auto s = mk_stmt(StmtKind::Seq, l);
  s->first = std::move(a);
  s->second = std::move(b);
  return s;
}

StmtPtr mk_var_decl(Label l, std::string name, ExprPtr init) {
  auto s = mk_stmt(StmtKind::VarDecl, l);
  s->name = std::move(name);
  s->expr = std::move(init);
  return s;
}

StmtPtr mk_expr_stmt(Label l, ExprPtr e) {
  auto s = mk_stmt(StmtKind::ExprStmt, l);
  s->expr = std::move(e);
  return s;
}

bool is_binop(ExprKind k) {
  return k == ExprKind::Add || k == ExprKind::Sub || k == ExprKind::Mul || k == ExprKind::Div;
}

const char* binop_symbol(ExprKind k) {
  switch (k) {
    case ExprKind::Add: return "+";
    case ExprKind::Sub: return "-";
    case ExprKind::Mul: return "*";
    case ExprKind::Div: return "/";
    default: return "?";
  }
}

// ---- structural equality

static bool same_ptr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return same_shape(*a, *b);
}

static bool same_ptr(const StmtPtr& a, const StmtPtr& b) {
  if (!a || !b) return !a && !b;
  return same_shape(*a, *b);
}

bool same_shape(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.int_val != b.int_val || a.bool_val != b.bool_val || a.name != b.name ||
      a.names != b.names || a.kids.size() != b.kids.size())
    return false;
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!same_ptr(a.kids[i], b.kids[i])) return false;
  return same_ptr(a.body, b.body);
}

bool same_shape(const Stmt& a, const Stmt& b) {
  return a.kind == b.kind && a.name == b.name && a.params == b.params && same_ptr(a.expr, b.expr) &&
         same_ptr(a.first, b.first) && same_ptr(a.second, b.second);
}

bool same_shape(const IrProgram& a, const IrProgram& b) {
  if (!same_ptr(a.entry, b.entry) || a.decls.size() != b.decls.size()) return false;
  for (size_t i = 0; i < a.decls.size(); ++i) {
    const auto& x = a.decls[i];
    const auto& y = b.decls[i];
    if (x.name != y.name || x.params != y.params || !same_ptr(x.body, y.body) ||
        !same_ptr(x.result, y.result))
      return false;
  }
  return true;
}

// ---- printing

namespace {

enum Prec { kAssign = 1, kAdditive = 2, kMultiplicative = 3, kPostfix = 4, kPrimary = 5 };

int prec_of(const Expr& e) {
  switch (e.kind) {
    case ExprKind::AssignVar:
    case ExprKind::AssignProp:
    case ExprKind::AssignIndex: return kAssign;
    case ExprKind::Add:
    case ExprKind::Sub: return kAdditive;
    case ExprKind::Mul:
    case ExprKind::Div: return kMultiplicative;
    case ExprKind::Prop:
    case ExprKind::Index:
    case ExprKind::Call: return kPostfix;
    default: return kPrimary;
  }
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\\\"";
    else if (c == '\\') out += "\\\\";
    else if (c == '\n') out += "\\n";
    else out += c;
  }
  return out + "\"";
}

std::string pad(int n) { return std::string(size_t(n) * 2, ' '); }

struct Printer {
  std::ostringstream out;

  void expr(const Expr& e, int need) {
    bool paren = prec_of(e) < need;
    if (paren) out << '(';
    body(e);
    if (paren) out << ')';
  }

  void body(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Int: out << e.int_val; break;
      case ExprKind::Str: out << quote(e.name); break;
      case ExprKind::Bool: out << (e.bool_val ? "true" : "false"); break;
      case ExprKind::Null: out << "null"; break;
      case ExprKind::Var: out << e.name; break;
      case ExprKind::Prop:
        expr(*e.kids[0], kPostfix);
        out << '.' << e.name;
        break;
      case ExprKind::Index:
        expr(*e.kids[0], kPostfix);
        out << '[';
        expr(*e.kids[1], kAssign);
        out << ']';
        break;
      case ExprKind::AssignVar:
        out << e.name << " = ";
        expr(*e.kids[0], kAssign);
        break;
      case ExprKind::AssignProp:
        expr(*e.kids[0], kPostfix);
        out << '.' << e.name << " = ";
        expr(*e.kids[1], kAssign);
        break;
      case ExprKind::AssignIndex:
        expr(*e.kids[0], kPostfix);
        out << '[';
        expr(*e.kids[1], kAssign);
        out << "] = ";
        expr(*e.kids[2], kAssign);
        break;
      case ExprKind::Add:
      case ExprKind::Sub:
      case ExprKind::Mul:
      case ExprKind::Div: {
        int p = prec_of(e);
        expr(*e.kids[0], p);
        out << ' ' << binop_symbol(e.kind) << ' ';
        expr(*e.kids[1], p + 1);
        break;
      }
      case ExprKind::Call:
        expr(*e.kids[0], kPostfix);
        out << '(';
        for (size_t i = 1; i < e.kids.size(); ++i) {
          if (i > 1) out << ", ";
          expr(*e.kids[i], kAssign);
        }
        out << ')';
        break;
      case ExprKind::ObjLit:
        out << '{';
        for (size_t i = 0; i < e.kids.size(); ++i) {
          if (i) out << ", ";
          out << e.names[i] << ": ";
          expr(*e.kids[i], kAssign);
        }
        out << '}';
        break;
      case ExprKind::ArrLit:
        out << '[';
        for (size_t i = 0; i < e.kids.size(); ++i) {
          if (i) out << ", ";
          expr(*e.kids[i], kAssign);
        }
        out << ']';
        break;
      case ExprKind::Lambda:
        out << "function(";
        params(e.names);
        out << ") {";
        fn_body(e.body.get(), *e.kids[0], depth + 1);
        out << pad(depth) << '}';
        break;
      case ExprKind::BindClosure: out << "bind-closure " << e.name; break;
    }
  }

  int depth = 0;

  void params(const std::vector<std::string>& ps) {
    for (size_t i = 0; i < ps.size(); ++i) out << (i ? ", " : "") << ps[i];
  }

  void fn_body(const Stmt* s, const Expr& result, int d) {
    out << '\n';
    int saved = depth;
    depth = d;
    if (s && s->kind != StmtKind::Empty) stmt(*s);
    out << pad(d) << "return ";
    expr(result, kAssign);
    out << '\n';
    depth = saved;
  }

  void block(const Stmt& s) {
    out << "{\n";
    ++depth;
    if (s.kind != StmtKind::Empty) stmt(s);
    --depth;
    out << pad(depth) << '}';
  }

  // Prints s as a sequence of lines at the current depth, each ending in '\n'.
  void stmt(const Stmt& s) {
    if (s.kind == StmtKind::Seq) {
      stmt(*s.first);
      stmt(*s.second);
      return;
    }
    out << pad(depth);
    switch (s.kind) {
      case StmtKind::Empty: out << ';'; break;
      case StmtKind::ExprStmt: expr(*s.expr, kAssign); break;
      case StmtKind::VarDecl:
        out << "var " << s.name << " = ";
        expr(*s.expr, kAssign);
        break;
      case StmtKind::If:
        out << "if (";
        expr(*s.expr, kAssign);
        out << ") ";
        block(*s.first);
        out << " else ";
        block(*s.second);
        break;
      case StmtKind::ForIn:
        out << "for (var " << s.name << " in ";
        expr(*s.expr, kAssign);
        out << ") ";
        block(*s.first);
        break;
      case StmtKind::While:
        out << "while (";
        expr(*s.expr, kAssign);
        out << ") ";
        block(*s.first);
        break;
      case StmtKind::FunDecl:
        out << "function " << s.name << '(';
        params(s.params);
        out << ") {";
        fn_body(s.first.get(), *s.expr, depth + 1);
        out << pad(depth) << '}';
        break;
      case StmtKind::Seq: break;
    }
    out << '\n';
  }
};

}  // namespace

std::string print_expr(const Expr& e) {
  Printer p;
  p.expr(e, kAssign);
  return p.out.str();
}

std::string print_stmt(const Stmt& s, int indent) {
  Printer p;
  p.depth = indent;
  if (s.kind == StmtKind::Empty) return "";
  p.stmt(s);
  return p.out.str();
}

std::string print_ir(const IrProgram& prog) {
  Printer p;
  for (const auto& d : prog.decls) {
    p.out << "function " << d.name << '(';
    p.params(d.params);
    p.out << ") {";
    p.fn_body(d.body.get(), *d.result, 1);
    p.out << "}\n";
  }
  if (prog.entry && prog.entry->kind != StmtKind::Empty) p.stmt(*prog.entry);
  return p.out.str();
}

// ---- traversal

static void walk_expr(const Expr& e, const std::function<void(const Stmt*, const Expr*)>& fn);

void walk(const Stmt& s, const std::function<void(const Stmt*, const Expr*)>& fn) {
  fn(&s, nullptr);
  if (s.kind == StmtKind::FunDecl) {
    if (s.first) walk(*s.first, fn);
    if (s.expr) walk_expr(*s.expr, fn);
    return;
  }
  if (s.expr) walk_expr(*s.expr, fn);
  if (s.first) walk(*s.first, fn);
  if (s.second) walk(*s.second, fn);
}

static void walk_expr(const Expr& e, const std::function<void(const Stmt*, const Expr*)>& fn) {
  fn(nullptr, &e);
  if (e.kind == ExprKind::Lambda) {
    if (e.body) walk(*e.body, fn);
    walk_expr(*e.kids[0], fn);
    return;
  }
  for (const auto& k : e.kids) walk_expr(*k, fn);
}

static void hoist_into(const Stmt& s, std::vector<std::string>& out) {
  auto add = [&](const std::string& n) {
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  };
  switch (s.kind) {
    case StmtKind::Seq:
    case StmtKind::If:
      hoist_into(*s.first, out);
      hoist_into(*s.second, out);
      break;
    case StmtKind::VarDecl:
    case StmtKind::FunDecl: add(s.name); break;
    case StmtKind::ForIn:
      hoist_into(*s.first, out);
      add(s.name);
      break;
    case StmtKind::While: hoist_into(*s.first, out); break;
    default: break;
  }
}

std::vector<std::string> hoisted_names(const Stmt& s) {
  std::vector<std::string> out;
  hoist_into(s, out);
  return out;
}

// ---- index

FunctionId ProgramIndex::fn(const std::string& name) const {
  auto it = fn_by_name.find(name);
  return it == fn_by_name.end() ? -1 : it->second;
}

bool ProgramIndex::loop(LabelId l) const {
  auto it = in_loop.find(l);
  return it != in_loop.end() && it->second;
}

namespace {

struct Indexer {
  ProgramIndex& idx;
  FunctionId fn = kMain;
  std::set<LabelId> seen;

  void note(LabelId l, bool loop) {
    if (!seen.insert(l).second) throw MalformedProgram("duplicate label " + std::to_string(l));
    idx.enclosing[l] = fn;
    idx.in_loop[l] = loop;
  }

  void expr(const Expr& e, bool loop) {
    note(e.label.id, loop);
    idx.exprs.push_back(e.label.id);
    idx.expr_at[e.label.id] = &e;
    switch (e.kind) {
      case ExprKind::Lambda: throw MalformedProgram("lambda in IR program");
      case ExprKind::Call:
        idx.call_sites.push_back(e.label.id);
        idx.functions[size_t(fn)].call_sites.push_back(e.label.id);
        break;
      case ExprKind::ObjLit:
      case ExprKind::ArrLit: idx.literal_sites.push_back(e.label.id); break;
      case ExprKind::BindClosure:
        if (idx.fn(e.name) <= kMain)
          throw MalformedProgram("bind-closure of undeclared function " + e.name);
        break;
      default: break;
    }
    for (const auto& k : e.kids) expr(*k, loop);
  }

  void stmt(const Stmt& s, bool loop) {
    note(s.label.id, loop);
    idx.stmts.push_back(s.label.id);
    idx.stmt_at[s.label.id] = &s;
    switch (s.kind) {
      case StmtKind::FunDecl: throw MalformedProgram("function declaration in IR program");
      case StmtKind::While:
        expr(*s.expr, true);
        stmt(*s.first, true);
        return;
      case StmtKind::ForIn:
        expr(*s.expr, loop);
        stmt(*s.first, true);
        return;
      default: break;
    }
    if (s.expr) expr(*s.expr, loop);
    if (s.first) stmt(*s.first, loop);
    if (s.second) stmt(*s.second, loop);
  }
};

}  // namespace

ProgramIndex build_index(const IrProgram& p) {
  ProgramIndex idx;
  FunctionInfo main_info;
  main_info.name = "main";
  main_info.params = {"input"};
  main_info.body = p.entry.get();
  idx.functions.push_back(main_info);
  idx.fn_by_name["main"] = kMain;
  for (const auto& d : p.decls) {
    if (d.name == "main") throw MalformedProgram("function may not be named main");
    if (idx.fn_by_name.count(d.name)) throw MalformedProgram("duplicate declaration " + d.name);
    std::set<std::string> ps(d.params.begin(), d.params.end());
    if (ps.size() != d.params.size()) throw MalformedProgram("duplicate parameter in " + d.name);
    FunctionInfo fi;
    fi.name = d.name;
    fi.params = d.params;
    fi.body = d.body.get();
    fi.result = d.result.get();
    idx.fn_by_name[d.name] = FunctionId(idx.functions.size());
    idx.functions.push_back(fi);
  }
  for (auto& fi : idx.functions) {
    if (!fi.body) continue;
    for (const auto& n : hoisted_names(*fi.body))
      if (std::find(fi.params.begin(), fi.params.end(), n) == fi.params.end())
        fi.locals.push_back(n);
  }
  Indexer ix{idx, kMain, {}};
  for (size_t f = 0; f < idx.functions.size(); ++f) {
    ix.fn = FunctionId(f);
    if (f == kMain) {
      if (p.entry) ix.stmt(*p.entry, false);
      continue;
    }
    const auto& d = p.decls[f - 1];
    ix.note(d.label.id, false);
    if (d.body) ix.stmt(*d.body, false);
    ix.expr(*d.result, false);
  }
  return idx;
}

}  // namespace tsa
