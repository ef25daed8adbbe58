#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace tsa {

struct Span {
  uint32_t start = 0;
  uint32_t end = 0;
};

using LabelId = int;
using CallSite = LabelId;

struct Label {
  LabelId id = -1;
  Span span;
};

// Labels come from one counter per program; conversion passes keep drawing from it.
struct LabelGen {
  int next = 0;
  Label fresh(Span s = {}) { return Label{next++, s}; }
};

enum class ExprKind {
  Int, Str, Bool, Null,
  Var, Prop, Index,
  AssignVar, AssignProp, AssignIndex,
  Add, Sub, Mul, Div,
  Call, ObjLit, ArrLit,
  Lambda,       // surface only
  BindClosure,  // IR only
};

enum class StmtKind { Empty, ExprStmt, Seq, VarDecl, If, ForIn, While, FunDecl };

struct Expr;
struct Stmt;
using ExprPtr = std::shared_ptr<Expr>;
using StmtPtr = std::shared_ptr<Stmt>;

// kids layout by kind:
//   Prop [target]  Index [target, index]  AssignVar [rhs]
//   AssignProp [target, rhs]  AssignIndex [target, index, rhs]
//   Add..Div [lhs, rhs]  Call [callee, args...]
//   ObjLit values (keys in names)  ArrLit elems  Lambda [result] (params in names)
struct Expr {
  ExprKind kind = ExprKind::Null;
  Label label;
  int64_t int_val = 0;
  bool bool_val = false;
  std::string name;  // string literal text, variable/property name, bind-closure target
  std::vector<ExprPtr> kids;
  std::vector<std::string> names;
  StmtPtr body;
};

// first/second: Seq parts, If branches, loop body (first), FunDecl body (first).
// expr: ExprStmt, VarDecl init, If/While condition, ForIn iterable, FunDecl result.
struct Stmt {
  StmtKind kind = StmtKind::Empty;
  Label label;
  std::string name;
  ExprPtr expr;
  StmtPtr first, second;
  std::vector<std::string> params;
};

struct SurfaceProgram {
  StmtPtr body;
  int next_label = 0;
  std::string source;
};

struct IrDecl {
  std::string name;
  std::vector<std::string> params;
  StmtPtr body;
  ExprPtr result;
  Label label;
};

struct IrProgram {
  StmtPtr entry;
  std::vector<IrDecl> decls;
  int next_label = 0;
  std::string source;
};

struct MalformedProgram : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// builders
ExprPtr mk_expr(ExprKind k, Label l, std::vector<ExprPtr> kids = {});
ExprPtr mk_int(Label l, int64_t v);
ExprPtr mk_str(Label l, std::string s);
ExprPtr mk_bool(Label l, bool b);
ExprPtr mk_null(Label l);
ExprPtr mk_var(Label l, std::string name);
ExprPtr mk_prop(Label l, ExprPtr target, std::string name);
ExprPtr mk_assign_var(Label l, std::string name, ExprPtr rhs);
ExprPtr mk_assign_prop(Label l, ExprPtr target, std::string name, ExprPtr rhs);
ExprPtr mk_bind(Label l, std::string fn);
StmtPtr mk_stmt(StmtKind k, Label l);
StmtPtr mk_seq(Label l, StmtPtr a, StmtPtr b);
StmtPtr mk_var_decl(Label l, std::string name, ExprPtr init);
StmtPtr mk_expr_stmt(Label l, ExprPtr e);

bool is_binop(ExprKind k);
const char* binop_symbol(ExprKind k);

// Structural equality ignoring labels and spans.
bool same_shape(const Expr& a, const Expr& b);
bool same_shape(const Stmt& a, const Stmt& b);
bool same_shape(const IrProgram& a, const IrProgram& b);

std::string print_expr(const Expr& e);
std::string print_stmt(const Stmt& s, int indent = 0);
std::string print_ir(const IrProgram& p);

// Pre-order visit of every node, nested function bodies included.
void walk(const Stmt& s, const std::function<void(const Stmt*, const Expr*)>& fn);

using FunctionId = int;
constexpr FunctionId kMain = 0;

struct FunctionInfo {
  std::string name;
  std::vector<std::string> params;
  std::vector<std::string> locals;  // hoisted, excluding params, in hoisting order
  const Stmt* body = nullptr;
  const Expr* result = nullptr;
  std::vector<CallSite> call_sites;
};

struct ProgramIndex {
  std::vector<FunctionInfo> functions;  // functions[kMain] is the entry statement
  std::map<std::string, FunctionId> fn_by_name;
  std::vector<LabelId> exprs, stmts, call_sites, literal_sites;
  std::unordered_map<LabelId, FunctionId> enclosing;
  std::unordered_map<LabelId, bool> in_loop;
  std::unordered_map<LabelId, const Expr*> expr_at;
  std::unordered_map<LabelId, const Stmt*> stmt_at;

  FunctionId fn(const std::string& name) const;  // -1 if absent
  bool loop(LabelId l) const;
  const FunctionInfo& info(FunctionId f) const { return functions.at(f); }
};

ProgramIndex build_index(const IrProgram& p);

// Variables hoisted by H[s] in order (var decls, for-in vars, fun decls), no duplicates.
std::vector<std::string> hoisted_names(const Stmt& s);

}  // namespace tsa
