#include "tsa/interp.hpp"

#include <pthread.h>

#include <limits>
#include <memory>
#include <tuple>

namespace tsa {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::DivByZero: return "DivByZero";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::IndexOutOfBounds: return "IndexOutOfBounds";
    case ErrorKind::NotCallable: return "NotCallable";
    case ErrorKind::UnboundWrite: return "UnboundWrite";
    case ErrorKind::IntOverflow: return "IntOverflow";
  }
  return "?";
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Finished: return "Finished";
    case Outcome::RuntimeError: return "RuntimeError";
    case Outcome::FuelExhausted: return "FuelExhausted";
  }
  return "?";
}

std::string outcome_class(const RunResult& r) {
  if (r.outcome == Outcome::RuntimeError) return std::string("RuntimeError(") + to_string(r.error) + ")";
  return to_string(r.outcome);
}

bool CValue::truthy() const {
  switch (kind) {
    case Kind::Null: return false;
    case Kind::Bool:
    case Kind::Int: return i != 0;
    case Kind::Str: return !s.empty();
    default: return true;
  }
}

bool operator<(const CValue& a, const CValue& b) {
  return std::tie(a.kind, a.i, a.s, a.ref) < std::tie(b.kind, b.i, b.s, b.ref);
}

namespace {

struct OutOfFuel {};

struct RtError {
  ErrorKind kind;
  LabelId label;
  std::string msg;
};

struct BoxPayload {
  bool is_arr = false;
  std::map<std::string, CValue> obj;
  std::vector<CValue> arr;
};

class MachineBase : public RunView {
 public:
  MachineBase(const RunOptions& opt, RunResult& res) : opt_(opt), res_(res), fuel_(opt.fuel) {}

  const std::vector<Frame>& stack() const override { return frames_; }
  const AllocInfo& box_alloc(int box) const override { return box_info_.at(size_t(box)); }
  const AllocInfo& env_alloc(int env) const override { return env_info_.at(size_t(env)); }

 protected:
  const RunOptions& opt_;
  RunResult& res_;
  uint64_t fuel_;
  std::vector<CValue> locs_;
  std::vector<BoxPayload> boxes_;
  std::vector<AllocInfo> box_info_;
  std::vector<AllocInfo> env_info_;
  std::vector<Frame> frames_;
  uint64_t activations_ = 0;

  void tick() {
    if (fuel_ == 0) throw OutOfFuel{};
    --fuel_;
    ++res_.steps;
  }

  [[noreturn]] static void fail(ErrorKind k, const Expr& e, std::string msg) {
    throw RtError{k, e.label.id, std::move(msg)};
  }

  CValue observe(const Expr& e, CValue v) {
    if (opt_.record_values) res_.expr_values[e.label.id].insert(v);
    if (opt_.observer) opt_.observer(e.label.id, v, *this);
    return v;
  }

  int alloc() {
    locs_.push_back(CValue::null());
    return int(locs_.size() - 1);
  }

  CValue new_box(const Expr& site, BoxPayload p) {
    boxes_.push_back(std::move(p));
    box_info_.push_back(AllocInfo{site.label.id, {}, frames_});
    CValue v;
    v.kind = CValue::Kind::Box;
    v.ref = int(boxes_.size() - 1);
    return v;
  }

  void push_frame(const Expr& call) {
    if (frames_.size() >= opt_.max_call_depth) throw OutOfFuel{};
    frames_.push_back(Frame{call.label.id, ++activations_});
  }

  static CValue arith(const Expr& e, const CValue& a, const CValue& b) {
    if (a.kind != CValue::Kind::Int || b.kind != CValue::Kind::Int)
      fail(ErrorKind::TypeMismatch, e, std::string("operands of ") + binop_symbol(e.kind) + " must be integers");
    int64_t x = a.i, y = b.i, r = 0;
    bool overflow = false;
    switch (e.kind) {
      case ExprKind::Add: overflow = __builtin_add_overflow(x, y, &r); break;
      case ExprKind::Sub: overflow = __builtin_sub_overflow(x, y, &r); break;
      case ExprKind::Mul: overflow = __builtin_mul_overflow(x, y, &r); break;
      case ExprKind::Div:
        if (y == 0) fail(ErrorKind::DivByZero, e, "division by zero");
        if (x == std::numeric_limits<int64_t>::min() && y == -1) {
          overflow = true;
          break;
        }
        r = x / y;
        if ((x % y != 0) && ((x < 0) != (y < 0))) --r;
        break;
      default: break;
    }
    if (overflow) fail(ErrorKind::IntOverflow, e, "integer overflow");
    return CValue::integer(r);
  }

  BoxPayload& obj_box(const Expr& e, const CValue& v) {
    if (v.kind != CValue::Kind::Box || boxes_[size_t(v.ref)].is_arr)
      fail(ErrorKind::TypeMismatch, e, "property access on a non-object");
    return boxes_[size_t(v.ref)];
  }

  BoxPayload& arr_box(const Expr& e, const CValue& v) {
    if (v.kind != CValue::Kind::Box || !boxes_[size_t(v.ref)].is_arr)
      fail(ErrorKind::TypeMismatch, e, "element access on a non-array");
    return boxes_[size_t(v.ref)];
  }

  static size_t index_of(const Expr& e, const CValue& i, size_t n) {
    if (i.kind != CValue::Kind::Int) fail(ErrorKind::TypeMismatch, e, "array index must be an integer");
    if (i.i < 0 || uint64_t(i.i) >= n) fail(ErrorKind::IndexOutOfBounds, e, "index out of bounds");
    return size_t(i.i);
  }

  std::string deep(const CValue& v, std::map<int, int>& seen) const {
    switch (v.kind) {
      case CValue::Kind::Int: return std::to_string(v.i);
      case CValue::Kind::Str: return "\"" + v.s + "\"";
      case CValue::Kind::Bool: return v.i ? "true" : "false";
      case CValue::Kind::Null: return "null";
      case CValue::Kind::FunSurface:
      case CValue::Kind::FunIr: return "<fun>";
      case CValue::Kind::Env: return "<env>";
      case CValue::Kind::Box: {
        auto it = seen.find(v.ref);
        if (it != seen.end()) return "@" + std::to_string(it->second);
        int k = int(seen.size());
        seen[v.ref] = k;
        const auto& b = boxes_[size_t(v.ref)];
        std::string out = "#" + std::to_string(k);
        if (b.is_arr) {
          out += "[";
          for (size_t i = 0; i < b.arr.size(); ++i) out += (i ? ", " : "") + deep(b.arr[i], seen);
          return out + "]";
        }
        out += "{";
        bool first = true;
        for (const auto& [name, fv] : b.obj) {
          if (fv.kind == CValue::Kind::Null) continue;
          out += (first ? "" : ", ") + name + ": " + deep(fv, seen);
          first = false;
        }
        return out + "}";
      }
    }
    return "?";
  }

  void finish_globals(const std::map<std::string, int>& env) {
    std::map<int, int> seen;
    for (const auto& [name, loc] : env) res_.globals[name] = deep(locs_[size_t(loc)], seen);
  }
};

// ---- TinyScript+ (surface)

using SEnv = std::shared_ptr<const std::map<std::string, int>>;

struct SClosure {
  SEnv env;
  const std::vector<std::string>* params;
  const Stmt* body;
  const Expr* result;
};

class SurfaceMachine : public MachineBase {
 public:
  using MachineBase::MachineBase;

  void run(const SurfaceProgram& p, const std::string& input) {
    auto env = std::make_shared<std::map<std::string, int>>();
    (*env)["input"] = alloc();
    locs_[size_t(env->at("input"))] = CValue::string(input);
    SEnv e2 = hoist(*p.body, env);
    exec(*p.body, e2);
    finish_globals(*e2);
  }

 private:
  std::vector<SClosure> closures_;

  SEnv hoist(const Stmt& s, SEnv env) {
    auto names = hoisted_names(s);
    if (names.empty()) return env;
    auto out = std::make_shared<std::map<std::string, int>>(*env);
    for (const auto& n : names) (*out)[n] = alloc();
    return out;
  }

  CValue read(const SEnv& env, const std::string& id) const {
    auto it = env->find(id);
    return it == env->end() ? CValue::null() : locs_[size_t(it->second)];
  }

  void write(const Expr& e, const SEnv& env, const std::string& id, const CValue& v) {
    auto it = env->find(id);
    if (it == env->end()) fail(ErrorKind::UnboundWrite, e, "assignment to undeclared variable " + id);
    locs_[size_t(it->second)] = v;
  }

  void write_decl(const SEnv& env, const std::string& id, const CValue& v) {
    locs_[size_t(env->at(id))] = v;
  }

  CValue make_fun(const SEnv& env, const std::vector<std::string>& params, const Stmt* body, const Expr* result) {
    closures_.push_back(SClosure{env, &params, body, result});
    CValue v;
    v.kind = CValue::Kind::FunSurface;
    v.ref = int(closures_.size() - 1);
    return v;
  }

  void exec(const Stmt& s, const SEnv& env) {
    tick();
    switch (s.kind) {
      case StmtKind::Empty: return;
      case StmtKind::ExprStmt: eval(*s.expr, env); return;
      case StmtKind::Seq:
        exec(*s.first, env);
        exec(*s.second, env);
        return;
      case StmtKind::VarDecl: write_decl(env, s.name, eval(*s.expr, env)); return;
      case StmtKind::If:
        if (eval(*s.expr, env).truthy()) exec(*s.first, env);
        else exec(*s.second, env);
        return;
      case StmtKind::ForIn: {
        CValue v = eval(*s.expr, env);
        std::vector<CValue> items = arr_box(*s.expr, v).arr;
        for (const auto& item : items) {
          write_decl(env, s.name, item);
          exec(*s.first, env);
        }
        return;
      }
      case StmtKind::While:
        while (eval(*s.expr, env).truthy()) {
          exec(*s.first, env);
          tick();
        }
        return;
      case StmtKind::FunDecl:
        write_decl(env, s.name, make_fun(env, s.params, s.first.get(), s.expr.get()));
        return;
    }
  }

  CValue eval(const Expr& e, const SEnv& env) {
    tick();
    switch (e.kind) {
      case ExprKind::Int: return observe(e, CValue::integer(e.int_val));
      case ExprKind::Str: return observe(e, CValue::string(e.name));
      case ExprKind::Bool: return observe(e, CValue::boolean(e.bool_val));
      case ExprKind::Null: return observe(e, CValue::null());
      case ExprKind::Var: return observe(e, read(env, e.name));
      case ExprKind::Prop: {
        CValue o = eval(*e.kids[0], env);
        const auto& box = obj_box(e, o);
        auto it = box.obj.find(e.name);
        return observe(e, it == box.obj.end() ? CValue::null() : it->second);
      }
      case ExprKind::Index: {
        CValue a = eval(*e.kids[0], env);
        CValue i = eval(*e.kids[1], env);
        const auto& box = arr_box(e, a);
        return observe(e, box.arr[index_of(e, i, box.arr.size())]);
      }
      case ExprKind::AssignVar: {
        CValue v = eval(*e.kids[0], env);
        write(e, env, e.name, v);
        return observe(e, v);
      }
      case ExprKind::AssignProp: {
        CValue o = eval(*e.kids[0], env);
        CValue v = eval(*e.kids[1], env);
        obj_box(e, o).obj[e.name] = v;
        return observe(e, v);
      }
      case ExprKind::AssignIndex: {
        CValue a = eval(*e.kids[0], env);
        CValue i = eval(*e.kids[1], env);
        CValue v = eval(*e.kids[2], env);
        auto& box = arr_box(e, a);
        box.arr[index_of(e, i, box.arr.size())] = v;
        return observe(e, v);
      }
      case ExprKind::Add:
      case ExprKind::Sub:
      case ExprKind::Mul:
      case ExprKind::Div: {
        CValue a = eval(*e.kids[0], env);
        CValue b = eval(*e.kids[1], env);
        return observe(e, arith(e, a, b));
      }
      case ExprKind::Call: {
        CValue f = eval(*e.kids[0], env);
        std::vector<CValue> args;
        for (size_t i = 1; i < e.kids.size(); ++i) args.push_back(eval(*e.kids[i], env));
        if (f.kind != CValue::Kind::FunSurface) fail(ErrorKind::NotCallable, e, "callee is not a function");
        SClosure c = closures_[size_t(f.ref)];
        if (c.params->size() != args.size()) fail(ErrorKind::ArityMismatch, e, "wrong number of arguments");
        push_frame(e);
        auto e1 = std::make_shared<std::map<std::string, int>>(*c.env);
        for (const auto& p : *c.params) (*e1)[p] = alloc();
        SEnv e2 = c.body ? hoist(*c.body, e1) : SEnv(e1);
        for (size_t i = 0; i < args.size(); ++i) write_decl(e2, (*c.params)[i], args[i]);
        if (c.body) exec(*c.body, e2);
        CValue r = eval(*c.result, e2);
        frames_.pop_back();
        return observe(e, r);
      }
      case ExprKind::ObjLit: {
        BoxPayload p;
        std::vector<CValue> vals;
        for (const auto& k : e.kids) vals.push_back(eval(*k, env));
        for (size_t i = 0; i < vals.size(); ++i) p.obj[e.names[i]] = vals[i];
        return observe(e, new_box(e, std::move(p)));
      }
      case ExprKind::ArrLit: {
        BoxPayload p;
        p.is_arr = true;
        for (const auto& k : e.kids) p.arr.push_back(eval(*k, env));
        return observe(e, new_box(e, std::move(p)));
      }
      case ExprKind::Lambda: return observe(e, make_fun(env, e.names, e.body.get(), e.kids[0].get()));
      case ExprKind::BindClosure: fail(ErrorKind::TypeMismatch, e, "bind-closure in a surface program");
    }
    return CValue::null();
  }
};

// ---- TinyScript IR

class IrMachine : public MachineBase {
 public:
  using MachineBase::MachineBase;

  void run(const IrProgram& p, const std::string& input) {
    for (const auto& d : p.decls) fenv_[d.name] = &d;
    int env = new_env("main");
    bind(env, "input", CValue::string(input));
    if (p.entry) {
      hoist(env, *p.entry);
      exec(*p.entry, env);
    }
    finish_globals(envs_[size_t(env)]);
  }

 private:
  std::map<std::string, const IrDecl*> fenv_;
  std::vector<std::map<std::string, int>> envs_;

  int new_env(const std::string& owner) {
    envs_.emplace_back();
    env_info_.push_back(AllocInfo{-1, owner, frames_});
    return int(envs_.size() - 1);
  }

  void bind(int env, const std::string& id, const CValue& v) {
    auto& m = envs_[size_t(env)];
    auto it = m.find(id);
    int loc = it == m.end() ? (m[id] = alloc()) : it->second;
    locs_[size_t(loc)] = v;
  }

  void hoist(int env, const Stmt& s) {
    auto& m = envs_[size_t(env)];
    for (const auto& n : hoisted_names(s)) m[n] = alloc();
  }

  CValue read(int env, const std::string& id) const {
    const auto& m = envs_[size_t(env)];
    auto it = m.find(id);
    return it == m.end() ? CValue::null() : locs_[size_t(it->second)];
  }

  void write(const Expr& e, int env, const std::string& id, const CValue& v) {
    const auto& m = envs_[size_t(env)];
    auto it = m.find(id);
    if (it == m.end()) fail(ErrorKind::UnboundWrite, e, "assignment to undeclared variable " + id);
    locs_[size_t(it->second)] = v;
  }

  void exec(const Stmt& s, int env) {
    tick();
    switch (s.kind) {
      case StmtKind::Empty: return;
      case StmtKind::ExprStmt: eval(*s.expr, env); return;
      case StmtKind::Seq:
        exec(*s.first, env);
        exec(*s.second, env);
        return;
      case StmtKind::VarDecl: bind(env, s.name, eval(*s.expr, env)); return;
      case StmtKind::If:
        if (eval(*s.expr, env).truthy()) exec(*s.first, env);
        else exec(*s.second, env);
        return;
      case StmtKind::ForIn: {
        CValue v = eval(*s.expr, env);
        std::vector<CValue> items = arr_box(*s.expr, v).arr;
        for (const auto& item : items) {
          bind(env, s.name, item);
          exec(*s.first, env);
        }
        return;
      }
      case StmtKind::While:
        while (eval(*s.expr, env).truthy()) {
          exec(*s.first, env);
          tick();
        }
        return;
      case StmtKind::FunDecl: throw RtError{ErrorKind::TypeMismatch, s.label.id, "function declaration in IR"};
    }
  }

  CValue eval(const Expr& e, int env) {
    tick();
    switch (e.kind) {
      case ExprKind::Int: return observe(e, CValue::integer(e.int_val));
      case ExprKind::Str: return observe(e, CValue::string(e.name));
      case ExprKind::Bool: return observe(e, CValue::boolean(e.bool_val));
      case ExprKind::Null: return observe(e, CValue::null());
      case ExprKind::Var: return observe(e, read(env, e.name));
      case ExprKind::Prop: {
        CValue o = eval(*e.kids[0], env);
        if (o.kind == CValue::Kind::Env) return observe(e, read(o.ref, e.name));
        const auto& box = obj_box(e, o);
        auto it = box.obj.find(e.name);
        return observe(e, it == box.obj.end() ? CValue::null() : it->second);
      }
      case ExprKind::Index: {
        CValue a = eval(*e.kids[0], env);
        CValue i = eval(*e.kids[1], env);
        const auto& box = arr_box(e, a);
        return observe(e, box.arr[index_of(e, i, box.arr.size())]);
      }
      case ExprKind::AssignVar: {
        CValue v = eval(*e.kids[0], env);
        write(e, env, e.name, v);
        return observe(e, v);
      }
      case ExprKind::AssignProp: {
        CValue o = eval(*e.kids[0], env);
        CValue v = eval(*e.kids[1], env);
        if (o.kind == CValue::Kind::Env) write(e, o.ref, e.name, v);
        else obj_box(e, o).obj[e.name] = v;
        return observe(e, v);
      }
      case ExprKind::AssignIndex: {
        CValue a = eval(*e.kids[0], env);
        CValue i = eval(*e.kids[1], env);
        CValue v = eval(*e.kids[2], env);
        auto& box = arr_box(e, a);
        box.arr[index_of(e, i, box.arr.size())] = v;
        return observe(e, v);
      }
      case ExprKind::Add:
      case ExprKind::Sub:
      case ExprKind::Mul:
      case ExprKind::Div: {
        CValue a = eval(*e.kids[0], env);
        CValue b = eval(*e.kids[1], env);
        return observe(e, arith(e, a, b));
      }
      case ExprKind::Call: {
        CValue f = eval(*e.kids[0], env);
        std::vector<CValue> args;
        for (size_t i = 1; i < e.kids.size(); ++i) args.push_back(eval(*e.kids[i], env));
        if (f.kind != CValue::Kind::FunIr) fail(ErrorKind::NotCallable, e, "callee is not a function");
        const IrDecl& d = *fenv_.at(f.s);
        if (d.params.size() != args.size() + 1) fail(ErrorKind::ArityMismatch, e, "wrong number of arguments");
        push_frame(e);
        int callee = new_env(d.name);
        for (const auto& p : d.params) envs_[size_t(callee)][p] = alloc();
        if (d.body) hoist(callee, *d.body);
        CValue cl;
        cl.kind = CValue::Kind::Env;
        cl.ref = f.ref;
        bind(callee, d.params[0], cl);
        for (size_t i = 0; i < args.size(); ++i) bind(callee, d.params[i + 1], args[i]);
        if (d.body) exec(*d.body, callee);
        CValue r = eval(*d.result, callee);
        frames_.pop_back();
        return observe(e, r);
      }
      case ExprKind::ObjLit: {
        BoxPayload p;
        std::vector<CValue> vals;
        for (const auto& k : e.kids) vals.push_back(eval(*k, env));
        for (size_t i = 0; i < vals.size(); ++i) p.obj[e.names[i]] = vals[i];
        return observe(e, new_box(e, std::move(p)));
      }
      case ExprKind::ArrLit: {
        BoxPayload p;
        p.is_arr = true;
        for (const auto& k : e.kids) p.arr.push_back(eval(*k, env));
        return observe(e, new_box(e, std::move(p)));
      }
      case ExprKind::BindClosure: {
        CValue v;
        v.kind = CValue::Kind::FunIr;
        v.s = e.name;
        v.ref = env;
        return observe(e, v);
      }
      case ExprKind::Lambda: fail(ErrorKind::TypeMismatch, e, "lambda in an IR program");
    }
    return CValue::null();
  }
};

// Deep TinyScript recursion maps onto native recursion; give it room.
void run_on_big_stack(const std::function<void()>& fn) {
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, size_t(512) << 20);
  auto* task = new std::function<void()>(fn);
  pthread_t th;
  auto entry = [](void* arg) -> void* {
    auto* f = static_cast<std::function<void()>*>(arg);
    (*f)();
    return nullptr;
  };
  if (pthread_create(&th, &attr, entry, task) != 0) {
    pthread_attr_destroy(&attr);
    delete task;
    fn();
    return;
  }
  pthread_join(th, nullptr);
  pthread_attr_destroy(&attr);
  delete task;
}

template <class Machine, class Program>
RunResult run_machine(const Program& p, const std::string& input, const RunOptions& opt) {
  RunResult res;
  run_on_big_stack([&] {
    Machine m(opt, res);
    try {
      m.run(p, input);
      res.outcome = Outcome::Finished;
    } catch (const OutOfFuel&) {
      res.outcome = Outcome::FuelExhausted;
    } catch (const RtError& err) {
      res.outcome = Outcome::RuntimeError;
      res.error = err.kind;
      res.error_label = err.label;
      res.message = err.msg;
    }
  });
  return res;
}

}  // namespace

RunResult run_surface(const SurfaceProgram& p, const std::string& input, const RunOptions& opt) {
  return run_machine<SurfaceMachine>(p, input, opt);
}

RunResult run_ir(const IrProgram& p, const std::string& input, const RunOptions& opt) {
  return run_machine<IrMachine>(p, input, opt);
}

}  // namespace tsa
