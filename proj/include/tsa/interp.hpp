#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tsa/syntax.hpp"

namespace tsa {

enum class ErrorKind { TypeMismatch, DivByZero, ArityMismatch, IndexOutOfBounds, NotCallable, UnboundWrite, IntOverflow };
enum class Outcome { Finished, RuntimeError, FuelExhausted };

const char* to_string(ErrorKind k);
const char* to_string(Outcome o);

struct CValue {
  enum class Kind : uint8_t { Int, Str, Bool, Null, FunSurface, FunIr, Box, Env };
  Kind kind = Kind::Null;
  int64_t i = 0;   // Int payload, Bool as 0/1
  std::string s;   // Str payload, FunIr function name
  int ref = -1;    // Box id, Env id, FunIr closure env, FunSurface closure id

  static CValue integer(int64_t v) { return {Kind::Int, v, {}, -1}; }
  static CValue string(std::string v) { return {Kind::Str, 0, std::move(v), -1}; }
  static CValue boolean(bool b) { return {Kind::Bool, b ? 1 : 0, {}, -1}; }
  static CValue null() { return {}; }

  bool truthy() const;
  friend bool operator==(const CValue& a, const CValue& b) {
    return a.kind == b.kind && a.i == b.i && a.s == b.s && a.ref == b.ref;
  }
  friend bool operator<(const CValue& a, const CValue& b);
};

// One active call: the call expression and a per-run activation counter.
struct Frame {
  CallSite site = -1;
  uint64_t activation = 0;
};

// Where a box (literal site) or IR environment (function) was created, and the call
// stack at that moment (bottom first).
struct AllocInfo {
  LabelId literal = -1;  // literal label, or -1 for environments
  std::string fn;        // environment owner (IR runs)
  std::vector<Frame> frames;
};

class RunView {
 public:
  virtual ~RunView() = default;
  virtual const std::vector<Frame>& stack() const = 0;  // bottom first
  virtual const AllocInfo& box_alloc(int box) const = 0;
  virtual const AllocInfo& env_alloc(int env) const = 0;
};

using Observer = std::function<void(LabelId, const CValue&, const RunView&)>;

struct RunOptions {
  uint64_t fuel = 1'000'000;
  bool record_values = true;
  size_t max_call_depth = 10'000;
  Observer observer;
};

struct RunResult {
  Outcome outcome = Outcome::Finished;
  ErrorKind error = ErrorKind::TypeMismatch;
  LabelId error_label = -1;
  std::string message;
  uint64_t steps = 0;
  // Top-level variables after a finished run, deep-printed (functions as <fun>).
  std::map<std::string, std::string> globals;
  std::map<LabelId, std::set<CValue>> expr_values;
};

RunResult run_surface(const SurfaceProgram& p, const std::string& input, const RunOptions& opt = {});
RunResult run_ir(const IrProgram& p, const std::string& input, const RunOptions& opt = {});

// Termination class plus error kind, e.g. "Finished", "RuntimeError(DivByZero)".
std::string outcome_class(const RunResult& r);

}  // namespace tsa
