#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tsa/absval.hpp"
#include "tsa/solver.hpp"
#include "tsa/syntax.hpp"

namespace tsa {

// Naive values reuse RawVal: Box(b) is the literal path of b, Env(f) the env path of f,
// FunPair(f, g) a FunRef whose closure is Env(f).
using NaiveVal = RawVal;

struct NaiveBox {
  std::map<std::string, RawVal> fields;
  RawVal dflt;
  RawVal arr;
  const RawVal& get(const std::string& id) const;
  friend bool operator==(const NaiveBox&, const NaiveBox&) = default;
};

struct NaiveState {
  bool live = false;  // false: unreachable
  std::map<std::pair<FunctionId, std::string>, RawVal> vars;
  std::map<LabelId, NaiveBox> boxes;
  friend bool operator==(const NaiveState&, const NaiveState&) = default;
};

NaiveState naive_join(const NaiveState& a, const NaiveState& b);
bool naive_leq(const NaiveState& a, const NaiveState& b);

struct NaiveCell {
  NaiveState st;
  RawVal v;
  friend bool operator==(const NaiveCell&, const NaiveCell&) = default;
};

struct NaiveConfig {
  size_t set_bound = 4;
  bool check_fixpoint = false;
};

struct NaiveAnalysis {
  bool ok = true;
  std::string error;
  std::vector<std::string> hot_vars;
  size_t evals = 0;
  bool fixpoint = false;
  std::string fixpoint_failure;
  std::map<LabelId, NaiveCell> exprs;
  std::map<LabelId, NaiveState> stmts;
  std::vector<NaiveCell> fn_in, fn_out;
  std::map<CallSite, std::vector<FunctionId>> call_graph;
  std::vector<std::string> diagnostics;  // arity-mismatched callees
};

// The system analyze_naive solves, for inspection. The equations refer to domain.
struct NaiveEquations {
  std::shared_ptr<const void> domain;
  System<NaiveCell> sys;
  LatticeOps<NaiveCell> ops;
};

NaiveEquations naive_equations(const ProgramIndex& idx, const NaiveConfig& cfg = {});
NaiveAnalysis analyze_naive(const ProgramIndex& idx, const NaiveConfig& cfg = {}, const SolverConfig& scfg = {});

}  // namespace tsa
