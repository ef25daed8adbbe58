#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tsa/heap.hpp"
#include "tsa/solver.hpp"
#include "tsa/syntax.hpp"

namespace tsa {

struct CsConfig {
  size_t set_bound = 4;     // N
  size_t ctx_depth = 8;     // K
  size_t heap_depth = 8;    // K_h
  size_t max_entries = 64;  // CtxVal entry cap applied when widening
  bool widen = true;
  bool check_fixpoint = false;
};

struct CsCell {
  AbsState st;
  CtxVal v;
  friend bool operator==(const CsCell&, const CsCell&) = default;
};

struct CsCallee {
  FunctionId fn = -1;
  Ctx ctx;
};

struct CsAnalysis {
  bool ok = true;
  std::string error;
  std::vector<std::string> hot_vars;
  size_t evals = 0;
  bool fixpoint = false;  // set when CsConfig::check_fixpoint
  std::string fixpoint_failure;
  std::map<LabelId, CsCell> exprs;
  std::map<LabelId, AbsState> stmts;  // state after each statement
  std::vector<CsCell> fn_in, fn_out;
  std::map<CallSite, std::vector<CsCallee>> call_graph;
};

AllocPath env_path(FunctionId f);
AllocPath literal_path(LabelId l, bool global = false);

// The system analyze_cs solves, for inspection. The equations refer to domain.
struct CsEquations {
  std::shared_ptr<const void> domain;
  System<CsCell> sys;
  LatticeOps<CsCell> ops;
};

CsEquations cs_equations(const ProgramIndex& idx, const CsConfig& cfg = {});

// The program behind idx must outlive the call.
CsAnalysis analyze_cs(const ProgramIndex& idx, const CsConfig& cfg = {}, const SolverConfig& scfg = {});

}  // namespace tsa
