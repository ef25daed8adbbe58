#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "tsa/csa.hpp"
#include "tsa/naive.hpp"

namespace tsa {

// Display names: call sites as Greek letters in label order, literal sites as #1, #2, ...
struct Names {
  std::map<CallSite, std::string> sites;
  std::map<LabelId, int> literals;
  std::vector<std::string> fns;
};

Names make_names(const ProgramIndex& idx);

std::string render_ctx(const Ctx& c, const Names& n);
std::string render_path(const AllocPath& p, const Names& n);
std::string render_raw(const RawVal& r, const Names& n);
std::string render_cv(const CtxVal& v, const Names& n);

// Mode-independent view of an analysis result; naive values become context-constant.
struct Report {
  std::string mode;
  struct Row {
    LabelId label;
    Span span;
    CtxVal value;
  };
  struct Edge {
    CallSite site;
    std::vector<std::pair<FunctionId, Ctx>> callees;
  };
  std::vector<Row> rows;  // non-bottom expressions in label order
  std::vector<Edge> call_graph;
};

Report make_report(const CsAnalysis& a, const ProgramIndex& idx);
Report make_report(const NaiveAnalysis& a, const ProgramIndex& idx);

std::string report_text(const Report& r, const ProgramIndex& idx, const std::string& source);
nlohmann::ordered_json report_json(const Report& r, const ProgramIndex& idx);
nlohmann::ordered_json ctx_json(const Ctx& c);

}  // namespace tsa
