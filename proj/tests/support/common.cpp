#include "common.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tsa::testing {

std::unique_ptr<Compiled> compile(const std::string& source, bool extract_loops) {
  auto c = std::make_unique<Compiled>();
  c->surface = parse_program(source);
  if (extract_loops) c->surface = tsa::extract_loops(c->surface);
  c->ir = closure_convert(c->surface);
  c->idx = build_index(c->ir);
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string program_path(const std::string& name) { return std::string(TSA_PROGRAM_DIR) + "/" + name; }

std::string load_program(const std::string& name) { return read_file(program_path(name)); }

std::vector<LabelId> labels_at(const Compiled& c, const std::string& text, const std::string& fn) {
  std::vector<LabelId> out;
  FunctionId f = fn.empty() ? -1 : c.idx.fn(fn);
  for (LabelId l : c.idx.exprs) {
    const Expr* e = c.idx.expr_at.at(l);
    Span s = e->label.span;
    if (s.end > c.ir.source.size() || c.ir.source.compare(s.start, s.end - s.start, text) != 0) continue;
    if (f >= 0 && c.idx.enclosing.at(l) != f) continue;
    out.push_back(l);
  }
  return out;
}

LabelId call_at(const Compiled& c, const std::string& text) {
  for (LabelId l : labels_at(c, text))
    if (c.idx.expr_at.at(l)->kind == ExprKind::Call) return l;
  throw std::runtime_error("no call " + text);
}

}  // namespace tsa::testing
