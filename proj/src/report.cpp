#include "tsa/report.hpp"

#include <algorithm>
#include <sstream>

namespace tsa {

namespace {

const char* const kGreek[] = {"α", "β", "γ", "δ", "ε", "ζ", "η", "θ", "ι", "κ", "λ", "μ",
                              "ν", "ξ", "ο", "π", "ρ", "σ", "τ", "υ", "φ", "χ", "ψ", "ω"};

std::string site_name(const Names& n, CallSite s) {
  auto it = n.sites.find(s);
  return it == n.sites.end() ? "@" + std::to_string(s) : it->second;
}

std::string seq_name(const Names& n, const std::vector<CallSite>& seq) {
  std::string out;
  for (CallSite s : seq) out += site_name(n, s);
  return out;
}

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

template <class T, class F>
void add_set(std::vector<std::string>& out, const BoundedSet<T>& s, const char* top, F show) {
  if (s.is_top()) {
    out.push_back(top);
    return;
  }
  for (const auto& x : s.elems()) out.push_back(show(x));
}

std::vector<std::string> others(const RawVal& r, const Names& n) {
  std::vector<std::string> out;
  if (r.t) out.push_back("true");
  if (r.f) out.push_back("false");
  if (r.null) out.push_back("null");
  for (const auto& p : r.paths) out.push_back(render_path(p, n));
  for (const auto& fr : r.funs)
    out.push_back("(" + render_path(fr.closure, n) + ", " + n.fns.at(size_t(fr.fn)) + ")");
  return out;
}

std::string excerpt(const std::string& src, Span s) {
  if (s.end <= s.start || s.end > src.size()) return "";
  std::string out;
  for (size_t i = s.start; i < s.end; ++i) {
    char c = src[i];
    if (c == '\n' || c == '\t' || c == '\r') c = ' ';
    if (c == ' ' && !out.empty() && out.back() == ' ') continue;
    out += c;
  }
  if (out.size() > 48) out = out.substr(0, 45) + "...";
  return out;
}

}  // namespace

Names make_names(const ProgramIndex& idx) {
  Names n;
  std::vector<CallSite> sites = idx.call_sites;
  std::sort(sites.begin(), sites.end());
  for (size_t i = 0; i < sites.size(); ++i) {
    std::string name = kGreek[i % 24];
    if (i >= 24) name += std::to_string(i / 24);
    n.sites[sites[i]] = name;
  }
  std::vector<LabelId> lits = idx.literal_sites;
  std::sort(lits.begin(), lits.end());
  for (size_t i = 0; i < lits.size(); ++i) n.literals[lits[i]] = int(i + 1);
  for (const auto& f : idx.functions) n.fns.push_back(f.name);
  return n;
}

std::string render_ctx(const Ctx& c, const Names& n) {
  if (c.is_empty()) return "∅";
  std::string out;
  for (const auto& part : c.parts()) {
    if (!out.empty()) out += " ∪ ";
    out += seq_name(n, part.prefix) + "*";
    if (part.holes.empty()) continue;
    out += " \\ {";
    for (size_t i = 0; i < part.holes.size(); ++i) out += (i ? ", " : "") + seq_name(n, part.holes[i]);
    out += "}";
  }
  return out;
}

std::string render_path(const AllocPath& p, const Names& n) {
  std::string out = "#";
  if (p.site.kind == AllocSite::Kind::Env) {
    out += n.fns.at(size_t(p.site.id));
  } else {
    auto it = n.literals.find(p.site.id);
    out += it == n.literals.end() ? "@" + std::to_string(p.site.id) : std::to_string(it->second);
  }
  for (CallSite s : p.escapes) out += "/" + site_name(n, s);
  if (p.long_escapes) out += "/...";
  if (p.depth > 0 || p.deep) out += "+" + std::to_string(p.depth);
  if (p.deep) out += "+";
  return out;
}

std::string render_raw(const RawVal& r, const Names& n) {
  if (r.is_bottom()) return "⊥";
  std::vector<std::string> items;
  add_set(items, r.ints, "int:⊤", [](int64_t x) { return std::to_string(x); });
  add_set(items, r.strs, "str:⊤", quote);
  for (auto& o : others(r, n)) items.push_back(std::move(o));
  std::string out = "{";
  for (size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out + "}";
}

std::string render_cv(const CtxVal& v, const Names& n) {
  if (v.is_bottom()) return "⊥";
  std::string out = "[";
  bool first = true;
  for (const auto& e : v.entries()) {
    if (!first) out += "; ";
    first = false;
    out += render_ctx(e.ctx, n) + " ↦ " + render_raw(e.raw, n);
  }
  return out + "]";
}

Report make_report(const CsAnalysis& a, const ProgramIndex& idx) {
  Report r;
  r.mode = "ctx";
  for (const auto& [l, cell] : a.exprs)
    if (!cell.v.is_bottom()) r.rows.push_back({l, idx.expr_at.at(l)->label.span, cell.v});
  for (const auto& [site, callees] : a.call_graph) {
    Report::Edge e{site, {}};
    for (const auto& c : callees) e.callees.emplace_back(c.fn, c.ctx);
    r.call_graph.push_back(std::move(e));
  }
  return r;
}

Report make_report(const NaiveAnalysis& a, const ProgramIndex& idx) {
  Report r;
  r.mode = "naive";
  for (const auto& [l, cell] : a.exprs)
    if (!cell.v.is_bottom()) r.rows.push_back({l, idx.expr_at.at(l)->label.span, CtxVal::constant(cell.v)});
  for (const auto& [site, callees] : a.call_graph) {
    Report::Edge e{site, {}};
    for (FunctionId g : callees) e.callees.emplace_back(g, Ctx::all());
    r.call_graph.push_back(std::move(e));
  }
  return r;
}

std::string report_text(const Report& r, const ProgramIndex& idx, const std::string& source) {
  Names n = make_names(idx);
  std::ostringstream os;
  os << "mode " << r.mode << "\n";
  std::vector<const Report::Row*> rows;
  for (const auto& row : r.rows) rows.push_back(&row);
  std::stable_sort(rows.begin(), rows.end(), [](const Report::Row* a, const Report::Row* b) {
    if (a->span.start != b->span.start) return a->span.start < b->span.start;
    return a->span.end > b->span.end;
  });
  for (const Report::Row* rp : rows) {
    const Report::Row& row = *rp;
    os << row.span.start << "-" << row.span.end << "  " << excerpt(source, row.span) << " : ";
    if (r.mode == "naive") os << render_raw(row.value.flatten(), n);
    else os << render_cv(row.value, n);
    os << "\n";
  }
  os << "call graph\n";
  for (const auto& e : r.call_graph) {
    os << "  " << site_name(n, e.site) << " (label " << e.site << "):";
    if (e.callees.empty()) os << " none";
    for (size_t i = 0; i < e.callees.size(); ++i) {
      os << (i ? "," : "") << " " << n.fns.at(size_t(e.callees[i].first));
      if (r.mode != "naive") os << " at " << render_ctx(e.callees[i].second, n);
    }
    os << "\n";
  }
  return os.str();
}

nlohmann::ordered_json ctx_json(const Ctx& c) {
  nlohmann::ordered_json parts = nlohmann::ordered_json::array();
  for (const auto& p : c.parts()) parts.push_back({{"prefix", p.prefix}, {"holes", p.holes}});
  return {{"parts", parts}};
}

nlohmann::ordered_json report_json(const Report& r, const ProgramIndex& idx) {
  Names n = make_names(idx);
  using json = nlohmann::ordered_json;
  json exprs = json::array();
  for (const auto& row : r.rows) {
    json value = json::array();
    for (const auto& e : row.value.entries()) {
      json ints = e.raw.ints.is_top() ? json("top") : json(e.raw.ints.elems());
      json strs = e.raw.strs.is_top() ? json("top") : json(e.raw.strs.elems());
      value.push_back({{"ctx", ctx_json(e.ctx)}, {"ints", ints}, {"strs", strs}, {"others", others(e.raw, n)}});
    }
    exprs.push_back({{"label", row.label}, {"span", {row.span.start, row.span.end}}, {"value", value}});
  }
  json cg = json::array();
  for (const auto& e : r.call_graph) {
    json callees = json::array();
    for (const auto& [g, c] : e.callees) callees.push_back({{"fn", n.fns.at(size_t(g))}, {"ctx", ctx_json(c)}});
    cg.push_back({{"site", e.site}, {"callees", callees}});
  }
  return {{"version", 1}, {"mode", r.mode}, {"expressions", exprs}, {"callGraph", cg}};
}

}  // namespace tsa
