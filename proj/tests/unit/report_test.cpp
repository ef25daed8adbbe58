#include "doctest.h"
#include "support/common.hpp"
#include "tsa/report.hpp"

using namespace tsa;
using namespace tsa::testing;

TEST_CASE("rendering") {
  auto c = compile(load_program("fig51.tsp"));
  Names n = make_names(c->idx);
  CallSite al = call_at(*c, "increment(3)"), be = call_at(*c, "increment(5)");
  CHECK(n.sites.at(al) == "α");
  CHECK(n.sites.at(be) == "β");
  CHECK(render_ctx(Ctx::all(), n) == "*");
  CHECK(render_ctx(Ctx::subtree({al}), n) == "α*");
  RawVal four;
  four.ints = BoundedSet<int64_t>::of({4}, 4);
  CHECK(render_raw(four, n) == "{4}");
  std::string text = report_text(make_report(analyze_cs(c->idx), c->idx), c->idx, c->ir.source);
  CHECK(text.find("[α* ↦ {4}; β* ↦ {6}]") != std::string::npos);
}

TEST_CASE("json report") {
  auto c = compile(load_program("fig55.tsp"));
  Report r = make_report(analyze_cs(c->idx), c->idx);
  auto j = report_json(r, c->idx);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"version", "mode", "expressions", "callGraph"});
  CHECK(j["version"] == 1);
  CHECK(j["mode"] == "ctx");
  CHECK(j["expressions"].size() == r.rows.size());
  for (const auto& row : j["expressions"]) {
    keys.clear();
    for (const auto& [k, v] : row.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"label", "span", "value"});
    CHECK(row["span"].size() == 2);
    for (const auto& e : row["value"]) {
      keys.clear();
      for (const auto& [k, v] : e.items()) keys.push_back(k);
      CHECK(keys == std::vector<std::string>{"ctx", "ints", "strs", "others"});
      CHECK(e["ctx"].contains("parts"));
    }
  }
  for (const auto& edge : j["callGraph"]) {
    CHECK(edge.contains("site"));
    for (const auto& callee : edge["callees"]) {
      CHECK(callee.contains("fn"));
      CHECK(callee.contains("ctx"));
    }
  }
  CHECK(ctx_json(Ctx::subtree({3})) == nlohmann::ordered_json::parse(R"({"parts":[{"prefix":[3],"holes":[]}]})"));
  Report nv = make_report(analyze_naive(c->idx), c->idx);
  CHECK(report_json(nv, c->idx)["mode"] == "naive");
  for (const auto& row : nv.rows) CHECK(row.value.size() == 1);
}

TEST_CASE("text and json describe the same values") {
  for (const char* name : {"workspace.tsp", "fig51.tsp", "factorial.tsp"}) {
    auto c = compile(load_program(name));
    Report r = make_report(analyze_cs(c->idx), c->idx);
    std::string text = report_text(r, c->idx, c->ir.source);
    auto j = report_json(r, c->idx);
    REQUIRE(j["expressions"].size() == r.rows.size());
    for (const auto& row : j["expressions"]) {
      std::string head = std::to_string(int(row["span"][0])) + "-" + std::to_string(int(row["span"][1])) + "  ";
      size_t at = text.find("\n" + head);
      REQUIRE_MESSAGE(at != std::string::npos, head);
      std::string line = text.substr(at + 1, text.find('\n', at + 1) - at - 1);
      line = line.substr(line.find(" : "));
      for (const auto& e : row["value"]) {
        if (e["ints"].is_array())
          for (const auto& i : e["ints"]) CHECK_MESSAGE(line.find(std::to_string(int64_t(i))) != std::string::npos, line);
        if (e["strs"].is_array())
          for (const auto& s : e["strs"]) CHECK_MESSAGE(line.find(std::string(s)) != std::string::npos, line);
        if (e["ints"] == "top") CHECK(line.find("⊤") != std::string::npos);
      }
    }
  }
}
