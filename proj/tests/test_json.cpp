#include <doctest.h>

#include <fstream>
#include <map>
#include <sstream>

#include "vta/json/trace.hpp"

using namespace vta;
using nlohmann::ordered_json;

namespace {

const std::filesystem::path kCorpus = std::filesystem::path(VTA_SOURCE_DIR) / "tests" / "corpus";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> codes(const json::ValidationReport& r, json::Severity sev) {
  std::vector<std::string> out;
  for (const auto& d : r.diagnostics) {
    if (d.severity == sev) out.push_back(d.code);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// parse + validate like the CLI does
json::ValidationReport full_check(std::string_view text) {
  auto p = json::parse_trace(text);
  if (!p.trace) return json::make_report(p.diagnostics);
  auto v = json::validate_trace(*p.trace);
  auto all = p.diagnostics;
  all.insert(all.end(), v.diagnostics.begin(), v.diagnostics.end());
  return json::make_report(all);
}

}  // namespace

TEST_CASE("corpus documents yield exactly their expected codes") {
  const auto manifest = ordered_json::parse(slurp(kCorpus / "manifest.json"));
  CHECK(manifest.size() >= 15);
  for (const auto& [file, want] : manifest.items()) {
    CAPTURE(file);
    const auto report = full_check(slurp(kCorpus / file));
    CHECK(codes(report, json::Severity::Error) == want["errors"].get<std::vector<std::string>>());
    std::vector<std::string> warn = codes(report, json::Severity::Warning);
    warn.erase(std::unique(warn.begin(), warn.end()), warn.end());
    CHECK(warn == want.value("warnings", std::vector<std::string>{}));
    CHECK(report.valid == want["errors"].empty());
  }
}

TEST_CASE("the reference Dijkstra document decodes to the expected trace") {
  const auto p = json::parse_trace(slurp(kCorpus / "valid_dijkstra.json"));
  REQUIRE(p.trace);
  const auto& t = *p.trace;
  CHECK(t.algorithm.name == "Dijkstra Shortest Path");
  const auto& g = std::get<core::GraphView>(t.initial.main);
  REQUIRE(g.nodes.size() == 2);
  CHECK(g.nodes[0].properties.at("distance") == core::Value{std::int64_t{0}});
  CHECK(core::is_null(g.nodes[1].properties.at("distance")));
  CHECK(g.edges[0].weight == core::Value{std::int64_t{4}});
  CHECK_FALSE(g.edges[0].directed);
  REQUIRE(t.deltas.size() == 1);
  CHECK(t.deltas[0].code_highlight == std::vector<int>{2});

  const auto states = json::replay_trace(t);
  REQUIRE(states.size() == 2);
  CHECK(std::get<core::GraphView>(states[1].main).find("A")->style_key == "current");
  CHECK(states[1].highlight == std::vector<int>{2});
  CHECK(states[0].highlight.empty());
}

TEST_CASE("serialize is canonical and round-trips") {
  for (const auto& entry : std::filesystem::directory_iterator(kCorpus)) {
    if (entry.path().extension() != ".json" || entry.path().filename() == "manifest.json") continue;
    const auto p = json::parse_trace(slurp(entry.path()));
    if (!p.trace) continue;
    CAPTURE(entry.path().filename().string());
    const auto once = json::serialize_trace(*p.trace);
    CHECK(once == json::serialize_trace(*p.trace));
    const auto again = json::parse_trace(once);
    REQUIRE(again.trace);
    CHECK(*again.trace == *p.trace);
    CHECK(json::serialize_trace(*again.trace) == once);
    CHECK(once.back() == '\n');
    CHECK(once.find('\r') == std::string::npos);
  }
}

TEST_CASE("numeric version is refused, not coerced") {
  auto text = slurp(kCorpus / "version_numeric.json");
  const auto p = json::parse_trace(text);
  CHECK_FALSE(p.trace);
  REQUIRE_FALSE(p.diagnostics.empty());
  CHECK(p.diagnostics[0].path == "/vta_version");
}

TEST_CASE("Infinity is reported with its location") {
  const auto p = json::parse_trace(slurp(kCorpus / "infinity_token.json"));
  CHECK_FALSE(p.syntax_error);
  REQUIRE(p.diagnostics.size() == 1);
  CHECK(p.diagnostics[0].code == json::code::kInfinityToken);
  CHECK(p.diagnostics[0].path == "/initial_frame/data_state/structure/nodes/1/properties/distance");
}

TEST_CASE("flat operations point at the delta") {
  const auto p = json::parse_trace(slurp(kCorpus / "ops_flat.json"));
  REQUIRE(p.diagnostics.size() == 1);
  CHECK(p.diagnostics[0].path == "/deltas/0/operations");
  CHECK(p.diagnostics[0].delta_index == 0);
}

TEST_CASE("repair block") {
  std::vector<json::Diagnostic> ds;
  for (int i = 0; i < 5; ++i) {
    ds.push_back({json::Severity::Error, "OPS_NOT_2D", "/deltas/" + std::to_string(i) + "/operations", "flat",
                  static_cast<std::size_t>(i)});
  }
  const auto block = json::format_repair_block(ds);
  CHECK(block.starts_with("[Previous Error]\nOPS_NOT_2D: flat\nLocation: /deltas/0/operations, delta 0\n"));
  CHECK(block.ends_with("+2 more\n"));
  CHECK(json::format_repair_block({}).empty());
}

TEST_CASE("diagnostics.json round-trips") {
  std::vector<json::Diagnostic> ds = {{json::Severity::Error, "X", "/a", "m", 3},
                                      {json::Severity::Warning, "Y", "", "n", std::nullopt}};
  CHECK(json::diagnostics_from_json(json::diagnostics_to_json(ds)) == ds);
}

TEST_CASE("state export carries the frame index") {
  const auto p = json::parse_trace(slurp(kCorpus / "valid_dijkstra.json"));
  const auto states = json::replay_trace(*p.trace);
  const auto j = ordered_json::parse(json::serialize_state(states[1], 1));
  CHECK(j["frame_index"] == 1);
  CHECK(j["state"]["highlight"] == ordered_json::array({2}));
  CHECK(j["state"]["data_state"]["structure"]["nodes"][0]["styleKey"] == "current");
}

TEST_CASE("replay attributes failures to the delta") {
  auto p = json::parse_trace(slurp(kCorpus / "valid_dijkstra.json"));
  auto t = *p.trace;
  t.deltas.push_back(core::Delta{"bad", {1}, {{core::op::RemoveNode{"Q"}}}});
  const auto report = json::validate_trace(t);
  CHECK_FALSE(report.valid);
  REQUIRE(report.has_code(json::code::kStepApplyFailed));
  CHECK_THROWS_AS(json::replay_trace(t), json::ReplayError);
}
