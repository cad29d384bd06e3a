#include <doctest.h>

#include <fstream>
#include <sstream>

#include "support/fuzz.hpp"
#include "vta/backends/backends.hpp"
#include "vta/rsl/rsl.hpp"

using namespace vta;
using nlohmann::ordered_json;

namespace {

const std::filesystem::path kCorpus = std::filesystem::path(VTA_SOURCE_DIR) / "tests" / "corpus";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

rsl::TraceFeatures graph_features() {
  rsl::TraceFeatures f;
  f.family = "Graph";
  f.data_type = core::ViewSort::Graph;
  f.scale = 2;
  f.frame_count = 2;
  f.ops = {core::OpCode::UpdateNodeStyle};
  return f;
}

struct NumericField {
  const char* pointer;
  rsl::Bounds bounds;
  double rsl::RenderConfig::*member;  // null for rule durations
};

const NumericField kFields[] = {
    {"/timeline/transition", rsl::kTransitionBounds, &rsl::RenderConfig::transition},
    {"/timeline/pause", rsl::kPauseBounds, &rsl::RenderConfig::pause},
    {"/layout/main/params/node_spacing", rsl::kNodeSpacingBounds, &rsl::RenderConfig::node_spacing},
    {"/layout/main/params/edge_curve", rsl::kEdgeCurveBounds, &rsl::RenderConfig::edge_curve},
    {"/layout/main/params/cell_size", rsl::kCellSizeBounds, &rsl::RenderConfig::cell_size},
    {"/rules/0/do/animation/duration", rsl::kDurationBounds, nullptr},
};

std::string with_value(const char* pointer, double v) {
  auto doc = ordered_json::parse(slurp(kCorpus / "rsl" / "force_directed.json"));
  doc["rules"][0]["do"]["animation"]["duration"] = 0.5;
  doc[ordered_json::json_pointer(pointer)] = v;
  return doc.dump();
}

double read_back(const rsl::RenderConfig& c, const NumericField& f) {
  return f.member ? c.*f.member : c.rules.at(0).directive.duration;
}

}  // namespace

TEST_CASE("the reference rsl config validates and interprets") {
  const auto text = slurp(kCorpus / "rsl" / "force_directed.json");
  const auto parsed = rsl::parse_rsl(text);
  REQUIRE(parsed.config);
  CHECK(parsed.config->layout.type == rsl::LayoutType::ForceDirected);
  const auto c = rsl::interpret_rsl(parsed.config, graph_features());
  CHECK(c.theme.background == "#1A1A1A");
  CHECK(c.theme.primary == "#3498DB");
  CHECK(c.transition == doctest::Approx(0.5));
  CHECK(c.pause == doctest::Approx(0.3));
  CHECK(c.frame_duration() == doctest::Approx(0.8));
  CHECK(c.node_spacing == doctest::Approx(2.0));
  REQUIRE(c.rules.size() == 1);
  CHECK(c.rules[0].op == core::OpCode::UpdateNodeStyle);
  CHECK(c.rules[0].directive.variant == rsl::AnimationVariant::Pulse);
  CHECK_FALSE(c.fallback);
  const auto dir = c.directive_for(core::op::UpdateNodeStyle{{"A"}, "current"});
  REQUIRE(dir);
  CHECK(dir->variant == rsl::AnimationVariant::Pulse);
  CHECK_FALSE(c.directive_for(core::op::UpdateEdgeStyle{{}, "x"}));
}

TEST_CASE("a trailing line comment is not JSON") {
  auto text = slurp(kCorpus / "rsl" / "force_directed.json");
  text.replace(text.find("\"force_directed\","), 17, "\"force_directed\",  // or grid/matrix");
  const auto parsed = rsl::parse_rsl(text);
  CHECK_FALSE(parsed.config);
  CHECK(rsl::interpret_rsl_text(text, graph_features(), false).fallback);
}

TEST_CASE("bounds: strict rejects, lenient clamps") {
  for (const auto& f : kFields) {
    CAPTURE(f.pointer);
    for (double v : {f.bounds.lo - 0.05, f.bounds.hi + 0.05, f.bounds.lo - 100, f.bounds.hi + 100}) {
      CAPTURE(v);
      const auto text = with_value(f.pointer, v);
      const auto strict = rsl::parse_rsl(text);
      CHECK_FALSE(strict.config);
      CHECK(std::any_of(strict.diagnostics.begin(), strict.diagnostics.end(),
                        [](const auto& d) { return d.code == json::code::kOutOfBounds && d.is_error(); }));
      const auto lenient = rsl::parse_rsl(text, true);
      REQUIRE(lenient.config);
      CHECK(std::all_of(lenient.diagnostics.begin(), lenient.diagnostics.end(), [](const auto& d) { return !d.is_error(); }));
      const auto c = rsl::interpret_rsl(lenient.config, graph_features());
      CHECK(read_back(c, f) == doctest::Approx(f.bounds.clamp(v)));
    }
    for (double v : {f.bounds.lo, f.bounds.hi}) {
      const auto ok = rsl::parse_rsl(with_value(f.pointer, v));
      REQUIRE(ok.config);
      CHECK(read_back(rsl::interpret_rsl(ok.config, graph_features()), f) == doctest::Approx(v));
    }
  }
}

TEST_CASE("enums, colors and ops are checked") {
  auto doc = ordered_json::parse(slurp(kCorpus / "rsl" / "force_directed.json"));
  auto bad = [&](const char* ptr, ordered_json v, std::string_view code) {
    auto d = doc;
    d[ordered_json::json_pointer(ptr)] = v;
    const auto r = rsl::validate_rsl(d.dump());
    CAPTURE(ptr);
    CHECK_FALSE(r.valid);
    CHECK(r.has_code(code));
  };
  bad("/layout/main/type", "spiral", json::code::kBadEnum);
  bad("/rules/0/do/animation/variant", "wobble", json::code::kBadEnum);
  bad("/rules/0/when/op", "teleport", json::code::kUnknownOp);
  bad("/theme/primary", "#12345", json::code::kBadColor);
  bad("/timeline/pause", "slow", json::code::kBadType);
}

TEST_CASE("unknown fields only warn") {
  auto doc = ordered_json::parse(slurp(kCorpus / "rsl" / "force_directed.json"));
  doc["sparkles"] = true;
  const auto r = rsl::validate_rsl(doc.dump());
  CHECK(r.valid);
  CHECK(r.has_code(json::code::kUnknownField));
}

TEST_CASE("absent config gives per-sort defaults") {
  auto f = graph_features();
  const auto c = rsl::interpret_rsl(std::nullopt, f);
  CHECK(c.fallback);
  CHECK(c.layout == rsl::default_layout(core::ViewSort::Graph));
  f.data_type = core::ViewSort::Array;
  CHECK(rsl::interpret_rsl(std::nullopt, f).layout == rsl::LayoutType::HorizontalArray);
  f.data_type = core::ViewSort::Table;
  CHECK(rsl::interpret_rsl(std::nullopt, f).layout == rsl::LayoutType::Matrix);
}

TEST_CASE("default rsl is itself valid and stable") {
  const auto d = rsl::default_rsl(graph_features());
  const auto text = rsl::serialize_rsl(d);
  const auto back = rsl::parse_rsl(text);
  REQUIRE(back.config);
  CHECK(*back.config == d);
  CHECK(rsl::serialize_rsl(*back.config) == text);
}

TEST_CASE("layout support matrix") {
  using rsl::LayoutType;
  using core::ViewSort;
  CHECK(rsl::layout_supports(LayoutType::ForceDirected, ViewSort::Graph));
  CHECK(rsl::layout_supports(LayoutType::Hierarchical, ViewSort::Tree));
  CHECK(rsl::layout_supports(LayoutType::Matrix, ViewSort::Table));
  CHECK(rsl::layout_supports(LayoutType::HorizontalArray, ViewSort::Array));
  CHECK_FALSE(rsl::layout_supports(LayoutType::HorizontalArray, ViewSort::Graph));
}

TEST_CASE("style resolution order") {
  rsl::ResolvedTheme theme{"#000000", "#FFFFFF", "#3498DB", "#2C3E50", {{"current", "#FF00FF"}}};
  std::map<std::string, core::StyleDef> styles = core::default_styles();
  styles["current"] = core::StyleDef{"#00FF00", std::nullopt, std::nullopt};
  styles["seen"] = core::StyleDef{"#ABCDEF", std::nullopt, std::nullopt};
  CHECK(rsl::resolve_style("current", styles, theme).fill == "#FF00FF");
  CHECK(rsl::resolve_style("seen", styles, theme).fill == "#ABCDEF");
  CHECK(rsl::resolve_style("nope", styles, theme) == rsl::resolve_style("idle", styles, theme));
}

TEST_CASE("fuzzed rsl never stops rendering") {
  const auto trace = json::parse_trace(slurp(kCorpus / "valid_dijkstra.json")).trace.value();
  const auto features = rsl::extract_features(trace);
  testing::Rng rng(21);
  const auto dir = std::filesystem::temp_directory_path() / "vta_rsl_fuzz";
  for (int k = 0; k < 120; ++k) {
    const auto text = testing::random_rsl(rng);
    CAPTURE(text);
    for (bool lenient : {false, true}) {
      rsl::RenderConfig config;
      REQUIRE_NOTHROW(config = rsl::interpret_rsl_text(text, features, lenient));
      const auto parsed = rsl::parse_rsl(text, lenient);
      const auto cfg = parsed.config ? *parsed.config : rsl::default_rsl(features);
      CHECK(config.fallback == !parsed.config);
      CHECK_NOTHROW(backends::emit_svg(backends::build_frames(trace, cfg, config), config, dir));
    }
  }
  std::filesystem::remove_all(dir);
}
