#include <doctest.h>

#include <fstream>
#include <sstream>

#include "support/fuzz.hpp"
#include "vta/backends/backends.hpp"

using namespace vta;
namespace fs = std::filesystem;

namespace {

const fs::path kSource(VTA_SOURCE_DIR);
const fs::path kCorpus = kSource / "tests" / "corpus";
const fs::path kStub = kSource / "tests" / "data" / "player_stub";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Fixture {
  json::Trace trace;
  rsl::RslConfig rsl;
  rsl::RenderConfig config;
  backends::FrameSet frames;
};

Fixture load(const json::Trace& trace) {
  Fixture f;
  f.trace = trace;
  const auto features = rsl::extract_features(trace);
  f.rsl = rsl::default_rsl(features);
  f.config = rsl::interpret_rsl(f.rsl, features);
  f.frames = backends::build_frames(trace, f.rsl, f.config);
  return f;
}

Fixture reference() { return load(json::parse_trace(slurp(kCorpus / "valid_dijkstra.json")).trace.value()); }

/// Fresh scratch directory, removed on scope exit.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("vta_test_" + name)) {
    fs::remove_all(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

}  // namespace

TEST_CASE("sha256 of known inputs") {
  CHECK(backends::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(backends::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("frames follow the replay") {
  const auto f = reference();
  REQUIRE(f.frames.frames.size() == 2);
  CHECK(f.frames.title == "Dijkstra Shortest Path");
  CHECK(f.frames.frames[1].caption == "Select node A");
  CHECK(f.frames.frames[1].ops.size() == 1);
  CHECK(f.frames.frames[0].caption.empty());
  CHECK(f.frames.trace_json == json::serialize_trace(f.trace));
}

TEST_CASE("TikZ frame marks the current node") {
  const auto f = reference();
  const auto tex = backends::tikz_frame(f.frames, 1, f.config);
  const auto at = tex.find("% element A\n");
  REQUIRE(at != std::string::npos);
  const auto line_end = tex.find('\n', at + 12);
  CHECK(tex.substr(at + 12, line_end - at - 12).find("fill=vta3498DB") != std::string::npos);
  CHECK(tex.find("\\definecolor{vta3498DB}{HTML}{3498DB}") != std::string::npos);
  CHECK(tex.find("\\begin{tikzpicture}") != std::string::npos);
  CHECK(tex.find("\\end{document}") != std::string::npos);
  // the initial frame has A idle
  const auto tex0 = backends::tikz_frame(f.frames, 0, f.config);
  const auto at0 = tex0.find("% element A\n");
  REQUIRE(at0 != std::string::npos);
  CHECK(tex0.substr(at0, tex0.find('\n', at0 + 12) - at0).find("fill=vta2C3E50") != std::string::npos);
}

TEST_CASE("special characters are escaped in TikZ") {
  auto f = reference();
  f.trace.algorithm.name = "50% of {a_b} & #1";
  f = load(f.trace);
  const auto tex = backends::tikz_frame(f.frames, 0, f.config);
  CHECK(tex.find("50\\% of \\{a\\_b\\} \\& \\#1") != std::string::npos);
}

TEST_CASE("SVG frame uses the resolved fill") {
  const auto f = reference();
  const auto svg = backends::svg_frame(f.frames, 1, f.config);
  CHECK(svg.starts_with("<?xml"));
  CHECK(svg.find("fill=\"#3498DB\"") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  const auto meta = backends::flipbook_metadata(f.frames, f.config);
  CHECK(meta["frames"].size() == 2);
}

TEST_CASE("bundles are byte-identical across repeats") {
  const auto f = reference();
  Scratch a("bundle_a"), b("bundle_b");
  for (int backend = 0; backend < 3; ++backend) {
    CAPTURE(backend);
    fs::remove_all(a.dir);
    fs::remove_all(b.dir);
    auto emit = [&](const fs::path& dir) {
      switch (backend) {
        case 0: return backends::emit_tikz(f.frames, f.config, dir);
        case 1: return backends::emit_svg(f.frames, f.config, dir);
        default: return backends::emit_player_bundle(f.trace, f.rsl, dir, kStub);
      }
    };
    const auto first = emit(a.dir);
    const auto second = emit(b.dir);
    REQUIRE_FALSE(first.files.empty());
    CHECK(first.files == second.files);
    CHECK(slurp(a.dir / "manifest.json") == slurp(b.dir / "manifest.json"));
    CHECK(backends::read_manifest(a.dir) == first.files);
    for (const auto& e : first.files) {
      CAPTURE(e.path);
      const auto bytes = slurp(a.dir / e.path);
      CHECK(bytes.size() == e.bytes);
      CHECK(backends::sha256_hex(bytes) == e.digest);
    }
    CHECK(slurp(a.dir / "trace.json") == json::serialize_trace(f.trace));
    CHECK(slurp(a.dir / "rsl.json") == rsl::serialize_rsl(f.rsl));
  }
}

TEST_CASE("TikZ bundle layout") {
  const auto f = reference();
  Scratch s("tikz_layout");
  const auto bundle = backends::emit_tikz(f.frames, f.config, s.dir);
  std::vector<std::string> paths;
  for (const auto& e : bundle.files) paths.push_back(e.path);
  CHECK(paths == std::vector<std::string>{"frame_000.tex", "frame_001.tex", "index.tex", "rsl.json", "trace.json"});
}

TEST_CASE("player bundle needs assets") {
  const auto f = reference();
  Scratch s("player_missing");
  CHECK_THROWS_AS(backends::emit_player_bundle(f.trace, f.rsl, s.dir, s.dir / "nowhere"),
                  backends::MissingPlayerAssets);
  const auto bundle = backends::emit_player_bundle(f.trace, f.rsl, s.dir, kStub);
  CHECK(fs::exists(s.dir / "index.html"));
  CHECK(std::any_of(bundle.files.begin(), bundle.files.end(), [](const auto& e) { return e.path == "trace.json"; }));
}

TEST_CASE("invalid traces never reach a backend") {
  auto t = reference().trace;
  t.deltas.push_back(core::Delta{"bad", {1}, {{core::op::RemoveNode{"Q"}}}});
  const auto features = rsl::extract_features(t);
  const auto cfg = rsl::default_rsl(features);
  const auto config = rsl::interpret_rsl(cfg, features);
  CHECK_THROWS_AS(backends::build_frames(t, cfg, config), backends::ValidationGateError);
  Scratch s("gate");
  CHECK_THROWS_AS(backends::emit_player_bundle(t, cfg, s.dir, kStub), backends::ValidationGateError);
  CHECK_FALSE(fs::exists(s.dir / "trace.json"));
}

TEST_CASE("every tracker renders on every file backend") {
  testing::Rng rng(41);
  Scratch s("trackers");
  for (const auto& info : trackers::list_trackers()) {
    CAPTURE(info.id);
    const auto run = trackers::run_tracker(info.id, testing::random_task(info.id, rng));
    const auto f = load(run.trace);
    CHECK(f.frames.frames.size() == run.trace.deltas.size() + 1);
    CHECK_NOTHROW(backends::emit_tikz(f.frames, f.config, s.dir / info.id / "tikz"));
    CHECK_NOTHROW(backends::emit_svg(f.frames, f.config, s.dir / info.id / "svg"));
  }
}
