#include <doctest.h>

#include <fstream>
#include <sstream>

#include "vta/cli/commands.hpp"
#include "vta/json/trace.hpp"

using namespace vta;
namespace fs = std::filesystem;
using nlohmann::ordered_json;

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

void spit(const fs::path& p, std::string_view text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("vta_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

struct Capture {
  std::ostringstream out, err;
  cli::Streams io() { return {out, err}; }
};

std::vector<std::string> diag_codes(const fs::path& file) {
  std::vector<std::string> out;
  for (const auto& d : json::diagnostics_from_json(slurp(file))) out.push_back(d.code);
  return out;
}

}  // namespace

TEST_CASE("validate exit codes") {
  Scratch s("validate");
  Capture c;
  CHECK(cli::cmd_validate(kCorpus / "valid_dijkstra.json", s.dir / "ok", c.io()) == cli::kExitOk);
  CHECK(diag_codes(s.dir / "ok" / "diagnostics.json").empty());

  Capture c2;
  CHECK(cli::cmd_validate(kCorpus / "ops_flat.json", s.dir / "flat", c2.io()) == cli::kExitSemantic);
  CHECK(diag_codes(s.dir / "flat" / "diagnostics.json") == std::vector<std::string>{"OPS_NOT_2D"});
  CHECK(c2.err.str().starts_with("[Previous Error]\nOPS_NOT_2D: "));

  Capture c3;
  CHECK(cli::cmd_validate(kCorpus / "syntax_error.json", s.dir / "syntax", c3.io()) == cli::kExitEnvironment);
  CHECK(diag_codes(s.dir / "syntax" / "diagnostics.json") == std::vector<std::string>{"SYNTAX_ERROR"});

  Capture c4;
  CHECK(cli::cmd_validate(s.dir / "missing.json", s.dir / "missing", c4.io()) == cli::kExitEnvironment);
  CHECK(fs::exists(s.dir / "missing" / "diagnostics.json"));

  // warnings alone do not fail
  Capture c5;
  CHECK(cli::cmd_validate(kCorpus / "array_unknown_state_field.json", s.dir / "warn", c5.io()) == cli::kExitOk);
  const auto warned = diag_codes(s.dir / "warn" / "diagnostics.json");
  CHECK(warned.size() == 5);  // one per array element
  CHECK(std::all_of(warned.begin(), warned.end(), [](const auto& c) { return c == "UNKNOWN_FIELD"; }));
}

TEST_CASE("render writes nothing for an invalid trace") {
  Scratch s("render_invalid");
  Capture c;
  cli::RenderOptions opts;
  CHECK(cli::cmd_render(kCorpus / "step_apply_failed.json", s.dir / "out", opts, c.io()) == cli::kExitSemantic);
  CHECK((!fs::exists(s.dir / "out") || fs::is_empty(s.dir / "out")));
}

TEST_CASE("render falls back on a broken rsl with a warning") {
  Scratch s("render_fallback");
  spit(s.dir / "bad.json", "{\"timeline\": {\"pause\": 9}}");
  for (const char* backend : {"svg", "tikz", "player"}) {
    CAPTURE(backend);
    Capture c;
    cli::RenderOptions opts;
    opts.backend = backend;
    opts.rsl = s.dir / "bad.json";
    opts.player_assets = kStub;
    CHECK(cli::cmd_render(kCorpus / "valid_dijkstra.json", s.dir / backend, opts, c.io()) == cli::kExitOk);
    CHECK(c.err.str().find("warning") != std::string::npos);
    CHECK(fs::exists(s.dir / backend / "manifest.json"));
    CHECK(fs::exists(s.dir / backend / "rsl.json"));
  }
  Capture c;
  cli::RenderOptions lenient;
  lenient.rsl = s.dir / "bad.json";
  lenient.lenient_rsl = true;
  CHECK(cli::cmd_render(kCorpus / "valid_dijkstra.json", s.dir / "lenient", lenient, c.io()) == cli::kExitOk);
  const auto rsl = ordered_json::parse(slurp(s.dir / "lenient" / "rsl.json"));
  CHECK(rsl["timeline"]["pause"] == 1.0);
}

TEST_CASE("player render without assets is an environment failure") {
  Scratch s("render_player");
  Capture c;
  cli::RenderOptions opts;
  opts.backend = "player";
  opts.player_assets = s.dir / "none";
  CHECK(cli::cmd_render(kCorpus / "valid_dijkstra.json", s.dir / "out", opts, c.io()) == cli::kExitEnvironment);
}

TEST_CASE("trace command") {
  Scratch s("trace");
  const auto tasks = kSource / "data" / "tasks";
  Capture c;
  CHECK(cli::cmd_trace("", tasks / "204_count_primes.txt", s.dir / "t.json", c.io()) == cli::kExitOk);
  const auto parsed = json::parse_trace(slurp(s.dir / "t.json"));
  REQUIRE(parsed.trace);
  CHECK(json::validate_trace(*parsed.trace).valid);

  Capture c2;
  CHECK(cli::cmd_trace("bubble_sort", tasks / "743_network_delay_time.txt", s.dir / "x.json", c2.io()) ==
        cli::kExitSemantic);
  CHECK_FALSE(fs::exists(s.dir / "x.json"));

  spit(s.dir / "broken.txt", "- Family: Sorting\ninput_data = {\"array\": [1, 2\n");
  Capture c3;
  CHECK(cli::cmd_trace("", s.dir / "broken.txt", s.dir / "y.json", c3.io()) == cli::kExitSemantic);
  CHECK(c3.err.str().find("line 2") != std::string::npos);
}

TEST_CASE("replay writes one state per boundary") {
  Scratch s("replay");
  Capture c;
  CHECK(cli::cmd_replay(kCorpus / "valid_dijkstra.json", s.dir, c.io()) == cli::kExitOk);
  CHECK(fs::exists(s.dir / "state_000.json"));
  CHECK(fs::exists(s.dir / "state_001.json"));
  CHECK_FALSE(fs::exists(s.dir / "state_002.json"));
  const auto p = json::parse_trace(slurp(kCorpus / "valid_dijkstra.json"));
  const auto states = json::replay_trace(*p.trace);
  CHECK(slurp(s.dir / "state_001.json") == json::serialize_state(states[1], 1));
}

TEST_CASE("rsl commands") {
  Scratch s("rsl");
  Capture c;
  CHECK(cli::cmd_rsl_check(kCorpus / "rsl" / "force_directed.json", false, c.io()) == cli::kExitOk);
  spit(s.dir / "bad.json", "{\"layout\": {\"main\": {\"type\": \"spiral\"}}}");
  Capture c2;
  CHECK(cli::cmd_rsl_check(s.dir / "bad.json", false, c2.io()) == cli::kExitSemantic);
  Capture c3;
  CHECK(cli::cmd_rsl_default(kCorpus / "valid_dijkstra.json", "-", c3.io()) == cli::kExitOk);
  CHECK(ordered_json::parse(c3.out.str())["layout"]["main"]["type"] == "force_directed");
}

TEST_CASE("bench isolates a failing task") {
  Scratch s("bench");
  fs::create_directories(s.dir / "tasks");
  for (const auto& e : fs::directory_iterator(kSource / "data" / "tasks")) {
    fs::copy_file(e.path(), s.dir / "tasks" / e.path().filename(), fs::copy_options::none);
  }
  spit(s.dir / "tasks" / "999_broken.txt", "- Family: Sorting\ninput_data = {\"array\": [1, \n");
  cli::BenchOptions opts;
  opts.player_assets = kStub;
  opts.jobs = 2;
  const auto report = cli::run_bench(s.dir / "tasks", s.dir / "out", opts);
  REQUIRE(report.rows.size() == 10);
  // numeric problem-id order
  CHECK(report.rows.front().task == "167_two_sum_ii");
  CHECK(report.rows.back().task == "1143_longest_common_subsequence");
  for (const auto& row : report.rows) {
    CAPTURE(row.task);
    if (row.task == "999_broken") {
      CHECK_FALSE(row.ok());
      CHECK_FALSE(row.trace_ok);
      CHECK(row.error.find("line 2") != std::string::npos);
    } else {
      CHECK(row.ok());
    }
  }
  CHECK(report.stages.at("trace").attempts == 10);
  CHECK(report.stages.at("trace").successes == 9);
  CHECK(report.stages.at("render:svg").attempts == 10);
  CHECK(report.overall.successes == 9);
  CHECK(report.families.at("Sorting").attempts == 2);

  Capture c;
  CHECK(cli::cmd_bench(s.dir / "tasks", s.dir / "out2", opts, c.io()) == cli::kExitSemantic);
  const auto bench = ordered_json::parse(slurp(s.dir / "out2" / "bench.json"));
  auto strip = [](ordered_json j) {
    for (auto& row : j["rows"]) row.erase("seconds");
    return j;
  };
  CHECK(strip(bench) == strip(report.to_json()));
  CHECK(bench["overall"]["attempts"] == 10);
  CHECK(c.out.str().find("overall") != std::string::npos);
}
