#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace vta::cli {

namespace fs = std::filesystem;

// Exit codes are part of the interface.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSemantic = 1;
inline constexpr int kExitEnvironment = 2;

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

/// Writes <out_dir>/diagnostics.json in every case; prints the repair block on errors.
int cmd_validate(const fs::path& trace_path, const fs::path& out_dir, Streams io);

struct RenderOptions {
  std::string backend = "svg";  // tikz | svg | player
  std::optional<fs::path> rsl;
  bool lenient_rsl = false;
  std::optional<fs::path> player_assets;
};

/// A missing or broken RSL falls back to the default config with a warning.
int cmd_render(const fs::path& trace_path, const fs::path& out_dir, const RenderOptions& opts, Streams io);

/// `tracker` empty picks the task's default tracker.
int cmd_trace(const std::string& tracker, const fs::path& task_path, const fs::path& out_path, Streams io);

int cmd_rsl_check(const fs::path& rsl_path, bool lenient, Streams io);

/// Default rsl.json for a trace, written to `out_path` ("-" for standard output).
int cmd_rsl_default(const fs::path& trace_path, const fs::path& out_path, Streams io);

/// state_%03d.json per delta boundary.
int cmd_replay(const fs::path& trace_path, const fs::path& out_dir, Streams io);

struct BenchRow {
  std::string task;  // file stem
  std::string family;
  std::string tracker;
  bool trace_ok = false;
  bool validate_ok = false;
  std::map<std::string, bool> render;  // per backend
  double seconds = 0;
  std::string error;  // first failure, empty on success

  bool ok() const;
};

struct Rate {
  std::size_t attempts = 0;
  std::size_t successes = 0;
  double rate() const { return attempts == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(attempts); }
};

struct BenchReport {
  std::vector<std::string> backends;
  std::vector<BenchRow> rows;          // sorted by task id
  std::map<std::string, Rate> stages;  // "trace", "validate", "render:<backend>"
  std::map<std::string, Rate> families;
  Rate overall;

  nlohmann::ordered_json to_json() const;
};

struct BenchOptions {
  std::vector<std::string> backends{"tikz", "svg", "player"};
  unsigned jobs = 0;  // 0: hardware concurrency
  std::optional<fs::path> player_assets;
};

/// trace -> validate -> render for every *.txt task in `task_dir`. A failing
/// task only fails its own row. Every stage counts every task as an attempt.
BenchReport run_bench(const fs::path& task_dir, const fs::path& out_dir, const BenchOptions& opts);

/// run_bench, then bench.json and a summary table. Exit 1 unless every row succeeded.
int cmd_bench(const fs::path& task_dir, const fs::path& out_dir, const BenchOptions& opts, Streams io);

}  // namespace vta::cli
