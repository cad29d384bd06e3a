#include "vta/cli/commands.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "vta/backends/backends.hpp"
#include "vta/json/trace.hpp"
#include "vta/rsl/rsl.hpp"
#include "vta/trackers/trackers.hpp"

namespace vta::cli {

namespace {

using json::Diagnostic;

std::optional<std::string> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return ss.str();
}

bool write_file(const fs::path& p, std::string_view bytes) {
  std::error_code ec;
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  return static_cast<bool>(out);
}

/// Parse + validate in one report. `syntax` is set when the bytes are not JSON.
struct Checked {
  std::optional<json::Trace> trace;
  json::ValidationReport report;
  bool syntax = false;
};

Checked check(std::string_view text) {
  Checked c;
  auto parsed = json::parse_trace(text);
  c.syntax = parsed.syntax_error;
  if (!parsed.trace) {
    c.report = json::make_report(std::move(parsed.diagnostics));
    return c;
  }
  auto semantic = json::validate_trace(*parsed.trace);
  auto all = std::move(parsed.diagnostics);
  all.insert(all.end(), semantic.diagnostics.begin(), semantic.diagnostics.end());
  c.report = json::make_report(std::move(all));
  if (c.report.valid) c.trace = std::move(parsed.trace);
  return c;
}

void print_warnings(std::span<const Diagnostic> ds, std::ostream& err) {
  for (const auto& d : ds) {
    if (!d.is_error()) err << "warning: " << d.code << " " << d.path << ": " << d.message << "\n";
  }
}

/// Loads a trace that must validate; returns an exit code on failure.
std::variant<json::Trace, int> load_valid(const fs::path& path, Streams io) {
  const auto text = read_file(path);
  if (!text) {
    io.err << "error: cannot read " << path.string() << "\n";
    return kExitEnvironment;
  }
  auto c = check(*text);
  if (c.syntax) {
    io.err << format_repair_block(c.report.diagnostics);
    return kExitEnvironment;
  }
  if (!c.trace) {
    io.err << format_repair_block(c.report.errors());
    return kExitSemantic;
  }
  print_warnings(c.report.diagnostics, io.err);
  return std::move(*c.trace);
}

/// RSL from a file, or the default config. Never fails.
rsl::RslConfig resolve_rsl(const std::optional<fs::path>& path, bool lenient, const rsl::TraceFeatures& features,
                           std::ostream& err) {
  if (!path) {
    err << "warning: no rsl given; using the default config\n";
    return rsl::default_rsl(features);
  }
  const auto text = read_file(*path);
  if (!text) {
    err << "warning: cannot read " << path->string() << "; using the default config\n";
    return rsl::default_rsl(features);
  }
  auto parsed = rsl::parse_rsl(*text, lenient);
  print_warnings(parsed.diagnostics, err);
  if (!parsed.config) {
    err << "warning: rsl rejected; using the default config\n";
    for (const auto& d : parsed.diagnostics) {
      if (d.is_error()) err << "  " << d.code << " " << d.path << ": " << d.message << "\n";
    }
    return rsl::default_rsl(features);
  }
  return *parsed.config;
}

/// Renders a validated trace. Throws on I/O or missing player assets.
void render(const json::Trace& trace, const rsl::RslConfig& cfg, const std::string& backend, const fs::path& out,
            const std::optional<fs::path>& assets) {
  if (backend == "player") {
    backends::emit_player_bundle(trace, cfg, out, assets);
    return;
  }
  const auto features = rsl::extract_features(trace);
  const auto config = rsl::interpret_rsl(cfg, features);
  const auto frames = backends::build_frames(trace, cfg, config);
  if (backend == "tikz") {
    backends::emit_tikz(frames, config, out);
  } else {
    backends::emit_svg(frames, config, out);
  }
}

bool known_backend(const std::string& b) { return b == "tikz" || b == "svg" || b == "player"; }

}  // namespace

int cmd_validate(const fs::path& trace_path, const fs::path& out_dir, Streams io) {
  const auto text = read_file(trace_path);
  std::vector<Diagnostic> ds;
  int rc = kExitOk;
  if (!text) {
    ds.push_back({json::Severity::Error, "UNREADABLE_INPUT", "", "cannot read " + trace_path.string(), std::nullopt});
    rc = kExitEnvironment;
  } else {
    auto c = check(*text);
    ds = c.report.diagnostics;
    rc = c.syntax ? kExitEnvironment : (c.report.valid ? kExitOk : kExitSemantic);
  }
  if (!write_file(out_dir / "diagnostics.json", json::diagnostics_to_json(ds))) {
    io.err << "error: cannot write " << (out_dir / "diagnostics.json").string() << "\n";
    return kExitEnvironment;
  }
  print_warnings(ds, io.err);
  if (rc != kExitOk) {
    io.err << format_repair_block(json::make_report(ds).errors());
  } else {
    io.out << trace_path.string() << ": valid\n";
  }
  return rc;
}

int cmd_render(const fs::path& trace_path, const fs::path& out_dir, const RenderOptions& opts, Streams io) {
  if (!known_backend(opts.backend)) {
    io.err << "error: unknown backend '" << opts.backend << "'\n";
    return kExitEnvironment;
  }
  auto loaded = load_valid(trace_path, io);
  if (auto* rc = std::get_if<int>(&loaded)) return *rc;
  const auto& trace = std::get<json::Trace>(loaded);
  const auto cfg = resolve_rsl(opts.rsl, opts.lenient_rsl, rsl::extract_features(trace), io.err);
  try {
    render(trace, cfg, opts.backend, out_dir, opts.player_assets);
  } catch (const backends::ValidationGateError& e) {
    io.err << format_repair_block(e.report().errors());
    return kExitSemantic;
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitEnvironment;
  }
  io.out << "wrote " << opts.backend << " bundle to " << out_dir.string() << "\n";
  return kExitOk;
}

int cmd_trace(const std::string& tracker, const fs::path& task_path, const fs::path& out_path, Streams io) {
  const auto text = read_file(task_path);
  if (!text) {
    io.err << "error: cannot read " << task_path.string() << "\n";
    return kExitEnvironment;
  }
  try {
    const auto task = trackers::parse_task_file(*text);
    const auto id = tracker.empty() ? trackers::default_tracker(task) : std::optional<std::string>(tracker);
    if (!id) {
      io.err << "error: no tracker fits this task; pass one explicitly\n";
      return kExitSemantic;
    }
    const auto run = trackers::run_tracker(*id, task);
    const auto bytes = json::serialize_trace(run.trace);
    const auto c = check(bytes);
    if (!c.report.valid) {
      io.err << format_repair_block(c.report.errors());
      return kExitSemantic;
    }
    if (!write_file(out_path, bytes)) {
      io.err << "error: cannot write " << out_path.string() << "\n";
      return kExitEnvironment;
    }
    io.out << fmt::format("{}: {} deltas -> {}\n", *id, run.trace.deltas.size(), out_path.string());
    return kExitOk;
  } catch (const trackers::MalformedTask& e) {
    io.err << "error: " << task_path.string() << ": " << e.what() << "\n";
  } catch (const trackers::IncompatibleInput& e) {
    io.err << "error: incompatible input: " << e.what() << "\n";
  } catch (const trackers::InternalInstrumentationFault& e) {
    io.err << "error: tracker fault: " << e.what() << "\n";
  }
  return kExitSemantic;
}

int cmd_rsl_check(const fs::path& rsl_path, bool lenient, Streams io) {
  const auto text = read_file(rsl_path);
  if (!text) {
    io.err << "error: cannot read " << rsl_path.string() << "\n";
    return kExitEnvironment;
  }
  const auto report = rsl::validate_rsl(*text, lenient);
  for (const auto& d : report.diagnostics) {
    io.out << to_string(d.severity) << " " << d.code << " " << d.path << ": " << d.message << "\n";
  }
  if (!report.valid) return kExitSemantic;
  io.out << rsl_path.string() << ": valid\n";
  return kExitOk;
}

int cmd_rsl_default(const fs::path& trace_path, const fs::path& out_path, Streams io) {
  auto loaded = load_valid(trace_path, io);
  if (auto* rc = std::get_if<int>(&loaded)) return *rc;
  const auto text = rsl::serialize_rsl(rsl::default_rsl(rsl::extract_features(std::get<json::Trace>(loaded))));
  if (out_path == "-") {
    io.out << text;
    return kExitOk;
  }
  if (!write_file(out_path, text)) {
    io.err << "error: cannot write " << out_path.string() << "\n";
    return kExitEnvironment;
  }
  return kExitOk;
}

int cmd_replay(const fs::path& trace_path, const fs::path& out_dir, Streams io) {
  auto loaded = load_valid(trace_path, io);
  if (auto* rc = std::get_if<int>(&loaded)) return *rc;
  const auto states = json::replay_trace(std::get<json::Trace>(loaded));
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto p = out_dir / fmt::format("state_{:03d}.json", i);
    if (!write_file(p, json::serialize_state(states[i], i))) {
      io.err << "error: cannot write " << p.string() << "\n";
      return kExitEnvironment;
    }
  }
  io.out << fmt::format("wrote {} states to {}\n", states.size(), out_dir.string());
  return kExitOk;
}

// --- bench ---------------------------------------------------------------------

bool BenchRow::ok() const {
  if (!trace_ok || !validate_ok) return false;
  return std::all_of(render.begin(), render.end(), [](const auto& kv) { return kv.second; });
}

nlohmann::ordered_json BenchReport::to_json() const {
  using nlohmann::ordered_json;
  auto rate = [](const Rate& r) {
    return ordered_json{{"attempts", r.attempts}, {"successes", r.successes}, {"rate", r.rate()}};
  };
  ordered_json j;
  j["backends"] = backends;
  auto rs = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json row{{"task", r.task},         {"family", r.family},           {"tracker", r.tracker},
                     {"trace_ok", r.trace_ok}, {"validate_ok", r.validate_ok}, {"render", r.render},
                     {"ok", r.ok()},           {"seconds", r.seconds}};
    if (!r.error.empty()) row["error"] = r.error;
    rs.push_back(std::move(row));
  }
  j["rows"] = std::move(rs);
  ordered_json st = ordered_json::object();
  for (const auto& [k, v] : stages) st[k] = rate(v);
  j["stages"] = std::move(st);
  ordered_json fam = ordered_json::object();
  for (const auto& [k, v] : families) fam[k] = rate(v);
  j["families"] = std::move(fam);
  j["overall"] = rate(overall);
  return j;
}

namespace {

BenchRow bench_one(const fs::path& task_path, const fs::path& out_dir, const BenchOptions& opts) {
  BenchRow row;
  row.task = task_path.stem().string();
  for (const auto& b : opts.backends) row.render[b] = false;
  const auto t0 = std::chrono::steady_clock::now();
  auto fail = [&](std::string what) {
    if (row.error.empty()) row.error = std::move(what);
  };
  try {
    const auto text = read_file(task_path);
    if (!text) throw std::runtime_error("cannot read task file");
    row.family = trackers::peek_family(*text);
    const auto task = trackers::parse_task_file(*text);
    if (!task.family.empty()) row.family = task.family;
    const auto id = trackers::default_tracker(task);
    if (!id) throw trackers::IncompatibleInput("no tracker fits this task");
    row.tracker = *id;
    if (row.family.empty()) {
      if (const auto* info = trackers::find_tracker(*id)) row.family = info->family;
    }
    const auto run = trackers::run_tracker(*id, task);
    row.trace_ok = true;
    const auto bytes = json::serialize_trace(run.trace);
    const auto c = check(bytes);
    if (!c.trace) throw std::runtime_error("validation: " + format_repair_block(c.report.errors()));
    row.validate_ok = true;
    write_file(out_dir / row.task / "trace.json", bytes);
    const auto cfg = rsl::default_rsl(rsl::extract_features(*c.trace));
    for (const auto& b : opts.backends) {
      try {
        render(*c.trace, cfg, b, out_dir / row.task / b, opts.player_assets);
        row.render[b] = true;
      } catch (const std::exception& e) {
        fail(b + ": " + e.what());
      }
    }
  } catch (const std::exception& e) {
    fail(e.what());
  }
  if (row.family.empty()) row.family = "unknown";
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

}  // namespace

BenchReport run_bench(const fs::path& task_dir, const fs::path& out_dir, const BenchOptions& opts) {
  std::vector<fs::path> tasks;
  for (const auto& e : fs::directory_iterator(task_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".txt") tasks.push_back(e.path());
  }
  // numeric problem id first, so 207 sorts before 1143
  auto key = [](const fs::path& p) {
    const auto stem = p.stem().string();
    std::size_t digits = 0;
    while (digits < stem.size() && std::isdigit(static_cast<unsigned char>(stem[digits]))) ++digits;
    const auto id = digits > 0 && digits < 19 ? std::stoll(stem.substr(0, digits)) : -1;
    return std::pair{id, stem};
  };
  std::sort(tasks.begin(), tasks.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });

  BenchReport report;
  report.backends = opts.backends;
  report.rows.resize(tasks.size());
  unsigned jobs = opts.jobs ? opts.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, std::max<std::size_t>(1, tasks.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) report.rows[i] = bench_one(tasks[i], out_dir, opts);
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // file stems are unique, so path order is task-id order
  for (const auto& r : report.rows) {
    auto tally = [&](Rate& rate, bool ok) {
      ++rate.attempts;
      rate.successes += ok ? 1 : 0;
    };
    tally(report.stages["trace"], r.trace_ok);
    tally(report.stages["validate"], r.validate_ok);
    for (const auto& b : opts.backends) tally(report.stages["render:" + b], r.render.at(b));
    tally(report.families[r.family], r.ok());
    tally(report.overall, r.ok());
  }
  return report;
}

int cmd_bench(const fs::path& task_dir, const fs::path& out_dir, const BenchOptions& opts, Streams io) {
  if (!fs::is_directory(task_dir)) {
    io.err << "error: " << task_dir.string() << " is not a directory\n";
    return kExitEnvironment;
  }
  for (const auto& b : opts.backends) {
    if (!known_backend(b)) {
      io.err << "error: unknown backend '" << b << "'\n";
      return kExitEnvironment;
    }
  }
  const auto report = run_bench(task_dir, out_dir, opts);
  if (!write_file(out_dir / "bench.json", report.to_json().dump(2) + "\n")) {
    io.err << "error: cannot write bench.json\n";
    return kExitEnvironment;
  }
  io.out << fmt::format("{:<40} {:<10} {:<22} {}\n", "task", "family", "tracker", "result");
  for (const auto& r : report.rows) {
    io.out << fmt::format("{:<40} {:<10} {:<22} {}\n", r.task, r.family, r.tracker, r.ok() ? "ok" : "FAIL: " + r.error);
  }
  io.out << "\n";
  for (const auto& [name, rate] : report.stages) {
    io.out << fmt::format("stage  {:<16} {:>3}/{:<3} {:6.1f}%\n", name, rate.successes, rate.attempts, 100 * rate.rate());
  }
  for (const auto& [name, rate] : report.families) {
    io.out << fmt::format("family {:<16} {:>3}/{:<3} {:6.1f}%\n", name, rate.successes, rate.attempts, 100 * rate.rate());
  }
  io.out << fmt::format("overall{:<16} {:>3}/{:<3} {:6.1f}%\n", "", report.overall.successes, report.overall.attempts,
                        100 * report.overall.rate());
  return report.overall.successes == report.overall.attempts ? kExitOk : kExitSemantic;
}

}  // namespace vta::cli
