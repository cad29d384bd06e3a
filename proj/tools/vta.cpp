// vta: trace / validate / render / bench front end.
#include <iostream>

#include <CLI11.hpp>

#include "vta/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace vta::cli;
  CLI::App app{"Trace-driven algorithm visualization pipeline"};
  app.require_subcommand(1);
  Streams io{std::cout, std::cerr};
  int rc = kExitOk;

  std::string trace_path;
  std::string out = ".";

  auto* validate = app.add_subcommand("validate", "Check a trace; writes diagnostics.json");
  validate->add_option("trace", trace_path, "trace.json")->required();
  validate->add_option("--out", out, "Directory for diagnostics.json");
  validate->callback([&] { rc = cmd_validate(trace_path, out, io); });

  RenderOptions ropts;
  std::string rsl_path;
  std::string assets;
  auto* render = app.add_subcommand("render", "Render a validated trace");
  render->add_option("trace", trace_path, "trace.json")->required();
  render->add_option("--backend", ropts.backend, "tikz, svg or player")->check(CLI::IsMember({"tikz", "svg", "player"}));
  render->add_option("--rsl", rsl_path, "rsl.json; the default config is used when absent or invalid");
  render->add_option("--out", out, "Output directory")->required();
  render->add_flag("--lenient-rsl", ropts.lenient_rsl, "Clamp out-of-range RSL numbers instead of rejecting");
  render->add_option("--player-assets", assets, "Prebuilt player directory (default $VTA_PLAYER_ASSETS)");
  render->callback([&] {
    if (!rsl_path.empty()) ropts.rsl = rsl_path;
    if (!assets.empty()) ropts.player_assets = assets;
    rc = cmd_render(trace_path, out, ropts, io);
  });

  std::string tracker;
  std::string task_path;
  std::string trace_out = "trace.json";
  auto* trace = app.add_subcommand("trace", "Run a built-in tracker on a task file");
  trace->add_option("tracker", tracker, "Tracker id, or 'auto'")->required();
  trace->add_option("task", task_path, "Task file")->required();
  trace->add_option("--out", trace_out, "Output trace path");
  trace->callback([&] { rc = cmd_trace(tracker == "auto" ? "" : tracker, task_path, trace_out, io); });

  BenchOptions bopts;
  std::string task_dir;
  std::vector<std::string> bench_backends;
  std::string bench_assets;
  auto* bench = app.add_subcommand("bench", "trace, validate and render every task in a directory");
  bench->add_option("tasks", task_dir, "Directory of task files")->required();
  bench->add_option("--backend", bench_backends, "Backends to render (repeatable; default all)")
      ->check(CLI::IsMember({"tikz", "svg", "player"}));
  bench->add_option("--out", out, "Output directory for bundles and bench.json")->required();
  bench->add_option("--jobs", bopts.jobs, "Worker threads (default: available cores)");
  bench->add_option("--player-assets", bench_assets, "Prebuilt player directory (default $VTA_PLAYER_ASSETS)");
  bench->callback([&] {
    if (!bench_backends.empty()) bopts.backends = bench_backends;
    if (!bench_assets.empty()) bopts.player_assets = bench_assets;
    rc = cmd_bench(task_dir, out, bopts, io);
  });

  bool lenient = false;
  auto* rsl_check = app.add_subcommand("rsl-check", "Validate an rsl.json");
  rsl_check->add_option("rsl", rsl_path, "rsl.json")->required();
  rsl_check->add_flag("--lenient-rsl", lenient, "Clamp out-of-range numbers with a warning");
  rsl_check->callback([&] { rc = cmd_rsl_check(rsl_path, lenient, io); });

  std::string rsl_out = "-";
  auto* rsl_default = app.add_subcommand("rsl-default", "Print the default rsl.json for a trace");
  rsl_default->add_option("trace", trace_path, "trace.json")->required();
  rsl_default->add_option("--out", rsl_out, "Output path, '-' for standard output");
  rsl_default->callback([&] { rc = cmd_rsl_default(trace_path, rsl_out, io); });

  auto* replay = app.add_subcommand("replay", "Dump replayed states as state_%03d.json");
  replay->add_option("trace", trace_path, "trace.json")->required();
  replay->add_option("--out", out, "Output directory");
  replay->callback([&] { rc = cmd_replay(trace_path, out, io); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitEnvironment;
  }
  return rc;
}
