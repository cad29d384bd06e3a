#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vta/core/operation.hpp"
#include "vta/core/state.hpp"
#include "vta/json/trace.hpp"

namespace vta::trackers {

using json::ordered_json;

class MalformedTask : public std::runtime_error {
 public:
  MalformedTask(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class IncompatibleInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A tracker emitted something its own Visualizer or the validator refused.
/// Shipped trackers must never raise it.
class InternalInstrumentationFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class InputKind { Array, Graph, Matrix, Pairs };

std::string_view to_string(InputKind kind);

struct InputNode {
  std::string id;
  std::string label;
  bool operator==(const InputNode&) const = default;
};

struct InputEdge {
  std::string from;
  std::string to;
  std::optional<core::Value> weight;
  bool directed = false;
  bool operator==(const InputEdge&) const = default;
};

struct GraphInput {
  std::vector<InputNode> nodes;  // edge endpoints missing from "nodes" are added, label = id
  std::vector<InputEdge> edges;
  bool operator==(const GraphInput&) const = default;
};

/// One task file. Exactly one of array/graph/matrix/pairs is meaningful, per `kind`.
struct TaskSpec {
  std::optional<std::int64_t> problem_id;
  std::string title;  // from "Algorithm Snippet (<title>):", if present
  std::string difficulty;
  std::string family;
  std::string goal;
  std::string request;
  std::optional<std::string> tracker;  // "- Tracker:" line, overrides the default choice

  InputKind kind = InputKind::Array;
  std::vector<core::Value> array;
  GraphInput graph;
  std::vector<std::vector<core::Value>> matrix;
  std::vector<std::pair<core::Value, core::Value>> pairs;

  std::optional<std::string> source;
  std::optional<core::Value> target;
  std::optional<std::int64_t> capacity;

  bool operator==(const TaskSpec&) const = default;
};

/// Reads the task-file format: "- Key: value" metadata lines followed by an
/// `input_data = {...}` block. The block may use Python literals (True,
/// False, None), single-quoted strings, trailing commas and "..." elisions.
TaskSpec parse_task_file(std::string_view text);

/// The "- Family:" value of a task file, read leniently so a file whose
/// input block is broken can still be attributed. Empty when absent.
std::string peek_family(std::string_view text);

/// Builds a TaskSpec from an already decoded input_data object.
TaskSpec task_from_input(const ordered_json& input_data, std::string family = {});

/// Accumulates a trace while a tracker runs. Each step is applied to the
/// Visualizer's own copy of the state at once, so a bad op fails at the call
/// site rather than at validation time.
class Visualizer {
 public:
  Visualizer(std::string name, std::string family, std::vector<std::string> pseudocode, core::MainView initial,
             std::map<std::string, core::StyleDef> styles);

  void add_aux(core::AuxView view);

  /// One delta: caption, 1-based pseudocode lines, grouped ops.
  void step(std::string caption, std::vector<int> lines, std::vector<core::OpGroup> groups);
  void step(std::string caption, int line, std::vector<core::Operation> ops) {
    step(std::move(caption), std::vector<int>{line}, std::vector<core::OpGroup>{std::move(ops)});
  }

  /// Records the tracker's own model of the state at the current delta
  /// boundary. One call per boundary, counting the initial frame.
  void observe(ordered_json snapshot) { snapshots_.push_back(std::move(snapshot)); }

  const core::VisualState& state() const { return current_; }
  std::size_t delta_count() const { return trace_.deltas.size(); }

  /// Finished trace; throws InternalInstrumentationFault unless it validates clean.
  json::Trace finish();
  std::vector<ordered_json> take_snapshots() { return std::move(snapshots_); }

 private:
  json::Trace trace_;
  core::VisualState current_;
  std::vector<ordered_json> snapshots_;
  bool started_ = false;
};

struct TrackerRun {
  json::Trace trace;
  std::vector<ordered_json> snapshots;  // one per delta boundary
};

struct TrackerInfo {
  std::string id;
  std::string family;
  std::vector<InputKind> accepts;
  std::vector<std::string> pseudocode;
  std::function<TrackerRun(const TaskSpec&)> run;
  /// The same model the tracker records with observe(), recomputed from a replayed state.
  std::function<ordered_json(const core::VisualState&)> project;
};

/// Bucket used by chained_hash_insert: integers by floor modulo, anything
/// else by 32-bit FNV-1a over its key text.
std::int64_t hash_bucket(const core::Value& key, std::int64_t capacity);

/// Static registry in a fixed order.
std::span<const TrackerInfo> list_trackers();
const TrackerInfo* find_tracker(std::string_view id);

/// Throws IncompatibleInput for unknown trackers or input kinds they do not accept.
TrackerRun run_tracker(std::string_view id, const TaskSpec& task);

/// Tracker used when a task file names none: decided by family and input shape.
std::optional<std::string> default_tracker(const TaskSpec& task);

}  // namespace vta::trackers
