#include <doctest.h>

#include <fstream>
#include <sstream>

#include "support/fuzz.hpp"
#include "vta/core/algebra.hpp"

using namespace vta;
using trackers::InputKind;
using trackers::TaskSpec;

namespace {

const std::filesystem::path kSource(VTA_SOURCE_DIR);

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t malformed_line(std::string_view text) {
  try {
    trackers::parse_task_file(text);
  } catch (const trackers::MalformedTask& e) {
    return e.line();
  }
  return 0;
}

TaskSpec array_task(std::vector<std::int64_t> xs) {
  TaskSpec t;
  t.kind = InputKind::Array;
  for (auto x : xs) t.array.push_back(core::Value{x});
  return t;
}

}  // namespace

TEST_CASE("the worked course-schedule task parses") {
  const auto t = trackers::parse_task_file(slurp(kSource / "tests" / "data" / "course_schedule_elided.txt"));
  CHECK(t.problem_id == 207);
  CHECK(t.title == "Course Schedule");
  CHECK(t.difficulty == "Medium");
  CHECK(t.goal == "Generate `graph_tracker.py`");
  CHECK(t.request == "Create visualization tracker for \"Course Schedule (Graph)\"");
  CHECK(t.kind == InputKind::Graph);
  REQUIRE(t.graph.nodes.size() == 2);  // A, plus B from the edge
  CHECK(t.graph.nodes[1].id == "B");
  REQUIRE(t.graph.edges.size() == 1);
  CHECK(t.graph.edges[0].directed);
  CHECK(t.graph.edges[0].weight == core::Value{std::int64_t{4}});
  CHECK(t.source == "A");
  CHECK(trackers::default_tracker(t) == "dijkstra");
  const auto run = trackers::run_tracker(*trackers::default_tracker(t), t);
  CHECK(json::validate_trace(run.trace).valid);
}

TEST_CASE("every shipped task runs through its default tracker") {
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kSource / "data" / "tasks")) {
    CAPTURE(entry.path().filename().string());
    const auto t = trackers::parse_task_file(slurp(entry.path()));
    const auto id = trackers::default_tracker(t);
    REQUIRE(id);
    const auto run = trackers::run_tracker(*id, t);
    CHECK(json::validate_trace(run.trace).valid);
    ++count;
  }
  CHECK(count == 9);
}

TEST_CASE("python literals, single quotes and trailing commas") {
  const auto t = trackers::parse_task_file(
      "- Family: Hashtable\n- Input:\ninput_data = {\n  'pairs': [[1, 'a'], [2, None],],\n}\n");
  REQUIRE(t.pairs.size() == 2);
  CHECK(t.pairs[0].second == core::Value{"a"});
  CHECK(core::is_null(t.pairs[1].second));
  CHECK(t.family == "Hashtable");
  const auto g = trackers::parse_task_file(
      "input_data = {'graph': {'nodes': ['A'], 'edges': [{'from': 'A', 'to': 'B', 'directed': True}]}}\n");
  REQUIRE(g.graph.edges.size() == 1);
  CHECK(g.graph.edges[0].directed);
  CHECK(g.graph.nodes.size() == 2);
}

TEST_CASE("malformed task files name the line") {
  CHECK(malformed_line("") == 1);
  CHECK(malformed_line("- Family: Sorting\n") == 1);
  CHECK(malformed_line("- Family: Sorting\nnonsense here\n") == 2);
  CHECK(malformed_line("- Input:\ninput_data = {\n  \"array\": [1, 2],\n  \"x\": @\n}\n") == 4);
  CHECK(malformed_line("- Input:\ninput_data = {\n  \"array\": [1, 2,\n  \"x\": 3\n}\n") == 2);  // opened, never closed
  CHECK(malformed_line("input_data = {\"array\": [1], \"graph\": {}}\n") == 1);
  CHECK(malformed_line("input_data = {\"array\": [1],\n \"colour\": 3}\n") >= 1);
  CHECK(malformed_line("input_data = {\"array\": [1]\n") == 1);
  CHECK(malformed_line("input_data = {'array': 'unterminated}\n") == 1);
}

TEST_CASE("incompatible inputs are refused before any trace exists") {
  TaskSpec graph;
  graph.kind = InputKind::Graph;
  graph.graph.nodes = {{"A", "A"}, {"B", "B"}};
  graph.graph.edges = {{"A", "B", core::Value{std::int64_t{1}}, true}};
  CHECK_THROWS_AS(trackers::run_tracker("bubble_sort", graph), trackers::IncompatibleInput);
  CHECK_THROWS_AS(trackers::run_tracker("no_such_tracker", array_task({1})), trackers::IncompatibleInput);

  auto unsorted = array_task({3, 1, 2});
  unsorted.target = core::Value{std::int64_t{3}};
  CHECK_THROWS_AS(trackers::run_tracker("two_pointer_search", unsorted), trackers::IncompatibleInput);
  CHECK_THROWS_AS(trackers::run_tracker("sieve_of_eratosthenes", array_task({0, 1})), trackers::IncompatibleInput);

  auto negative = graph;
  negative.graph.edges[0].weight = core::Value{std::int64_t{-1}};
  CHECK_THROWS_AS(trackers::run_tracker("dijkstra", negative), trackers::IncompatibleInput);
  auto undirected = graph;
  undirected.graph.edges[0].directed = false;
  CHECK_THROWS_AS(trackers::run_tracker("bfs_course_schedule", undirected), trackers::IncompatibleInput);

  TaskSpec pairs;
  pairs.kind = InputKind::Pairs;
  pairs.pairs = {{core::Value{std::int64_t{2}}, core::Value{std::int64_t{3}}}};
  pairs.capacity = 31;
  CHECK_THROWS_AS(trackers::run_tracker("knapsack_01", pairs), trackers::IncompatibleInput);
  pairs.capacity = 0;
  CHECK_THROWS_AS(trackers::run_tracker("chained_hash_insert", pairs), trackers::IncompatibleInput);
}

TEST_CASE("default tracker choice") {
  auto t = array_task({1, 2});
  t.family = "Sorting";
  CHECK(trackers::default_tracker(t) == "bubble_sort");
  t.family = "Tree";
  CHECK(trackers::default_tracker(t) == "bst_insert");
  t.family = "";
  t.target = core::Value{std::int64_t{3}};
  CHECK(trackers::default_tracker(t) == "two_pointer_search");
  t.tracker = "sieve_of_eratosthenes";
  CHECK(trackers::default_tracker(t) == "sieve_of_eratosthenes");
}

TEST_CASE("hash buckets") {
  CHECK(trackers::hash_bucket(core::Value{std::int64_t{7}}, 4) == 3);
  CHECK(trackers::hash_bucket(core::Value{std::int64_t{-1}}, 4) == 3);
  // FNV-1a of "a" is 0xE40C292C
  CHECK(trackers::hash_bucket(core::Value{"a"}, 1000) == 0xE40C292Cll % 1000);
}

TEST_CASE("bubble sort on a fixed input") {
  const auto run = trackers::run_tracker("bubble_sort", array_task({5, 2, 3, 1, 4}));
  const auto states = json::replay_trace(run.trace);
  const auto& final_view = std::get<core::ArrayView>(states.back().main);
  std::vector<core::Value> want;
  for (std::int64_t v = 1; v <= 5; ++v) want.push_back(core::Value{v});
  std::vector<core::Value> got;
  for (const auto& e : final_view.elements) got.push_back(e.value);
  CHECK(got == want);
  std::size_t moves = 0;
  for (const auto& d : run.trace.deltas) {
    for (const auto& op : core::flatten_delta(d)) moves += op.code() == core::OpCode::MoveElements;
  }
  CHECK(moves == 6);  // inversions of 5 2 3 1 4
}

TEST_CASE("randomised runs agree with oracles and with the tracker's own snapshots") {
  testing::Rng rng(51);
  for (const auto& info : trackers::list_trackers()) {
    for (int k = 0; k < 200; ++k) {
      const auto task = testing::random_task(info.id, rng);
      CAPTURE(info.id);
      CAPTURE(k);
      trackers::TrackerRun run;
      REQUIRE_NOTHROW(run = trackers::run_tracker(info.id, task));
      const auto report = json::validate_trace(run.trace);
      REQUIRE(report.valid);
      const auto states = json::replay_trace(run.trace);
      std::vector<core::Operation> word;
      for (const auto& d : run.trace.deltas) {
        const auto w = core::flatten_delta(d);
        word.insert(word.end(), w.begin(), w.end());
      }
      CHECK(testing::check_oracle(info.id, task, word, states.back()) == "");
      REQUIRE(run.snapshots.size() == states.size());
      for (std::size_t i = 0; i < states.size(); ++i) {
        CAPTURE(i);
        CHECK(run.snapshots[i] == info.project(states[i]));
      }
    }
  }
}
