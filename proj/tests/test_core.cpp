#include <doctest.h>

#include "support/fuzz.hpp"
#include "vta/core/algebra.hpp"

using namespace vta::core;

namespace {

VisualState array_state(std::vector<std::int64_t> xs) {
  VisualState s;
  ArrayView a;
  for (auto x : xs) a.elements.push_back({Value{x}});
  s.main = a;
  s.styles = default_styles();
  s.styles["hot"] = StyleDef{"#FF0000", std::nullopt, std::nullopt};
  s.pseudocode = {"a", "b"};
  s.auxiliary_views = {AuxView{"stack", AuxKind::List, {}}, AuxView{"vars", AuxKind::Map, {}}};
  return s;
}

std::vector<std::int64_t> values(const VisualState& s) {
  std::vector<std::int64_t> out;
  for (const auto& e : std::get<ArrayView>(s.main).elements) {
    out.push_back(std::holds_alternative<std::int64_t>(e.value) ? std::get<std::int64_t>(e.value) : -999);
  }
  return out;
}

VisualState graph_state() {
  VisualState s;
  GraphView g;
  g.nodes = {{"A", "A", "idle", {}}, {"B", "B", "idle", {}}, {"C", "C", "idle", {}}};
  g.edges = {{"A", "B", Value{std::int64_t{4}}, false, "idle"}, {"B", "C", std::nullopt, true, "idle"}};
  s.main = g;
  s.styles = default_styles();
  s.pseudocode = {"x"};
  return s;
}

ApplyErrorKind failure(const VisualState& s, const Operation& op) {
  try {
    (void)apply_operation(s, op);
  } catch (const ApplyError& e) {
    return e.kind();
  }
  FAIL("op applied");
  return ApplyErrorKind::TargetNotFound;
}

}  // namespace

TEST_CASE("move elements relocates simultaneously") {
  auto s = apply_operation(array_state({1, 2, 3}), op::MoveElements{{{0, 2}, {2, 0}}});
  CHECK(values(s) == std::vector<std::int64_t>{3, 2, 1});
  // a 3-cycle only works if every source is read before any write
  s = apply_operation(array_state({1, 2, 3}), op::MoveElements{{{0, 1}, {1, 2}, {2, 0}}});
  CHECK(values(s) == std::vector<std::int64_t>{3, 1, 2});
  CHECK(failure(array_state({1}), op::MoveElements{{{0, 1}}}) == ApplyErrorKind::IndexOutOfRange);
}

TEST_CASE("shift leaves null idle slots behind") {
  auto s = apply_operation(array_state({1, 2, 3, 4}), op::ShiftElements{{0, 2}, 1});
  const auto& a = std::get<ArrayView>(s.main);
  REQUIRE(a.elements.size() == 4);
  CHECK(is_null(a.elements[0].value));
  CHECK(a.elements[1].value == Value{std::int64_t{1}});
  CHECK(a.elements[2].value == Value{std::int64_t{2}});
  CHECK(a.elements[3].value == Value{std::int64_t{4}});
}

TEST_CASE("pointers attach, detach and clear") {
  auto s = apply_operation(array_state({1, 2}), op::SetPointer{"i", 1});
  CHECK(std::get<ArrayView>(s.main).pointers.at("i") == 1);
  s = apply_operation(s, op::SetPointer{"i", std::nullopt});
  CHECK_FALSE(std::get<ArrayView>(s.main).pointers.at("i").has_value());
  s = apply_operation(s, op::ClearPointer{"i"});
  CHECK(std::get<ArrayView>(s.main).pointers.empty());
  CHECK(failure(s, op::SetPointer{"i", 5}) == ApplyErrorKind::IndexOutOfRange);
}

TEST_CASE("graph ops keep edges referentially sound") {
  auto s = apply_operation(graph_state(), op::RemoveNode{"B"});
  const auto& g = std::get<GraphView>(s.main);
  CHECK(g.nodes.size() == 2);
  CHECK(g.edges.empty());
  CHECK(failure(graph_state(), op::AddNode{GraphNode{"A", "A", "idle", {}}}) == ApplyErrorKind::DuplicateId);
  CHECK(failure(graph_state(), op::UpdateNodeStyle{{"Z"}, "idle"}) == ApplyErrorKind::TargetNotFound);
}

TEST_CASE("undirected edges match either orientation") {
  auto s = apply_operation(graph_state(), op::UpdateEdgeStyle{{{"B", "A"}}, "idle"});
  CHECK(std::get<GraphView>(s.main).edges[0].style_key == "idle");
  CHECK(failure(graph_state(), op::UpdateEdgeStyle{{{"C", "B"}}, "idle"}) == ApplyErrorKind::TargetNotFound);
}

TEST_CASE("node properties merge") {
  auto s = apply_operation(graph_state(), op::UpdateNodeProperties{"A", {{"d", Value{std::int64_t{1}}}}});
  s = apply_operation(s, op::UpdateNodeProperties{"A", {{"e", Value{"x"}}}});
  const auto& p = std::get<GraphView>(s.main).find("A")->properties;
  CHECK(p.size() == 2);
  CHECK(p.at("d") == Value{std::int64_t{1}});
}

TEST_CASE("tree child slots") {
  VisualState s;
  s.main = TreeView{};
  s.styles = default_styles();
  s = apply_operation(s, op::AddChild{std::nullopt, {"r", "r"}, 0});
  CHECK(failure(s, op::AddChild{std::nullopt, {"q", "q"}, 0}) == ApplyErrorKind::StructuralViolation);
  s = apply_operation(s, op::AddChild{"r", {"R", "R"}, 1});
  auto& t = std::get<TreeView>(s.main);
  REQUIRE(t.find("r")->children.size() == 2);
  CHECK_FALSE(t.find("r")->children[0].has_value());
  CHECK(t.find("r")->children[1] == "R");
  // an empty slot is filled in place
  s = apply_operation(s, op::AddChild{"r", {"L", "L"}, 0});
  const auto& t2 = std::get<TreeView>(s.main);
  CHECK(t2.find("r")->children == std::vector<std::optional<std::string>>{"L", "R"});
  CHECK(t2.parent_of("L") == "r");
  CHECK(t2.roots() == std::vector<std::string>{"r"});
}

TEST_CASE("reparent refuses cycles") {
  VisualState s;
  s.main = TreeView{};
  s.styles = default_styles();
  s = apply_operation(s, op::AddChild{std::nullopt, {"a", "a"}, 0});
  s = apply_operation(s, op::AddChild{"a", {"b", "b"}, 0});
  CHECK(failure(s, op::Reparent{"a", "b", 0}) == ApplyErrorKind::StructuralViolation);
}

TEST_CASE("hash buckets overwrite, collide and rehash") {
  VisualState s;
  s.main = HashtableView{std::vector<std::vector<HashEntry>>(2)};
  s.styles = default_styles();
  s.styles["hit"] = StyleDef{"#FF0000", std::nullopt, std::nullopt};
  s = apply_operation(s, op::InsertIntoBucket{0, Value{std::int64_t{2}}, Value{"x"}});
  s = apply_operation(s, op::InsertIntoBucket{0, Value{std::int64_t{4}}, Value{"y"}});
  s = apply_operation(s, op::InsertIntoBucket{0, Value{std::int64_t{2}}, Value{"z"}});
  auto& h = std::get<HashtableView>(s.main);
  REQUIRE(h.buckets[0].size() == 2);
  CHECK(h.buckets[0][0].value == Value{"z"});
  CHECK(failure(s, op::InsertIntoBucket{1, Value{std::int64_t{2}}, Value{"w"}}) == ApplyErrorKind::DuplicateId);
  s = apply_operation(s, op::HighlightCollision{0, "hit"});
  for (const auto& e : std::get<HashtableView>(s.main).buckets[0]) CHECK(e.style_key == "hit");
  CHECK(failure(s, op::Rehash{4, {{Value{std::int64_t{2}}, 2}}}) == ApplyErrorKind::StructuralViolation);
  s = apply_operation(s, op::Rehash{4, {{Value{std::int64_t{2}}, 2}, {Value{std::int64_t{4}}, 0}}});
  const auto& h2 = std::get<HashtableView>(s.main);
  CHECK(h2.capacity() == 4);
  CHECK(h2.buckets[2].size() == 1);
  CHECK(h2.buckets[0].size() == 1);
}

TEST_CASE("table cells and dependencies") {
  VisualState s;
  s.main = TableView::filled(2, 3, Value{});
  s.styles = default_styles();
  s = apply_operation(s, op::UpdateTableCell{1, 2, Value{std::int64_t{7}}});
  CHECK(std::get<TableView>(s.main).at(1, 2).value == Value{std::int64_t{7}});
  const auto before = s;
  CHECK(apply_operation(s, op::ShowDependency{{0, 0}, {1, 2}}) == before);
  CHECK(failure(s, op::ShowDependency{{0, 0}, {2, 0}}) == ApplyErrorKind::IndexOutOfRange);
}

TEST_CASE("sort-specific ops refuse other sorts") {
  CHECK(failure(array_state({1}), op::UpdateNodeStyle{{"A"}, "idle"}) == ApplyErrorKind::ViewKindMismatch);
  CHECK(failure(graph_state(), op::UpdateStyle{{0}, "idle"}) == ApplyErrorKind::ViewKindMismatch);
  CHECK(required_sort(OpCode::ShowComment) == std::nullopt);
  CHECK(required_sort(OpCode::Rotate) == ViewSort::Tree);
}

TEST_CASE("aux lists and maps") {
  auto s = array_state({1});
  s = apply_operation(s, op::AppendToList{"stack", AuxEntry{std::nullopt, Value{std::int64_t{1}}}});
  s = apply_operation(s, op::AppendToList{"stack", AuxEntry{std::nullopt, Value{std::int64_t{2}}}});
  s = apply_operation(s, op::PopFromList{"stack", ListEnd::Front});
  REQUIRE(s.aux("stack")->entries.size() == 1);
  CHECK(s.aux("stack")->entries[0].value == Value{std::int64_t{2}});
  s = apply_operation(s, op::AppendToList{"vars", AuxEntry{Value{"k"}, Value{std::int64_t{1}}}});
  s = apply_operation(s, op::AppendToList{"vars", AuxEntry{Value{"k"}, Value{std::int64_t{5}}}});
  REQUIRE(s.aux("vars")->entries.size() == 1);
  CHECK(s.aux("vars")->entries[0].value == Value{std::int64_t{5}});
  CHECK(failure(s, op::AppendToList{"vars", AuxEntry{std::nullopt, Value{}}}) == ApplyErrorKind::ViewKindMismatch);
  CHECK(failure(array_state({}), op::PopFromList{"stack", ListEnd::Back}) == ApplyErrorKind::IndexOutOfRange);
  CHECK(failure(array_state({}), op::PopFromList{"queue", ListEnd::Back}) == ApplyErrorKind::TargetNotFound);
}

TEST_CASE("comments replace by id and need live anchors") {
  auto s = apply_operation(array_state({1, 2}), op::ShowComment{"c", "one", Anchor{"main", "1"}});
  s = apply_operation(s, op::ShowComment{"c", "two", std::nullopt});
  REQUIRE(s.comments.size() == 1);
  CHECK(s.comments[0].text == "two");
  CHECK(failure(s, op::ShowComment{"d", "x", Anchor{"main", "9"}}) == ApplyErrorKind::TargetNotFound);
  s = apply_operation(s, op::HideComment{"c"});
  CHECK(s.comments.empty());
}

TEST_CASE("write targets") {
  CHECK(write_targets(op::UpdateStyle{{2, 1}, "x"}) == std::vector<std::string>{"style:1", "style:2"});
  CHECK(write_targets(op::AppendToList{"q", {}}) == std::vector<std::string>{"list:q"});
  CHECK(write_targets(op::ShowDependency{{0, 0}, {1, 1}}).empty());
}

TEST_CASE("flatten keeps group order") {
  Delta d{"x", {1}, {{op::SetPointer{"a", 0}}, {op::SetPointer{"b", 0}, op::ClearPointer{"a"}}}};
  const auto w = flatten_delta(d);
  REQUIRE(w.size() == 3);
  CHECK(w[2].code() == OpCode::ClearPointer);
}

// --- monoid / action laws ------------------------------------------------------------

namespace {

/// Result of acting on a state: the state, or the failure.
std::optional<VisualState> act(const VisualState& s, std::span<const Operation> w) {
  try {
    return apply_word(s, w);
  } catch (const ApplyError&) {
    return std::nullopt;
  }
}

}  // namespace

TEST_CASE("concatenation is associative with the empty word as identity") {
  vta::testing::Rng rng(11);
  for (int k = 0; k < 1000; ++k) {
    const auto s = vta::testing::random_state(rng);
    const auto a = vta::testing::random_word(s, rng);
    const auto b = vta::testing::random_word(s, rng);
    const auto c = vta::testing::random_word(s, rng);
    CHECK(concat_words(concat_words(a, b), c) == concat_words(a, concat_words(b, c)));
    CHECK(concat_words(a, {}) == a);
    CHECK(concat_words({}, a) == a);
  }
}

TEST_CASE("the word monoid acts on states") {
  vta::testing::Rng rng(12);
  int defined = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto s = vta::testing::random_state(rng);
    const auto a = vta::testing::random_word(s, rng);
    CHECK(act(s, {}) == s);
    const auto first = act(s, a);
    // draw b near the intermediate state so the composite is often defined
    const auto b = vta::testing::random_word(first ? *first : s, rng);
    const auto whole = act(s, concat_words(a, b));
    const auto stepwise = first ? act(*first, b) : std::nullopt;
    CHECK(whole == stepwise);
    defined += whole ? 1 : 0;
  }
  // the generator must exercise both outcomes
  CHECK(defined > 100);
  CHECK(defined < 1000);
}

TEST_CASE("applying a word equals folding single ops") {
  vta::testing::Rng rng(13);
  for (int k = 0; k < 1000; ++k) {
    const auto s = vta::testing::random_state(rng);
    const auto w = vta::testing::random_word(s, rng);
    std::optional<VisualState> fold = s;
    for (const auto& o : w) {
      if (!fold) break;
      try {
        fold = apply_operation(*fold, o);
      } catch (const ApplyError&) {
        fold.reset();
      }
    }
    CHECK(act(s, w) == fold);
    if (fold) CHECK(well_formed(*fold));
  }
}
