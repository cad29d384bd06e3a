#include "vta/core/algebra.hpp"

#include <algorithm>
#include <charconv>
#include <utility>
#include <array>
#include <set>

#include <fmt/format.h>

namespace vta::core {

namespace {

constexpr std::array<std::string_view, kOpCodeCount> kOpNames = {
    "updateStyle",      "moveElements",       "shiftElements",    "updateValues",
    "setPointer",       "clearPointer",       "updateNodeStyle",  "updateNodeProperties",
    "updateEdgeStyle",  "addNode",            "removeNode",       "addChild",
    "reparent",         "rotate",             "insertIntoBucket", "rehash",
    "highlightCollision", "updateTableCell",  "highlightTableCell", "showDependency",
    "showComment",      "hideComment",        "appendToList",     "popFromList",
};

constexpr std::array<OpCode, kOpCodeCount> kAllCodes = [] {
  std::array<OpCode, kOpCodeCount> codes{};
  for (std::size_t i = 0; i < kOpCodeCount; ++i) codes[i] = static_cast<OpCode>(i);
  return codes;
}();

[[noreturn]] void fail(ApplyErrorKind kind, std::string pointer, const std::string& message) {
  throw ApplyError(kind, std::move(pointer), message);
}

template <typename View>
View& expect_view(VisualState& s, OpCode code) {
  auto* view = std::get_if<View>(&s.main);
  if (!view) {
    fail(ApplyErrorKind::ViewKindMismatch, "/op",
         fmt::format("{} cannot act on a {} view", to_string(code), to_string(sort_of(s.main))));
  }
  return *view;
}

void check_index(std::int64_t index, std::size_t size, const std::string& pointer) {
  if (index < 0 || index >= static_cast<std::int64_t>(size)) {
    fail(ApplyErrorKind::IndexOutOfRange, pointer,
         fmt::format("index {} outside [0, {})", index, size));
  }
}

std::size_t to_size(std::int64_t i) { return static_cast<std::size_t>(i); }

GraphNode& find_node(GraphView& g, const std::string& id, const std::string& pointer) {
  auto* node = g.find(id);
  if (!node) fail(ApplyErrorKind::TargetNotFound, pointer, fmt::format("no node '{}'", id));
  return *node;
}

TreeNode& find_tree_node(TreeView& t, const std::string& id, const std::string& pointer) {
  auto* node = t.find(id);
  if (!node) fail(ApplyErrorKind::TargetNotFound, pointer, fmt::format("no tree node '{}'", id));
  return *node;
}

void check_cell(const TableView& t, const CellRef& cell, const std::string& pointer) {
  if (!t.contains(cell.row, cell.col)) {
    fail(ApplyErrorKind::IndexOutOfRange, pointer,
         fmt::format("cell ({}, {}) outside {}x{} table", cell.row, cell.col, t.rows, t.cols));
  }
}

void trim_trailing_empty(std::vector<std::optional<std::string>>& slots) {
  while (!slots.empty() && !slots.back()) slots.pop_back();
}

// Slot semantics: an empty slot is filled, an occupied slot shifts the
// remaining children right, and positions past the end pad with empty slots.
void attach_child(TreeNode& parent, std::string id, std::int64_t position,
                  const std::string& pointer) {
  if (position < 0) {
    fail(ApplyErrorKind::IndexOutOfRange, pointer,
         fmt::format("child position {} is negative", position));
  }
  auto& slots = parent.children;
  const auto pos = to_size(position);
  if (pos >= slots.size()) {
    slots.resize(pos + 1);
    slots[pos] = std::move(id);
  } else if (!slots[pos]) {
    slots[pos] = std::move(id);
  } else {
    slots.insert(slots.begin() + static_cast<std::ptrdiff_t>(pos), std::move(id));
  }
}

bool in_subtree(const TreeView& t, const std::string& root, const std::string& candidate) {
  std::vector<std::string> stack{root};
  std::set<std::string> seen;
  while (!stack.empty()) {
    auto id = std::move(stack.back());
    stack.pop_back();
    if (id == candidate) return true;
    if (!seen.insert(id).second) continue;
    if (const auto* n = t.find(id)) {
      for (const auto& c : n->children) {
        if (c) stack.push_back(*c);
      }
    }
  }
  return false;
}

bool anchor_exists(const VisualState& s, const Anchor& a) {
  if (a.view != "main") {
    const auto* aux = s.aux(a.view);
    if (!aux) return false;
    std::size_t pos = 0;
    const auto* end = a.element.data() + a.element.size();
    if (std::from_chars(a.element.data(), end, pos).ptr == end && !a.element.empty()) {
      return pos < aux->entries.size();
    }
    return std::any_of(aux->entries.begin(), aux->entries.end(), [&](const AuxEntry& e) {
      return e.key && key_text(*e.key) == a.element;
    });
  }
  struct Visitor {
    const std::string& element;
    bool operator()(const ArrayView& v) const {
      std::int64_t i = -1;
      const auto* end = element.data() + element.size();
      if (std::from_chars(element.data(), end, i).ptr != end) return false;
      return i >= 0 && i < static_cast<std::int64_t>(v.elements.size());
    }
    bool operator()(const GraphView& v) const { return v.find(element) != nullptr; }
    bool operator()(const TreeView& v) const { return v.find(element) != nullptr; }
    bool operator()(const HashtableView& v) const {
      for (const auto& b : v.buckets) {
        for (const auto& e : b) {
          if (key_text(e.key) == element) return true;
        }
      }
      return false;
    }
    bool operator()(const TableView& v) const {
      std::int64_t r = -1;
      std::int64_t c = -1;
      const auto comma = element.find(',');
      if (comma == std::string::npos) return false;
      const auto* mid = element.data() + comma;
      const auto* end = element.data() + element.size();
      if (std::from_chars(element.data(), mid, r).ptr != mid) return false;
      if (std::from_chars(mid + 1, end, c).ptr != end) return false;
      return v.contains(r, c);
    }
  };
  return std::visit(Visitor{a.element}, s.main);
}

class Applier {
 public:
  explicit Applier(VisualState& s) : s_(s) {}

  void operator()(const op::UpdateStyle& p) {
    auto& a = expect_view<ArrayView>(s_, OpCode::UpdateStyle);
    for (std::size_t k = 0; k < p.indices.size(); ++k) {
      check_index(p.indices[k], a.elements.size(), fmt::format("/params/indices/{}", k));
    }
    for (auto i : p.indices) a.elements[to_size(i)].style_key = p.style_key;
  }

  void operator()(const op::MoveElements& p) {
    auto& a = expect_view<ArrayView>(s_, OpCode::MoveElements);
    std::set<std::int64_t> destinations;
    for (std::size_t k = 0; k < p.pairs.size(); ++k) {
      check_index(p.pairs[k].from, a.elements.size(), fmt::format("/params/pairs/{}/from", k));
      check_index(p.pairs[k].to, a.elements.size(), fmt::format("/params/pairs/{}/to", k));
      if (!destinations.insert(p.pairs[k].to).second) {
        fail(ApplyErrorKind::StructuralViolation, fmt::format("/params/pairs/{}/to", k),
             fmt::format("index {} is the destination of more than one move", p.pairs[k].to));
      }
    }
    const auto before = a.elements;
    for (const auto& m : p.pairs) a.elements[to_size(m.to)] = before[to_size(m.from)];
  }

  void operator()(const op::ShiftElements& p) {
    auto& a = expect_view<ArrayView>(s_, OpCode::ShiftElements);
    const auto n = static_cast<std::int64_t>(a.elements.size());
    if (p.range.start < 0 || p.range.end > n || p.range.start > p.range.end) {
      fail(ApplyErrorKind::IndexOutOfRange, "/params/range",
           fmt::format("range [{}, {}) outside [0, {})", p.range.start, p.range.end, n));
    }
    if (p.range.start + p.offset < 0 || p.range.end + p.offset > n) {
      fail(ApplyErrorKind::IndexOutOfRange, "/params/offset",
           fmt::format("shifting [{}, {}) by {} leaves the array", p.range.start, p.range.end,
                       p.offset));
    }
    const auto before = a.elements;
    for (auto i = p.range.start; i < p.range.end; ++i) {
      a.elements[to_size(i)] = ArrayElement{};
    }
    for (auto i = p.range.start; i < p.range.end; ++i) {
      a.elements[to_size(i + p.offset)] = before[to_size(i)];
    }
  }

  void operator()(const op::UpdateValues& p) {
    auto& a = expect_view<ArrayView>(s_, OpCode::UpdateValues);
    for (std::size_t k = 0; k < p.assignments.size(); ++k) {
      check_index(p.assignments[k].index, a.elements.size(),
                  fmt::format("/params/assignments/{}/index", k));
    }
    for (const auto& as : p.assignments) a.elements[to_size(as.index)].value = as.value;
  }

  void operator()(const op::SetPointer& p) {
    auto& a = expect_view<ArrayView>(s_, OpCode::SetPointer);
    if (p.index) check_index(*p.index, a.elements.size(), "/params/index");
    a.pointers[p.name] = p.index;
  }

  void operator()(const op::ClearPointer& p) {
    auto& a = expect_view<ArrayView>(s_, OpCode::ClearPointer);
    if (a.pointers.erase(p.name) == 0) {
      fail(ApplyErrorKind::TargetNotFound, "/params/name", fmt::format("no pointer '{}'", p.name));
    }
  }

  void operator()(const op::UpdateNodeStyle& p) {
    auto& g = expect_view<GraphView>(s_, OpCode::UpdateNodeStyle);
    std::vector<GraphNode*> targets;
    for (std::size_t k = 0; k < p.ids.size(); ++k) {
      targets.push_back(&find_node(g, p.ids[k], fmt::format("/params/ids/{}", k)));
    }
    for (auto* n : targets) n->style_key = p.style_key;
  }

  void operator()(const op::UpdateNodeProperties& p) {
    auto& g = expect_view<GraphView>(s_, OpCode::UpdateNodeProperties);
    auto& node = find_node(g, p.id, "/params/id");
    for (const auto& [k, v] : p.properties) node.properties[k] = v;
  }

  void operator()(const op::UpdateEdgeStyle& p) {
    auto& g = expect_view<GraphView>(s_, OpCode::UpdateEdgeStyle);
    std::vector<GraphEdge*> targets;
    for (std::size_t k = 0; k < p.edges.size(); ++k) {
      const auto& ref = p.edges[k];
      for (const auto* endpoint : {&ref.from, &ref.to}) {
        if (!g.find(*endpoint)) {
          const auto field = endpoint == &ref.from ? "from" : "to";
          throw ApplyError(ApplyErrorKind::TargetNotFound,
                           fmt::format("/params/edges/{}/{}", k, field),
                           fmt::format("edge endpoint '{}' does not reference an existing node",
                                       *endpoint))
              .mark_dangling_edge();
        }
      }
      bool matched = false;
      for (auto& e : g.edges) {
        if (e.connects(ref.from, ref.to)) {
          targets.push_back(&e);
          matched = true;
        }
      }
      if (!matched) {
        fail(ApplyErrorKind::TargetNotFound, fmt::format("/params/edges/{}", k),
             fmt::format("no edge {} -> {}", ref.from, ref.to));
      }
    }
    for (auto* e : targets) e->style_key = p.style_key;
  }

  void operator()(const op::AddNode& p) {
    auto& g = expect_view<GraphView>(s_, OpCode::AddNode);
    if (g.find(p.node.id)) {
      fail(ApplyErrorKind::DuplicateId, "/params/node/id",
           fmt::format("node '{}' already exists", p.node.id));
    }
    g.nodes.push_back(p.node);
  }

  void operator()(const op::RemoveNode& p) {
    auto& g = expect_view<GraphView>(s_, OpCode::RemoveNode);
    find_node(g, p.id, "/params/id");
    std::erase_if(g.nodes, [&](const GraphNode& n) { return n.id == p.id; });
    std::erase_if(g.edges, [&](const GraphEdge& e) { return e.from == p.id || e.to == p.id; });
  }

  void operator()(const op::AddChild& p) {
    auto& t = expect_view<TreeView>(s_, OpCode::AddChild);
    if (t.find(p.node.id)) {
      fail(ApplyErrorKind::DuplicateId, "/params/node/id",
           fmt::format("tree node '{}' already exists", p.node.id));
    }
    if (!p.parent) {
      if (!t.nodes.empty()) {
        fail(ApplyErrorKind::StructuralViolation, "/params/parent",
             "a null parent is only allowed on an empty tree");
      }
    } else {
      auto& parent = find_tree_node(t, *p.parent, "/params/parent");
      attach_child(parent, p.node.id, p.position, "/params/position");
    }
    t.nodes.push_back(TreeNode{p.node.id, p.node.label, p.node.style_key, {}});
  }

  void operator()(const op::Reparent& p) {
    auto& t = expect_view<TreeView>(s_, OpCode::Reparent);
    find_tree_node(t, p.id, "/params/id");
    find_tree_node(t, p.new_parent, "/params/newParent");
    if (in_subtree(t, p.id, p.new_parent)) {
      fail(ApplyErrorKind::StructuralViolation, "/params/newParent",
           fmt::format("moving '{}' under '{}' would create a cycle", p.id, p.new_parent));
    }
    if (p.position < 0) {
      fail(ApplyErrorKind::IndexOutOfRange, "/params/position",
           fmt::format("child position {} is negative", p.position));
    }
    if (const auto old_parent = t.parent_of(p.id)) {
      auto& slots = t.find(*old_parent)->children;
      for (auto& c : slots) {
        if (c && *c == p.id) c.reset();
      }
      trim_trailing_empty(slots);
    }
    attach_child(*t.find(p.new_parent), p.id, p.position, "/params/position");
  }

  void operator()(const op::Rotate& p) {
    auto& t = expect_view<TreeView>(s_, OpCode::Rotate);
    auto& pivot = find_tree_node(t, p.pivot, "/params/pivot");
    // Left rotation lifts the right child; right rotation lifts the left child.
    const std::size_t lift = p.direction == RotateDirection::Left ? 1 : 0;
    const std::size_t other = 1 - lift;
    if (pivot.children.size() <= lift || !pivot.children[lift]) {
      fail(ApplyErrorKind::StructuralViolation, "/params/direction",
           fmt::format("rotate {} at '{}' needs a {} child",
                       p.direction == RotateDirection::Left ? "left" : "right", p.pivot,
                       lift == 1 ? "right" : "left"));
    }
    const std::string pivot_id = pivot.id;
    const std::string child_id = *pivot.children[lift];
    const auto parent_id = t.parent_of(pivot_id);

    auto& child = *t.find(child_id);
    if (child.children.size() < 2) child.children.resize(2);
    std::optional<std::string> inner = child.children[other];
    child.children[other] = pivot_id;
    trim_trailing_empty(child.children);

    auto& pivot_ref = *t.find(pivot_id);
    if (pivot_ref.children.size() < 2) pivot_ref.children.resize(2);
    pivot_ref.children[lift] = inner;
    trim_trailing_empty(pivot_ref.children);

    if (parent_id) {
      for (auto& c : t.find(*parent_id)->children) {
        if (c && *c == pivot_id) c = child_id;
      }
    }
  }

  void operator()(const op::InsertIntoBucket& p) {
    auto& h = expect_view<HashtableView>(s_, OpCode::InsertIntoBucket);
    check_index(p.bucket, h.capacity(), "/params/bucket");
    for (std::size_t b = 0; b < h.buckets.size(); ++b) {
      for (auto& e : h.buckets[b]) {
        if (e.key != p.key) continue;
        if (b != to_size(p.bucket)) {
          fail(ApplyErrorKind::DuplicateId, "/params/key",
               fmt::format("key '{}' already stored in bucket {}", key_text(p.key), b));
        }
        e.value = p.value;
        return;
      }
    }
    h.buckets[to_size(p.bucket)].push_back(HashEntry{p.key, p.value, std::string(kIdleStyle)});
  }

  void operator()(const op::Rehash& p) {
    auto& h = expect_view<HashtableView>(s_, OpCode::Rehash);
    if (p.new_capacity < 1) {
      fail(ApplyErrorKind::StructuralViolation, "/params/newCapacity",
           fmt::format("capacity {} must be at least 1", p.new_capacity));
    }
    std::vector<HashEntry> stored;
    for (const auto& b : h.buckets) stored.insert(stored.end(), b.begin(), b.end());
    std::vector<std::vector<HashEntry>> next(to_size(p.new_capacity));
    std::vector<bool> placed(stored.size(), false);
    for (std::size_t k = 0; k < p.placement.size(); ++k) {
      const auto& pl = p.placement[k];
      check_index(pl.bucket, next.size(), fmt::format("/params/placement/{}/bucket", k));
      auto it = std::find_if(stored.begin(), stored.end(),
                             [&](const HashEntry& e) { return e.key == pl.key; });
      if (it == stored.end()) {
        fail(ApplyErrorKind::TargetNotFound, fmt::format("/params/placement/{}/key", k),
             fmt::format("key '{}' is not stored", key_text(pl.key)));
      }
      const auto idx = static_cast<std::size_t>(it - stored.begin());
      if (placed[idx]) {
        fail(ApplyErrorKind::DuplicateId, fmt::format("/params/placement/{}/key", k),
             fmt::format("key '{}' placed twice", key_text(pl.key)));
      }
      placed[idx] = true;
      next[to_size(pl.bucket)].push_back(*it);
    }
    if (std::find(placed.begin(), placed.end(), false) != placed.end()) {
      fail(ApplyErrorKind::StructuralViolation, "/params/placement",
           "placement must cover every stored key");
    }
    h.buckets = std::move(next);
  }

  void operator()(const op::HighlightCollision& p) {
    auto& h = expect_view<HashtableView>(s_, OpCode::HighlightCollision);
    check_index(p.bucket, h.capacity(), "/params/bucket");
    for (auto& e : h.buckets[to_size(p.bucket)]) e.style_key = p.style_key;
  }

  void operator()(const op::UpdateTableCell& p) {
    auto& t = expect_view<TableView>(s_, OpCode::UpdateTableCell);
    check_cell(t, {p.row, p.col}, "/params/row");
    t.at(p.row, p.col).value = p.value;
  }

  void operator()(const op::HighlightTableCell& p) {
    auto& t = expect_view<TableView>(s_, OpCode::HighlightTableCell);
    for (std::size_t k = 0; k < p.cells.size(); ++k) {
      check_cell(t, p.cells[k], fmt::format("/params/cells/{}", k));
    }
    for (const auto& c : p.cells) t.at(c.row, c.col).style_key = p.style_key;
  }

  void operator()(const op::ShowDependency& p) {
    auto& t = expect_view<TableView>(s_, OpCode::ShowDependency);
    check_cell(t, p.from, "/params/from");
    check_cell(t, p.to, "/params/to");
  }

  void operator()(const op::ShowComment& p) {
    if (p.anchor && !anchor_exists(s_, *p.anchor)) {
      fail(ApplyErrorKind::TargetNotFound, "/params/anchor",
           fmt::format("anchor {}:{} does not name an element", p.anchor->view, p.anchor->element));
    }
    auto it = std::find_if(s_.comments.begin(), s_.comments.end(),
                           [&](const Comment& c) { return c.id == p.id; });
    Comment c{p.id, p.text, p.anchor};
    if (it == s_.comments.end()) {
      s_.comments.push_back(std::move(c));
    } else {
      *it = std::move(c);
    }
  }

  void operator()(const op::HideComment& p) {
    if (std::erase_if(s_.comments, [&](const Comment& c) { return c.id == p.id; }) == 0) {
      fail(ApplyErrorKind::TargetNotFound, "/params/id", fmt::format("no comment '{}'", p.id));
    }
  }

  void operator()(const op::AppendToList& p) {
    auto* aux = s_.aux(p.view);
    if (!aux) {
      fail(ApplyErrorKind::TargetNotFound, "/params/view",
           fmt::format("no auxiliary view '{}'", p.view));
    }
    if ((aux->kind == AuxKind::Map) != p.entry.key.has_value()) {
      fail(ApplyErrorKind::ViewKindMismatch, "/params/entry",
           aux->kind == AuxKind::Map ? "map views need keyed entries"
                                     : "list views take entries without keys");
    }
    if (aux->kind == AuxKind::Map) {
      for (auto& e : aux->entries) {
        if (e.key == p.entry.key) {
          e = p.entry;
          return;
        }
      }
    }
    aux->entries.push_back(p.entry);
  }

  void operator()(const op::PopFromList& p) {
    auto* aux = s_.aux(p.view);
    if (!aux) {
      fail(ApplyErrorKind::TargetNotFound, "/params/view",
           fmt::format("no auxiliary view '{}'", p.view));
    }
    if (aux->entries.empty()) {
      fail(ApplyErrorKind::IndexOutOfRange, "/params/view",
           fmt::format("auxiliary view '{}' is empty", p.view));
    }
    if (p.end == ListEnd::Front) {
      aux->entries.erase(aux->entries.begin());
    } else {
      aux->entries.pop_back();
    }
  }

 private:
  VisualState& s_;
};

}  // namespace

std::string_view to_string(OpCode code) { return kOpNames[static_cast<std::size_t>(code)]; }

std::optional<OpCode> op_code_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kOpNames.size(); ++i) {
    if (kOpNames[i] == name) return static_cast<OpCode>(i);
  }
  return std::nullopt;
}

std::span<const OpCode> all_op_codes() { return kAllCodes; }

std::optional<ViewSort> required_sort(OpCode code) {
  const auto i = static_cast<int>(code);
  if (i <= static_cast<int>(OpCode::ClearPointer)) return ViewSort::Array;
  if (i <= static_cast<int>(OpCode::RemoveNode)) return ViewSort::Graph;
  if (i <= static_cast<int>(OpCode::Rotate)) return ViewSort::Tree;
  if (i <= static_cast<int>(OpCode::HighlightCollision)) return ViewSort::Hashtable;
  if (i <= static_cast<int>(OpCode::ShowDependency)) return ViewSort::Table;
  return std::nullopt;
}

std::string_view to_string(ApplyErrorKind kind) {
  switch (kind) {
    case ApplyErrorKind::TargetNotFound:
      return "TargetNotFound";
    case ApplyErrorKind::IndexOutOfRange:
      return "IndexOutOfRange";
    case ApplyErrorKind::DuplicateId:
      return "DuplicateId";
    case ApplyErrorKind::StructuralViolation:
      return "StructuralViolation";
    case ApplyErrorKind::ViewKindMismatch:
      return "ViewKindMismatch";
  }
  return "Unknown";
}

VisualState apply_operation(const VisualState& state, const Operation& op) {
  VisualState next = state;
  std::visit(Applier{next}, op.params);
  return next;
}

VisualState apply_word(const VisualState& state, std::span<const Operation> word) {
  VisualState s = state;
  for (std::size_t k = 0; k < word.size(); ++k) {
    try {
      std::visit(Applier{s}, word[k].params);
    } catch (const ApplyError& e) {
      throw e.at_position(k);
    }
  }
  return s;
}

OperationWord concat_words(std::span<const Operation> u, std::span<const Operation> v) {
  OperationWord out;
  out.reserve(u.size() + v.size());
  out.insert(out.end(), u.begin(), u.end());
  out.insert(out.end(), v.begin(), v.end());
  return out;
}

OperationWord flatten_delta(const Delta& delta) {
  OperationWord out;
  for (const auto& group : delta.operations) out.insert(out.end(), group.begin(), group.end());
  return out;
}

OperationWord flatten_deltas(std::span<const Delta> deltas) {
  OperationWord out;
  for (const auto& d : deltas) {
    for (const auto& group : d.operations) out.insert(out.end(), group.begin(), group.end());
  }
  return out;
}

std::vector<std::string> write_targets(const Operation& op) {
  struct Visitor {
    std::vector<std::string> out;
    void operator()(const op::UpdateStyle& p) {
      for (auto i : p.indices) out.push_back(fmt::format("style:{}", i));
    }
    void operator()(const op::MoveElements& p) {
      for (const auto& m : p.pairs) {
        out.push_back(fmt::format("value:{}", m.to));
        out.push_back(fmt::format("style:{}", m.to));
      }
    }
    void operator()(const op::ShiftElements& p) {
      for (auto i = p.range.start; i < p.range.end; ++i) {
        for (auto j : {i, i + p.offset}) {
          out.push_back(fmt::format("value:{}", j));
          out.push_back(fmt::format("style:{}", j));
        }
      }
    }
    void operator()(const op::UpdateValues& p) {
      for (const auto& a : p.assignments) out.push_back(fmt::format("value:{}", a.index));
    }
    void operator()(const op::SetPointer& p) { out.push_back("pointer:" + p.name); }
    void operator()(const op::ClearPointer& p) { out.push_back("pointer:" + p.name); }
    void operator()(const op::UpdateNodeStyle& p) {
      for (const auto& id : p.ids) out.push_back("style:" + id);
    }
    void operator()(const op::UpdateNodeProperties& p) {
      for (const auto& [k, v] : p.properties) out.push_back(fmt::format("value:{}.{}", p.id, k));
    }
    void operator()(const op::UpdateEdgeStyle& p) {
      for (const auto& e : p.edges) out.push_back(fmt::format("style:{}->{}", e.from, e.to));
    }
    void operator()(const op::AddNode& p) { out.push_back("struct:" + p.node.id); }
    void operator()(const op::RemoveNode& p) { out.push_back("struct:" + p.id); }
    void operator()(const op::AddChild& p) { out.push_back("struct:" + p.node.id); }
    void operator()(const op::Reparent& p) { out.push_back("struct:" + p.id); }
    void operator()(const op::Rotate& p) { out.push_back("struct:" + p.pivot); }
    void operator()(const op::InsertIntoBucket& p) { out.push_back("value:" + key_text(p.key)); }
    void operator()(const op::Rehash&) { out.push_back("struct:buckets"); }
    void operator()(const op::HighlightCollision& p) {
      out.push_back(fmt::format("style:bucket{}", p.bucket));
    }
    void operator()(const op::UpdateTableCell& p) {
      out.push_back(fmt::format("value:{},{}", p.row, p.col));
    }
    void operator()(const op::HighlightTableCell& p) {
      for (const auto& c : p.cells) out.push_back(fmt::format("style:{},{}", c.row, c.col));
    }
    void operator()(const op::ShowDependency&) {}
    void operator()(const op::ShowComment& p) { out.push_back("comment:" + p.id); }
    void operator()(const op::HideComment& p) { out.push_back("comment:" + p.id); }
    void operator()(const op::AppendToList& p) { out.push_back("list:" + p.view); }
    void operator()(const op::PopFromList& p) { out.push_back("list:" + p.view); }
  };
  Visitor v;
  std::visit(v, op.params);
  std::sort(v.out.begin(), v.out.end());
  v.out.erase(std::unique(v.out.begin(), v.out.end()), v.out.end());
  return v.out;
}

}  // namespace vta::core
