#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vta/core/value.hpp"

namespace vta::core {

inline constexpr std::string_view kIdleStyle = "idle";

enum class ViewSort { Array, Graph, Tree, Hashtable, Table };

std::string_view to_string(ViewSort sort);
std::optional<ViewSort> view_sort_from_string(std::string_view text);

struct ArrayElement {
  Value value;
  std::string style_key{kIdleStyle};
  bool operator==(const ArrayElement&) const = default;
};

/// Contiguous array; an element's index is its position. A pointer mapped to
/// nullopt is detached (drawn nowhere).
struct ArrayView {
  std::vector<ArrayElement> elements;
  std::map<std::string, std::optional<std::int64_t>> pointers;
  bool operator==(const ArrayView&) const = default;
};

struct GraphNode {
  std::string id;
  std::string label;
  std::string style_key{kIdleStyle};
  PropertyMap properties;
  bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
  std::string from;
  std::string to;
  std::optional<Value> weight;
  bool directed = false;
  std::string style_key{kIdleStyle};
  bool operator==(const GraphEdge&) const = default;

  /// Whether this edge is addressed by the (from, to) pair. Undirected edges
  /// match either orientation.
  bool connects(std::string_view a, std::string_view b) const {
    return (from == a && to == b) || (!directed && from == b && to == a);
  }
};

struct GraphView {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  bool operator==(const GraphView&) const = default;

  const GraphNode* find(std::string_view id) const;
  GraphNode* find(std::string_view id);
};

/// Tree node with positional child slots. A null slot keeps sibling positions
/// meaningful, which binary trees need (slot 0 = left, slot 1 = right).
struct TreeNode {
  std::string id;
  std::string label;
  std::string style_key{kIdleStyle};
  std::vector<std::optional<std::string>> children;
  bool operator==(const TreeNode&) const = default;
};

struct TreeView {
  std::vector<TreeNode> nodes;
  bool operator==(const TreeView&) const = default;

  const TreeNode* find(std::string_view id) const;
  TreeNode* find(std::string_view id);
  /// Parent id of `id`, or nullopt for a root or an unknown id.
  std::optional<std::string> parent_of(std::string_view id) const;
  /// Ids with no parent, in node order.
  std::vector<std::string> roots() const;
};

struct HashEntry {
  Value key;
  Value value;
  std::string style_key{kIdleStyle};
  bool operator==(const HashEntry&) const = default;
};

struct HashtableView {
  std::vector<std::vector<HashEntry>> buckets;
  bool operator==(const HashtableView&) const = default;
  std::size_t capacity() const { return buckets.size(); }
};

struct TableCell {
  Value value;
  std::string style_key{kIdleStyle};
  bool operator==(const TableCell&) const = default;
};

/// Dense row-major grid.
struct TableView {
  std::int64_t rows = 1;
  std::int64_t cols = 1;
  std::vector<TableCell> cells;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  bool operator==(const TableView&) const = default;

  static TableView filled(std::int64_t rows, std::int64_t cols, const Value& value);
  bool contains(std::int64_t r, std::int64_t c) const {
    return r >= 0 && c >= 0 && r < rows && c < cols;
  }
  const TableCell& at(std::int64_t r, std::int64_t c) const {
    return cells[static_cast<std::size_t>(r * cols + c)];
  }
  TableCell& at(std::int64_t r, std::int64_t c) {
    return cells[static_cast<std::size_t>(r * cols + c)];
  }
};

using MainView = std::variant<ArrayView, GraphView, TreeView, HashtableView, TableView>;

ViewSort sort_of(const MainView& view);

struct StyleDef {
  std::optional<std::string> fill;
  std::optional<std::string> stroke;
  std::optional<std::string> text;
  bool operator==(const StyleDef&) const = default;
};

enum class AuxKind { List, Map };

struct AuxEntry {
  std::optional<Value> key;  // present iff the owning view is a map
  Value value;
  std::string style_key{kIdleStyle};
  bool operator==(const AuxEntry&) const = default;
};

/// Side panel: stacks, queues, frontier lists, small key/value maps.
struct AuxView {
  std::string name;
  AuxKind kind = AuxKind::List;
  std::vector<AuxEntry> entries;
  bool operator==(const AuxView&) const = default;
};

/// Reference to one element of a view. `view` is "main" or an auxiliary view
/// name; `element` is the element's id (array index, node id, "row,col" for
/// table cells, key text for hash entries, entry position for aux views).
struct Anchor {
  std::string view;
  std::string element;
  bool operator==(const Anchor&) const = default;
};

struct Comment {
  std::string id;
  std::string text;
  std::optional<Anchor> anchor;
  bool operator==(const Comment&) const = default;
};

/// One point of the many-sorted visual state space.
struct VisualState {
  MainView main;
  std::vector<AuxView> auxiliary_views;
  std::map<std::string, StyleDef> styles;
  std::vector<std::string> pseudocode;
  std::vector<int> highlight;  // sorted, unique, 1-based
  std::vector<Comment> comments;
  bool operator==(const VisualState&) const = default;

  const AuxView* aux(std::string_view name) const;
  AuxView* aux(std::string_view name);
};

/// Default style table holding at least the reserved "idle" entry.
std::map<std::string, StyleDef> default_styles();

enum class ViolationKind {
  DuplicateId,
  DanglingEdge,
  BadStructure,
  HighlightOutOfRange,
  MissingIdleStyle,
  UnknownStyle,
};

/// One broken state invariant. `pointer` addresses the offending part in the
/// state's document encoding (relative to `initial_frame`).
struct Violation {
  ViolationKind kind;
  std::string pointer;
  std::string message;
  bool is_error() const {
    return kind != ViolationKind::UnknownStyle && kind != ViolationKind::MissingIdleStyle;
  }
};

/// All invariant violations of `state`, in encoding order. An empty result
/// from the error-severity subset means the state is well-formed.
std::vector<Violation> invariant_violations(const VisualState& state);

bool well_formed(const VisualState& state);

}  // namespace vta::core
