#include "vta/core/state.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <utility>

#include <fmt/format.h>

namespace vta::core {

namespace {

constexpr std::array<std::string_view, 5> kSortNames = {"array", "graph", "tree", "hashtable",
                                                        "table"};

std::string escape_token(std::string_view token) {
  std::string out;
  for (char c : token) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

class Checker {
 public:
  explicit Checker(const VisualState& s) : state_(s) {}

  std::vector<Violation> run() {
    std::visit([this](const auto& view) { check(view); }, state_.main);
    check_aux();
    check_styles();
    check_highlight();
    return std::move(out_);
  }

 private:
  void add(ViolationKind kind, std::string pointer, std::string message) {
    out_.push_back({kind, std::move(pointer), std::move(message)});
  }

  void use_style(const std::string& key, std::string pointer) {
    if (!state_.styles.contains(key)) {
      add(ViolationKind::UnknownStyle, std::move(pointer),
          fmt::format("styleKey '{}' is not defined; rendered as '{}'", key, kIdleStyle));
    }
  }

  void check(const ArrayView& view) {
    const std::string base = "/data_state/structure";
    for (std::size_t i = 0; i < view.elements.size(); ++i) {
      use_style(view.elements[i].style_key, fmt::format("{}/{}/styleKey", base, i));
    }
    for (const auto& [name, index] : view.pointers) {
      if (index && (*index < 0 || *index >= static_cast<std::int64_t>(view.elements.size()))) {
        add(ViolationKind::BadStructure, "/data_state/pointers/" + escape_token(name),
            fmt::format("pointer '{}' targets index {} outside [0, {})", name, *index,
                        view.elements.size()));
      }
    }
  }

  void check(const GraphView& view) {
    const std::string base = "/data_state/structure";
    std::set<std::string_view> ids;
    for (std::size_t i = 0; i < view.nodes.size(); ++i) {
      const auto& node = view.nodes[i];
      if (!ids.insert(node.id).second) {
        add(ViolationKind::DuplicateId, fmt::format("{}/nodes/{}/id", base, i),
            fmt::format("duplicate node id '{}'", node.id));
      }
      use_style(node.style_key, fmt::format("{}/nodes/{}/styleKey", base, i));
    }
    for (std::size_t i = 0; i < view.edges.size(); ++i) {
      const auto& edge = view.edges[i];
      if (!ids.contains(edge.from)) {
        add(ViolationKind::DanglingEdge, fmt::format("{}/edges/{}/from", base, i),
            fmt::format("edge endpoint '{}' does not reference an existing node", edge.from));
      }
      if (!ids.contains(edge.to)) {
        add(ViolationKind::DanglingEdge, fmt::format("{}/edges/{}/to", base, i),
            fmt::format("edge endpoint '{}' does not reference an existing node", edge.to));
      }
      use_style(edge.style_key, fmt::format("{}/edges/{}/styleKey", base, i));
    }
  }

  void check(const TreeView& view) {
    const std::string base = "/data_state/structure";
    std::set<std::string_view> ids;
    for (std::size_t i = 0; i < view.nodes.size(); ++i) {
      if (!ids.insert(view.nodes[i].id).second) {
        add(ViolationKind::DuplicateId, fmt::format("{}/nodes/{}/id", base, i),
            fmt::format("duplicate node id '{}'", view.nodes[i].id));
      }
      use_style(view.nodes[i].style_key, fmt::format("{}/nodes/{}/styleKey", base, i));
    }
    std::map<std::string_view, int> parent_count;
    for (std::size_t i = 0; i < view.nodes.size(); ++i) {
      const auto& children = view.nodes[i].children;
      for (std::size_t j = 0; j < children.size(); ++j) {
        if (!children[j]) continue;
        const auto pointer = fmt::format("{}/nodes/{}/children/{}", base, i, j);
        if (!ids.contains(*children[j])) {
          add(ViolationKind::BadStructure, pointer,
              fmt::format("child '{}' is not a node of the tree", *children[j]));
        } else if (++parent_count[*children[j]] > 1) {
          add(ViolationKind::BadStructure, pointer,
              fmt::format("node '{}' has more than one parent", *children[j]));
        }
      }
    }
    if (view.nodes.empty()) return;
    const auto roots = view.roots();
    if (roots.size() != 1) {
      add(ViolationKind::BadStructure, base + "/nodes",
          fmt::format("tree must have exactly one root, found {}", roots.size()));
      return;
    }
    // Single root plus single parents: acyclic iff everything is reachable.
    std::set<std::string> seen;
    std::vector<std::string> stack{roots.front()};
    while (!stack.empty()) {
      auto id = std::move(stack.back());
      stack.pop_back();
      if (!seen.insert(id).second) continue;
      if (const auto* node = view.find(id)) {
        for (const auto& c : node->children) {
          if (c) stack.push_back(*c);
        }
      }
    }
    if (seen.size() != ids.size()) {
      add(ViolationKind::BadStructure, base + "/nodes", "parent relation contains a cycle");
    }
  }

  void check(const HashtableView& view) {
    const std::string base = "/data_state/structure/buckets";
    if (view.buckets.empty()) {
      add(ViolationKind::BadStructure, base, "hash table capacity must be at least 1");
    }
    std::vector<const Value*> keys;
    for (std::size_t b = 0; b < view.buckets.size(); ++b) {
      for (std::size_t e = 0; e < view.buckets[b].size(); ++e) {
        const auto& entry = view.buckets[b][e];
        const bool dup = std::any_of(keys.begin(), keys.end(),
                                     [&](const Value* k) { return *k == entry.key; });
        if (dup) {
          add(ViolationKind::DuplicateId, fmt::format("{}/{}/{}/key", base, b, e),
              fmt::format("duplicate key '{}'", key_text(entry.key)));
        }
        keys.push_back(&entry.key);
        use_style(entry.style_key, fmt::format("{}/{}/{}/styleKey", base, b, e));
      }
    }
  }

  void check(const TableView& view) {
    const std::string base = "/data_state/structure";
    if (view.rows < 1 || view.cols < 1 ||
        view.cells.size() != static_cast<std::size_t>(view.rows * view.cols)) {
      add(ViolationKind::BadStructure, base + "/cells",
          fmt::format("cell grid does not match {}x{}", view.rows, view.cols));
      return;
    }
    if (!view.row_labels.empty() && view.row_labels.size() != static_cast<std::size_t>(view.rows)) {
      add(ViolationKind::BadStructure, base + "/row_labels", "row label count must equal rows");
    }
    if (!view.col_labels.empty() && view.col_labels.size() != static_cast<std::size_t>(view.cols)) {
      add(ViolationKind::BadStructure, base + "/col_labels", "column label count must equal cols");
    }
    for (std::int64_t r = 0; r < view.rows; ++r) {
      for (std::int64_t c = 0; c < view.cols; ++c) {
        use_style(view.at(r, c).style_key, fmt::format("{}/cells/{}/{}/styleKey", base, r, c));
      }
    }
  }

  void check_aux() {
    std::set<std::string_view> names;
    for (std::size_t i = 0; i < state_.auxiliary_views.size(); ++i) {
      const auto& aux = state_.auxiliary_views[i];
      if (!names.insert(aux.name).second) {
        add(ViolationKind::DuplicateId, fmt::format("/auxiliary_views/{}/name", i),
            fmt::format("duplicate auxiliary view name '{}'", aux.name));
      }
      for (std::size_t e = 0; e < aux.entries.size(); ++e) {
        const auto& entry = aux.entries[e];
        if ((aux.kind == AuxKind::Map) != entry.key.has_value()) {
          add(ViolationKind::BadStructure, fmt::format("/auxiliary_views/{}/entries/{}", i, e),
              aux.kind == AuxKind::Map ? "map entry requires a key" : "list entry must not carry a key");
        }
        use_style(entry.style_key, fmt::format("/auxiliary_views/{}/entries/{}/styleKey", i, e));
      }
    }
  }

  void check_styles() {
    if (!state_.styles.contains(std::string(kIdleStyle))) {
      add(ViolationKind::MissingIdleStyle, "/styles/elementStyles",
          "reserved style 'idle' is not defined");
    }
  }

  void check_highlight() {
    if (state_.pseudocode.empty()) return;
    for (std::size_t i = 0; i < state_.highlight.size(); ++i) {
      const int line = state_.highlight[i];
      if (line < 1 || line > static_cast<int>(state_.pseudocode.size())) {
        add(ViolationKind::HighlightOutOfRange, fmt::format("/highlight/{}", i),
            fmt::format("highlight line {} outside [1, {}]", line, state_.pseudocode.size()));
      }
    }
  }

  const VisualState& state_;
  std::vector<Violation> out_;
};

}  // namespace

std::string_view to_string(ViewSort sort) { return kSortNames[static_cast<std::size_t>(sort)]; }

std::optional<ViewSort> view_sort_from_string(std::string_view text) {
  for (std::size_t i = 0; i < kSortNames.size(); ++i) {
    if (kSortNames[i] == text) return static_cast<ViewSort>(i);
  }
  return std::nullopt;
}

const GraphNode* GraphView::find(std::string_view id) const {
  auto it = std::find_if(nodes.begin(), nodes.end(), [&](const auto& n) { return n.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

GraphNode* GraphView::find(std::string_view id) {
  return const_cast<GraphNode*>(std::as_const(*this).find(id));
}

const TreeNode* TreeView::find(std::string_view id) const {
  auto it = std::find_if(nodes.begin(), nodes.end(), [&](const auto& n) { return n.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

TreeNode* TreeView::find(std::string_view id) {
  return const_cast<TreeNode*>(std::as_const(*this).find(id));
}

std::optional<std::string> TreeView::parent_of(std::string_view id) const {
  for (const auto& node : nodes) {
    for (const auto& c : node.children) {
      if (c && *c == id) return node.id;
    }
  }
  return std::nullopt;
}

std::vector<std::string> TreeView::roots() const {
  std::set<std::string_view> children;
  for (const auto& node : nodes) {
    for (const auto& c : node.children) {
      if (c) children.insert(*c);
    }
  }
  std::vector<std::string> out;
  for (const auto& node : nodes) {
    if (!children.contains(node.id)) out.push_back(node.id);
  }
  return out;
}

TableView TableView::filled(std::int64_t rows, std::int64_t cols, const Value& value) {
  TableView t;
  t.rows = rows;
  t.cols = cols;
  t.cells.assign(static_cast<std::size_t>(rows * cols), TableCell{value, std::string(kIdleStyle)});
  return t;
}

ViewSort sort_of(const MainView& view) { return static_cast<ViewSort>(view.index()); }

const AuxView* VisualState::aux(std::string_view name) const {
  auto it = std::find_if(auxiliary_views.begin(), auxiliary_views.end(),
                         [&](const auto& a) { return a.name == name; });
  return it == auxiliary_views.end() ? nullptr : &*it;
}

AuxView* VisualState::aux(std::string_view name) {
  return const_cast<AuxView*>(std::as_const(*this).aux(name));
}

std::map<std::string, StyleDef> default_styles() {
  return {{std::string(kIdleStyle), StyleDef{"#2C3E50", "#ECF0F1", "#FFFFFF"}}};
}

std::vector<Violation> invariant_violations(const VisualState& state) {
  return Checker(state).run();
}

bool well_formed(const VisualState& state) {
  const auto all = invariant_violations(state);
  return std::none_of(all.begin(), all.end(), [](const Violation& v) { return v.is_error(); });
}

}  // namespace vta::core
