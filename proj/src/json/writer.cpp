#include <fmt/format.h>

#include "vta/json/trace.hpp"

namespace vta::json {

using namespace vta::core;

namespace {

ordered_json style_key_list(const std::vector<std::string>& ids) {
  auto arr = ordered_json::array();
  for (const auto& id : ids) arr.push_back(id);
  return arr;
}

ordered_json encode_properties(const PropertyMap& props) {
  auto obj = ordered_json::object();
  for (const auto& [k, v] : props) obj[k] = encode_value(v);
  return obj;
}

ordered_json encode_cell_ref(const CellRef& c) {
  ordered_json j;
  j["row"] = c.row;
  j["col"] = c.col;
  return j;
}

ordered_json encode_aux_entry(const AuxEntry& e) {
  ordered_json j;
  if (e.key) j["key"] = encode_value(*e.key);
  j["value"] = encode_value(e.value);
  j["styleKey"] = e.style_key;
  return j;
}

ordered_json encode_graph_node(const GraphNode& n) {
  ordered_json j;
  j["id"] = n.id;
  j["label"] = n.label;
  j["styleKey"] = n.style_key;
  j["properties"] = encode_properties(n.properties);
  return j;
}

struct ParamEncoder {
  ordered_json operator()(const op::UpdateStyle& o) const {
    ordered_json j;
    j["indices"] = o.indices;
    j["styleKey"] = o.style_key;
    return j;
  }
  ordered_json operator()(const op::MoveElements& o) const {
    auto pairs = ordered_json::array();
    for (const auto& p : o.pairs) pairs.push_back(ordered_json{{"from", p.from}, {"to", p.to}});
    return ordered_json{{"pairs", pairs}};
  }
  ordered_json operator()(const op::ShiftElements& o) const {
    ordered_json j;
    j["range"] = ordered_json{{"start", o.range.start}, {"end", o.range.end}};
    j["offset"] = o.offset;
    return j;
  }
  ordered_json operator()(const op::UpdateValues& o) const {
    auto arr = ordered_json::array();
    for (const auto& a : o.assignments) {
      arr.push_back(ordered_json{{"index", a.index}, {"value", encode_value(a.value)}});
    }
    return ordered_json{{"assignments", arr}};
  }
  ordered_json operator()(const op::SetPointer& o) const {
    ordered_json j;
    j["name"] = o.name;
    j["index"] = o.index ? ordered_json(*o.index) : ordered_json(nullptr);
    return j;
  }
  ordered_json operator()(const op::ClearPointer& o) const { return ordered_json{{"name", o.name}}; }
  ordered_json operator()(const op::UpdateNodeStyle& o) const {
    ordered_json j;
    j["ids"] = style_key_list(o.ids);
    j["styleKey"] = o.style_key;
    return j;
  }
  ordered_json operator()(const op::UpdateNodeProperties& o) const {
    ordered_json j;
    j["id"] = o.id;
    j["properties"] = encode_properties(o.properties);
    return j;
  }
  ordered_json operator()(const op::UpdateEdgeStyle& o) const {
    auto edges = ordered_json::array();
    for (const auto& e : o.edges) edges.push_back(ordered_json{{"from", e.from}, {"to", e.to}});
    ordered_json j;
    j["edges"] = edges;
    j["styleKey"] = o.style_key;
    return j;
  }
  ordered_json operator()(const op::AddNode& o) const { return ordered_json{{"node", encode_graph_node(o.node)}}; }
  ordered_json operator()(const op::RemoveNode& o) const { return ordered_json{{"id", o.id}}; }
  ordered_json operator()(const op::AddChild& o) const {
    ordered_json j;
    j["parent"] = o.parent ? ordered_json(*o.parent) : ordered_json(nullptr);
    ordered_json node;
    node["id"] = o.node.id;
    node["label"] = o.node.label;
    node["styleKey"] = o.node.style_key;
    j["node"] = node;
    j["position"] = o.position;
    return j;
  }
  ordered_json operator()(const op::Reparent& o) const {
    ordered_json j;
    j["id"] = o.id;
    j["newParent"] = o.new_parent;
    j["position"] = o.position;
    return j;
  }
  ordered_json operator()(const op::Rotate& o) const {
    ordered_json j;
    j["pivot"] = o.pivot;
    j["direction"] = o.direction == RotateDirection::Left ? "left" : "right";
    return j;
  }
  ordered_json operator()(const op::InsertIntoBucket& o) const {
    ordered_json j;
    j["bucket"] = o.bucket;
    j["key"] = encode_value(o.key);
    j["value"] = encode_value(o.value);
    return j;
  }
  ordered_json operator()(const op::Rehash& o) const {
    auto arr = ordered_json::array();
    for (const auto& p : o.placement) {
      arr.push_back(ordered_json{{"key", encode_value(p.key)}, {"bucket", p.bucket}});
    }
    ordered_json j;
    j["newCapacity"] = o.new_capacity;
    j["placement"] = arr;
    return j;
  }
  ordered_json operator()(const op::HighlightCollision& o) const {
    ordered_json j;
    j["bucket"] = o.bucket;
    j["styleKey"] = o.style_key;
    return j;
  }
  ordered_json operator()(const op::UpdateTableCell& o) const {
    ordered_json j;
    j["row"] = o.row;
    j["col"] = o.col;
    j["value"] = encode_value(o.value);
    return j;
  }
  ordered_json operator()(const op::HighlightTableCell& o) const {
    auto cells = ordered_json::array();
    for (const auto& c : o.cells) cells.push_back(encode_cell_ref(c));
    ordered_json j;
    j["cells"] = cells;
    j["styleKey"] = o.style_key;
    return j;
  }
  ordered_json operator()(const op::ShowDependency& o) const {
    ordered_json j;
    j["from"] = encode_cell_ref(o.from);
    j["to"] = encode_cell_ref(o.to);
    return j;
  }
  ordered_json operator()(const op::ShowComment& o) const {
    ordered_json j;
    j["id"] = o.id;
    j["text"] = o.text;
    if (o.anchor) {
      j["anchor"] = ordered_json{{"view", o.anchor->view}, {"element", o.anchor->element}};
    } else {
      j["anchor"] = nullptr;
    }
    return j;
  }
  ordered_json operator()(const op::HideComment& o) const { return ordered_json{{"id", o.id}}; }
  ordered_json operator()(const op::AppendToList& o) const {
    ordered_json j;
    j["view"] = o.view;
    j["entry"] = encode_aux_entry(o.entry);
    return j;
  }
  ordered_json operator()(const op::PopFromList& o) const {
    ordered_json j;
    j["view"] = o.view;
    j["end"] = o.end == ListEnd::Front ? "front" : "back";
    return j;
  }
};

struct StructureEncoder {
  ordered_json operator()(const ArrayView& a) const {
    auto arr = ordered_json::array();
    for (std::size_t i = 0; i < a.elements.size(); ++i) {
      ordered_json e;
      e["index"] = i;
      e["value"] = encode_value(a.elements[i].value);
      e["styleKey"] = a.elements[i].style_key;
      arr.push_back(std::move(e));
    }
    return arr;
  }
  ordered_json operator()(const GraphView& g) const {
    auto nodes = ordered_json::array();
    for (const auto& n : g.nodes) nodes.push_back(encode_graph_node(n));
    auto edges = ordered_json::array();
    for (const auto& e : g.edges) {
      ordered_json j;
      j["from"] = e.from;
      j["to"] = e.to;
      if (e.weight) j["weight"] = encode_value(*e.weight);
      j["directed"] = e.directed;
      j["styleKey"] = e.style_key;
      edges.push_back(std::move(j));
    }
    ordered_json j;
    j["nodes"] = nodes;
    j["edges"] = edges;
    return j;
  }
  ordered_json operator()(const TreeView& t) const {
    auto nodes = ordered_json::array();
    for (const auto& n : t.nodes) {
      ordered_json j;
      j["id"] = n.id;
      j["label"] = n.label;
      j["styleKey"] = n.style_key;
      auto children = ordered_json::array();
      for (const auto& c : n.children) children.push_back(c ? ordered_json(*c) : ordered_json(nullptr));
      j["children"] = children;
      nodes.push_back(std::move(j));
    }
    return ordered_json{{"nodes", nodes}};
  }
  ordered_json operator()(const HashtableView& h) const {
    auto buckets = ordered_json::array();
    for (const auto& b : h.buckets) {
      auto bucket = ordered_json::array();
      for (const auto& e : b) {
        ordered_json j;
        j["key"] = encode_value(e.key);
        j["value"] = encode_value(e.value);
        j["styleKey"] = e.style_key;
        bucket.push_back(std::move(j));
      }
      buckets.push_back(std::move(bucket));
    }
    return ordered_json{{"buckets", buckets}};
  }
  ordered_json operator()(const TableView& t) const {
    ordered_json j;
    j["rows"] = t.rows;
    j["cols"] = t.cols;
    auto cells = ordered_json::array();
    for (std::int64_t r = 0; r < t.rows; ++r) {
      auto row = ordered_json::array();
      for (std::int64_t c = 0; c < t.cols; ++c) {
        const auto& cell = t.at(r, c);
        row.push_back(ordered_json{{"value", encode_value(cell.value)}, {"styleKey", cell.style_key}});
      }
      cells.push_back(std::move(row));
    }
    j["cells"] = cells;
    if (!t.row_labels.empty()) j["row_labels"] = t.row_labels;
    if (!t.col_labels.empty()) j["col_labels"] = t.col_labels;
    return j;
  }
};

ordered_json encode_aux_views(const std::vector<AuxView>& views) {
  auto arr = ordered_json::array();
  for (const auto& v : views) {
    ordered_json j;
    j["name"] = v.name;
    j["kind"] = v.kind == AuxKind::List ? "list" : "map";
    auto entries = ordered_json::array();
    for (const auto& e : v.entries) entries.push_back(encode_aux_entry(e));
    j["entries"] = entries;
    arr.push_back(std::move(j));
  }
  return arr;
}

ordered_json encode_styles(const std::map<std::string, StyleDef>& styles) {
  auto element_styles = ordered_json::object();
  for (const auto& [key, def] : styles) {
    auto j = ordered_json::object();
    if (def.fill) j["fill"] = *def.fill;
    if (def.stroke) j["stroke"] = *def.stroke;
    if (def.text) j["text"] = *def.text;
    element_styles[key] = j;
  }
  return ordered_json{{"elementStyles", element_styles}};
}

ordered_json encode_delta(const Delta& d) {
  ordered_json j;
  j["action_description"] = d.action_description;
  if (d.code_highlight.size() == 1) {
    j["code_highlight"] = d.code_highlight.front();
  } else {
    j["code_highlight"] = d.code_highlight;
  }
  auto groups = ordered_json::array();
  for (const auto& g : d.operations) {
    auto group = ordered_json::array();
    for (const auto& op : g) group.push_back(encode_operation(op));
    groups.push_back(std::move(group));
  }
  j["operations"] = groups;
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2, ' ', false) + "\n"; }

}  // namespace

std::string pointer_token(std::string_view token) {
  std::string out;
  out.reserve(token.size());
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

std::string_view extension_for(ViewSort sort) { return kKnownExtensions[static_cast<std::size_t>(sort)]; }

ordered_json encode_value(const Value& v) {
  return std::visit(
      [](const auto& x) -> ordered_json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else {
          return x;
        }
      },
      v);
}

ordered_json encode_operation(const Operation& op) {
  ordered_json j;
  j["op"] = std::string(to_string(op.code()));
  j["params"] = std::visit(ParamEncoder{}, op.params);
  return j;
}

ordered_json encode_data_state(const MainView& view) {
  ordered_json j;
  j["type"] = std::string(to_string(sort_of(view)));
  j["structure"] = std::visit(StructureEncoder{}, view);
  if (const auto* a = std::get_if<ArrayView>(&view); a && !a->pointers.empty()) {
    auto pointers = ordered_json::object();
    for (const auto& [name, idx] : a->pointers) {
      pointers[name] = idx ? ordered_json(*idx) : ordered_json(nullptr);
    }
    j["pointers"] = pointers;
  }
  return j;
}

ordered_json encode_state(const VisualState& state) {
  ordered_json j;
  j["data_state"] = encode_data_state(state.main);
  j["auxiliary_views"] = encode_aux_views(state.auxiliary_views);
  j["styles"] = encode_styles(state.styles);
  j["pseudocode"] = state.pseudocode;
  j["highlight"] = state.highlight;
  auto comments = ordered_json::array();
  for (const auto& c : state.comments) {
    ordered_json cj;
    cj["id"] = c.id;
    cj["text"] = c.text;
    if (c.anchor) {
      cj["anchor"] = ordered_json{{"view", c.anchor->view}, {"element", c.anchor->element}};
    } else {
      cj["anchor"] = nullptr;
    }
    comments.push_back(std::move(cj));
  }
  j["comments"] = comments;
  return j;
}

std::string serialize_state(const VisualState& state, std::size_t frame_index) {
  ordered_json j;
  j["frame_index"] = frame_index;
  j["state"] = encode_state(state);
  return dump(j);
}

std::string serialize_trace(const Trace& trace) {
  ordered_json doc;
  doc["vta_version"] = trace.vta_version;
  doc["algorithm"] = ordered_json{{"name", trace.algorithm.name}, {"family", trace.algorithm.family}};
  ordered_json frame;
  if (trace.data_schema) frame["data_schema"] = *trace.data_schema;
  frame["data_state"] = encode_data_state(trace.initial.main);
  frame["auxiliary_views"] = encode_aux_views(trace.initial.auxiliary_views);
  frame["styles"] = encode_styles(trace.initial.styles);
  frame["pseudocode"] = trace.initial.pseudocode;
  doc["initial_frame"] = frame;
  auto deltas = ordered_json::array();
  for (const auto& d : trace.deltas) deltas.push_back(encode_delta(d));
  doc["deltas"] = deltas;
  doc["required_extensions"] = trace.required_extensions;
  return dump(doc);
}

}  // namespace vta::json
