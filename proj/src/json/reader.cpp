#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "decoder.hpp"
#include "vta/core/algebra.hpp"
#include "vta/json/trace.hpp"

namespace vta::json {

using namespace vta::core;
using detail::child;
using detail::Fields;
using detail::Sink;

namespace {

constexpr std::string_view kBad = code::kBadParams;

// ---------------------------------------------------------------------------
// Operation parameters. Every parameter object is strict: unknown fields and
// type mismatches are BAD_PARAMS.

class ParamDecoder {
 public:
  ParamDecoder(Sink& sink, const ordered_json& params, std::string path)
      : sink_(sink), fields_(sink, params, std::move(path), kBad, true) {}

  bool finish() {
    fields_.finish();
    return fields_.ok() && ok_;
  }

  std::string str(std::string_view key) {
    if (const auto* j = fields_.required(key)) {
      if (auto s = detail::read_string(sink_, *j, fields_.path(key), kBad)) return *s;
    }
    ok_ = false;
    return {};
  }

  std::optional<std::string> nullable_str(std::string_view key) {
    if (const auto* j = fields_.required(key)) {
      if (j->is_null()) return std::nullopt;
      if (auto s = detail::read_string(sink_, *j, fields_.path(key), kBad)) return s;
    }
    ok_ = false;
    return std::nullopt;
  }

  std::int64_t integer(std::string_view key) {
    if (const auto* j = fields_.required(key)) {
      if (auto i = detail::read_int(sink_, *j, fields_.path(key), kBad)) return *i;
    }
    ok_ = false;
    return 0;
  }

  std::optional<std::int64_t> nullable_int(std::string_view key) {
    if (const auto* j = fields_.required(key)) {
      if (j->is_null()) return std::nullopt;
      if (auto i = detail::read_int(sink_, *j, fields_.path(key), kBad)) return i;
    }
    ok_ = false;
    return std::nullopt;
  }

  Value value(std::string_view key) {
    if (const auto* j = fields_.required(key)) {
      if (auto v = detail::read_value(sink_, *j, fields_.path(key), kBad)) return *v;
    }
    ok_ = false;
    return {};
  }

  template <typename T, typename F>
  std::vector<T> list(std::string_view key, F&& element) {
    std::vector<T> out;
    const auto* j = fields_.required(key);
    if (!j || !detail::expect_array(sink_, *j, fields_.path(key), kBad)) {
      ok_ = false;
      return out;
    }
    for (std::size_t i = 0; i < j->size(); ++i) {
      out.push_back(element((*j)[i], child(fields_.path(key), i)));
    }
    return out;
  }

  /// Runs `body` on the nested object at `key` with its own strict field set.
  template <typename F>
  void nested(std::string_view key, F&& body) {
    const auto* j = fields_.required(key);
    if (!j || !detail::expect_object(sink_, *j, fields_.path(key), kBad)) {
      ok_ = false;
      return;
    }
    ParamDecoder inner(sink_, *j, fields_.path(key));
    body(inner);
    if (!inner.finish()) ok_ = false;
  }

  const ordered_json* raw_optional(std::string_view key) { return fields_.optional(key); }
  const ordered_json* raw_required(std::string_view key) {
    const auto* j = fields_.required(key);
    if (!j) ok_ = false;
    return j;
  }
  std::string path(std::string_view key) const { return fields_.path(key); }
  Sink& sink() { return sink_; }
  void fail() { ok_ = false; }

  // Element helpers for list().
  std::int64_t int_element(const ordered_json& j, const std::string& path) {
    if (auto i = detail::read_int(sink_, j, path, kBad)) return *i;
    ok_ = false;
    return 0;
  }
  std::string str_element(const ordered_json& j, const std::string& path) {
    if (auto s = detail::read_string(sink_, j, path, kBad)) return *s;
    ok_ = false;
    return {};
  }
  template <typename F>
  void object_element(const ordered_json& j, const std::string& path, F&& body) {
    if (!detail::expect_object(sink_, j, path, kBad)) {
      ok_ = false;
      return;
    }
    ParamDecoder inner(sink_, j, path);
    body(inner);
    if (!inner.finish()) ok_ = false;
  }

 private:
  Sink& sink_;
  Fields fields_;
  bool ok_ = true;
};

CellRef cell_ref(ParamDecoder& p) { return CellRef{p.integer("row"), p.integer("col")}; }

PropertyMap properties_of(ParamDecoder& outer, std::string_view key, bool required) {
  PropertyMap props;
  const auto* j = required ? outer.raw_required(key) : outer.raw_optional(key);
  if (!j) return props;
  if (!detail::expect_object(outer.sink(), *j, outer.path(key), kBad)) {
    outer.fail();
    return props;
  }
  for (auto it = j->begin(); it != j->end(); ++it) {
    auto v = detail::read_value(outer.sink(), it.value(), child(outer.path(key), it.key()), kBad);
    if (!v) {
      outer.fail();
      continue;
    }
    props[it.key()] = *v;
  }
  return props;
}

std::string optional_str(ParamDecoder& p, std::string_view key, std::string fallback) {
  const auto* j = p.raw_optional(key);
  if (!j) return fallback;
  if (auto s = detail::read_string(p.sink(), *j, p.path(key), kBad)) return *s;
  p.fail();
  return fallback;
}

std::optional<Params> decode_params(OpCode code, ParamDecoder& p) {
  switch (code) {
    case OpCode::UpdateStyle: {
      op::UpdateStyle o;
      o.indices = p.list<std::int64_t>("indices", [&](auto& j, auto path) { return p.int_element(j, path); });
      o.style_key = p.str("styleKey");
      return o;
    }
    case OpCode::MoveElements: {
      op::MoveElements o;
      o.pairs = p.list<IndexMove>("pairs", [&](auto& j, auto path) {
        IndexMove m;
        p.object_element(j, path, [&](ParamDecoder& q) {
          m.from = q.integer("from");
          m.to = q.integer("to");
        });
        return m;
      });
      return o;
    }
    case OpCode::ShiftElements: {
      op::ShiftElements o;
      p.nested("range", [&](ParamDecoder& q) {
        o.range.start = q.integer("start");
        o.range.end = q.integer("end");
      });
      o.offset = p.integer("offset");
      return o;
    }
    case OpCode::UpdateValues: {
      op::UpdateValues o;
      o.assignments = p.list<IndexAssignment>("assignments", [&](auto& j, auto path) {
        IndexAssignment a;
        p.object_element(j, path, [&](ParamDecoder& q) {
          a.index = q.integer("index");
          a.value = q.value("value");
        });
        return a;
      });
      return o;
    }
    case OpCode::SetPointer: {
      op::SetPointer o;
      o.name = p.str("name");
      o.index = p.nullable_int("index");
      return o;
    }
    case OpCode::ClearPointer:
      return op::ClearPointer{p.str("name")};
    case OpCode::UpdateNodeStyle: {
      op::UpdateNodeStyle o;
      o.ids = p.list<std::string>("ids", [&](auto& j, auto path) { return p.str_element(j, path); });
      o.style_key = p.str("styleKey");
      return o;
    }
    case OpCode::UpdateNodeProperties: {
      op::UpdateNodeProperties o;
      o.id = p.str("id");
      o.properties = properties_of(p, "properties", true);
      return o;
    }
    case OpCode::UpdateEdgeStyle: {
      op::UpdateEdgeStyle o;
      o.edges = p.list<EdgeRef>("edges", [&](auto& j, auto path) {
        EdgeRef e;
        p.object_element(j, path, [&](ParamDecoder& q) {
          e.from = q.str("from");
          e.to = q.str("to");
        });
        return e;
      });
      o.style_key = p.str("styleKey");
      return o;
    }
    case OpCode::AddNode: {
      op::AddNode o;
      p.nested("node", [&](ParamDecoder& q) {
        o.node.id = q.str("id");
        o.node.label = optional_str(q, "label", o.node.id);
        o.node.style_key = optional_str(q, "styleKey", std::string(kIdleStyle));
        o.node.properties = properties_of(q, "properties", false);
      });
      return o;
    }
    case OpCode::RemoveNode:
      return op::RemoveNode{p.str("id")};
    case OpCode::AddChild: {
      op::AddChild o;
      o.parent = p.nullable_str("parent");
      p.nested("node", [&](ParamDecoder& q) {
        o.node.id = q.str("id");
        o.node.label = optional_str(q, "label", o.node.id);
        o.node.style_key = optional_str(q, "styleKey", std::string(kIdleStyle));
      });
      o.position = p.integer("position");
      return o;
    }
    case OpCode::Reparent: {
      op::Reparent o;
      o.id = p.str("id");
      o.new_parent = p.str("newParent");
      o.position = p.integer("position");
      return o;
    }
    case OpCode::Rotate: {
      op::Rotate o;
      o.pivot = p.str("pivot");
      const auto dir = p.str("direction");
      if (dir == "left") {
        o.direction = RotateDirection::Left;
      } else if (dir == "right") {
        o.direction = RotateDirection::Right;
      } else {
        p.sink().error(kBad, p.path("direction"), "direction must be 'left' or 'right'");
        p.fail();
      }
      return o;
    }
    case OpCode::InsertIntoBucket: {
      op::InsertIntoBucket o;
      o.bucket = p.integer("bucket");
      o.key = p.value("key");
      o.value = p.value("value");
      return o;
    }
    case OpCode::Rehash: {
      op::Rehash o;
      o.new_capacity = p.integer("newCapacity");
      o.placement = p.list<KeyPlacement>("placement", [&](auto& j, auto path) {
        KeyPlacement k;
        p.object_element(j, path, [&](ParamDecoder& q) {
          k.key = q.value("key");
          k.bucket = q.integer("bucket");
        });
        return k;
      });
      return o;
    }
    case OpCode::HighlightCollision: {
      op::HighlightCollision o;
      o.bucket = p.integer("bucket");
      o.style_key = p.str("styleKey");
      return o;
    }
    case OpCode::UpdateTableCell: {
      op::UpdateTableCell o;
      o.row = p.integer("row");
      o.col = p.integer("col");
      o.value = p.value("value");
      return o;
    }
    case OpCode::HighlightTableCell: {
      op::HighlightTableCell o;
      o.cells = p.list<CellRef>("cells", [&](auto& j, auto path) {
        CellRef c;
        p.object_element(j, path, [&](ParamDecoder& q) { c = cell_ref(q); });
        return c;
      });
      o.style_key = p.str("styleKey");
      return o;
    }
    case OpCode::ShowDependency: {
      op::ShowDependency o;
      p.nested("from", [&](ParamDecoder& q) { o.from = cell_ref(q); });
      p.nested("to", [&](ParamDecoder& q) { o.to = cell_ref(q); });
      return o;
    }
    case OpCode::ShowComment: {
      op::ShowComment o;
      o.id = p.str("id");
      o.text = p.str("text");
      const auto* anchor = p.raw_required("anchor");
      if (anchor && !anchor->is_null()) {
        Anchor a;
        p.nested("anchor", [&](ParamDecoder& q) {
          a.view = q.str("view");
          a.element = q.str("element");
        });
        o.anchor = a;
      }
      return o;
    }
    case OpCode::HideComment:
      return op::HideComment{p.str("id")};
    case OpCode::AppendToList: {
      op::AppendToList o;
      o.view = p.str("view");
      p.nested("entry", [&](ParamDecoder& q) {
        if (const auto* k = q.raw_optional("key")) {
          if (auto v = detail::read_value(q.sink(), *k, q.path("key"), kBad)) {
            o.entry.key = *v;
          } else {
            q.fail();
          }
        }
        o.entry.value = q.value("value");
        o.entry.style_key = optional_str(q, "styleKey", std::string(kIdleStyle));
      });
      return o;
    }
    case OpCode::PopFromList: {
      op::PopFromList o;
      o.view = p.str("view");
      const auto end = p.str("end");
      if (end == "front") {
        o.end = ListEnd::Front;
      } else if (end == "back") {
        o.end = ListEnd::Back;
      } else {
        p.sink().error(kBad, p.path("end"), "end must be 'front' or 'back'");
        p.fail();
      }
      return o;
    }
  }
  return std::nullopt;
}

std::optional<Operation> decode_op(Sink& sink, const ordered_json& j, const std::string& path) {
  if (!detail::expect_object(sink, j, path, kBad)) return std::nullopt;
  Fields f(sink, j, path, kBad, true);
  const auto* name = f.required("op");
  const auto* params = f.required("params");
  f.finish();
  if (!name) return std::nullopt;
  if (!name->is_string()) {
    sink.error(code::kUnknownOp, f.path("op"), "op must be a string naming a catalogue operation");
    return std::nullopt;
  }
  const auto code = op_code_from_string(name->get<std::string>());
  if (!code) {
    sink.error(code::kUnknownOp, f.path("op"),
               fmt::format("unknown operation '{}'", name->get<std::string>()));
    return std::nullopt;
  }
  if (!params || !detail::expect_object(sink, *params, f.path("params"), kBad) || !f.ok()) {
    return std::nullopt;
  }
  ParamDecoder p(sink, *params, f.path("params"));
  auto decoded = decode_params(*code, p);
  if (!p.finish() || !decoded) return std::nullopt;
  return Operation{std::move(*decoded)};
}

// ---------------------------------------------------------------------------
// Initial frame.

class StateDecoder {
 public:
  explicit StateDecoder(Sink& sink) : sink_(sink) {}

  std::string str_or(Fields& f, std::string_view key, std::string fallback) {
    const auto* j = f.optional(key);
    if (!j) return fallback;
    if (auto s = detail::read_string(sink_, *j, f.path(key), code::kBadType)) return *s;
    f.fail();
    return fallback;
  }

  std::string str_req(Fields& f, std::string_view key) {
    const auto* j = f.required(key);
    if (!j) return {};
    if (auto s = detail::read_string(sink_, *j, f.path(key), code::kBadType)) return *s;
    f.fail();
    return {};
  }

  Value value_or_null(Fields& f, std::string_view key) {
    const auto* j = f.optional(key);
    if (!j) return {};
    if (auto v = detail::read_value(sink_, *j, f.path(key), code::kBadType)) return *v;
    f.fail();
    return {};
  }

  Value value_req(Fields& f, std::string_view key) {
    const auto* j = f.required(key);
    if (!j) return {};
    if (auto v = detail::read_value(sink_, *j, f.path(key), code::kBadType)) return *v;
    f.fail();
    return {};
  }

  std::optional<MainView> data_state(const ordered_json& j, const std::string& path) {
    if (!detail::expect_object(sink_, j, path, code::kBadType)) return std::nullopt;
    Fields f(sink_, j, path, code::kBadType, false);
    const auto* type = f.required("type");
    const auto* structure = f.required("structure");
    const auto* pointers = f.optional("pointers");
    f.finish();
    if (!type || !structure) return std::nullopt;
    if (!type->is_string()) {
      sink_.error(code::kBadType, f.path("type"), "type must be a string");
      return std::nullopt;
    }
    const auto sort = view_sort_from_string(type->get<std::string>());
    if (!sort) {
      sink_.error(code::kUnknownViewType, f.path("type"),
                  fmt::format("unknown data_state type '{}'", type->get<std::string>()));
      return std::nullopt;
    }
    if (pointers && *sort != ViewSort::Array) {
      sink_.error(code::kBadType, f.path("pointers"), "pointers are only defined for arrays");
      return std::nullopt;
    }
    const auto spath = f.path("structure");
    switch (*sort) {
      case ViewSort::Array:
        return array(*structure, spath, pointers, f.path("pointers"));
      case ViewSort::Graph:
        return graph(*structure, spath);
      case ViewSort::Tree:
        return tree(*structure, spath);
      case ViewSort::Hashtable:
        return hashtable(*structure, spath);
      case ViewSort::Table:
        return table(*structure, spath);
    }
    return std::nullopt;
  }

  std::optional<MainView> array(const ordered_json& j, const std::string& path,
                                const ordered_json* pointers, const std::string& ppath) {
    if (!detail::expect_array(sink_, j, path, code::kBadType)) return std::nullopt;
    ArrayView view;
    bool ok = true;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const auto epath = child(path, i);
      if (!detail::expect_object(sink_, j[i], epath, code::kBadType)) {
        ok = false;
        continue;
      }
      Fields f(sink_, j[i], epath, code::kBadType, false);
      const auto* index = f.required("index");
      ArrayElement e;
      e.value = value_req(f, "value");
      e.style_key = str_or(f, "styleKey", std::string(kIdleStyle));
      f.finish();
      ok = ok && f.ok();
      if (index) {
        auto idx = detail::read_int(sink_, *index, f.path("index"), code::kBadType);
        if (!idx) {
          ok = false;
        } else if (*idx != static_cast<std::int64_t>(i)) {
          sink_.error(code::kBadState, f.path("index"),
                      fmt::format("array indices must be contiguous from 0; expected {}, found {}", i, *idx));
          ok = false;
        }
      }
      view.elements.push_back(std::move(e));
    }
    if (pointers) {
      if (!detail::expect_object(sink_, *pointers, ppath, code::kBadType)) return std::nullopt;
      for (auto it = pointers->begin(); it != pointers->end(); ++it) {
        if (it.value().is_null()) {
          view.pointers[it.key()] = std::nullopt;
        } else if (auto idx = detail::read_int(sink_, it.value(), child(ppath, it.key()),
                                               code::kBadType)) {
          view.pointers[it.key()] = *idx;
        } else {
          ok = false;
        }
      }
    }
    if (!ok) return std::nullopt;
    return view;
  }

  std::optional<MainView> graph(const ordered_json& j, const std::string& path) {
    if (!detail::expect_object(sink_, j, path, code::kBadType)) return std::nullopt;
    Fields f(sink_, j, path, code::kBadType, false);
    const auto* nodes = f.required("nodes");
    const auto* edges = f.optional("edges");
    f.finish();
    if (!nodes) return std::nullopt;
    GraphView view;
    bool ok = detail::expect_array(sink_, *nodes, f.path("nodes"), code::kBadType);
    for (std::size_t i = 0; ok && i < nodes->size(); ++i) {
      const auto npath = child(f.path("nodes"), i);
      if (!detail::expect_object(sink_, (*nodes)[i], npath, code::kBadType)) {
        ok = false;
        break;
      }
      Fields nf(sink_, (*nodes)[i], npath, code::kBadType, false);
      GraphNode n;
      n.id = str_req(nf, "id");
      n.label = str_or(nf, "label", n.id);
      n.style_key = str_or(nf, "styleKey", std::string(kIdleStyle));
      if (const auto* props = nf.optional("properties")) {
        if (!detail::expect_object(sink_, *props, nf.path("properties"), code::kBadType)) {
          nf.fail();
        } else {
          for (auto it = props->begin(); it != props->end(); ++it) {
            auto v = detail::read_value(sink_, it.value(), child(nf.path("properties"), it.key()),
                                        code::kBadType);
            if (v) {
              n.properties[it.key()] = *v;
            } else {
              nf.fail();
            }
          }
        }
      }
      nf.finish();
      ok = ok && nf.ok();
      view.nodes.push_back(std::move(n));
    }
    if (edges) {
      if (!detail::expect_array(sink_, *edges, f.path("edges"), code::kBadType)) return std::nullopt;
      for (std::size_t i = 0; i < edges->size(); ++i) {
        const auto epath = child(f.path("edges"), i);
        if (!detail::expect_object(sink_, (*edges)[i], epath, code::kBadType)) {
          ok = false;
          continue;
        }
        Fields ef(sink_, (*edges)[i], epath, code::kBadType, false);
        GraphEdge e;
        e.from = str_req(ef, "from");
        e.to = str_req(ef, "to");
        if (const auto* w = ef.optional("weight")) {
          if (w->is_null()) {
            // absent weight
          } else if (auto num = detail::read_value(sink_, *w, ef.path("weight"), code::kBadType);
                     num && is_number(*num)) {
            e.weight = *num;
          } else {
            if (num) sink_.error(code::kBadType, ef.path("weight"), "edge weight must be a number");
            ef.fail();
          }
        }
        if (const auto* d = ef.optional("directed")) {
          if (auto b = detail::read_bool(sink_, *d, ef.path("directed"), code::kBadType)) {
            e.directed = *b;
          } else {
            ef.fail();
          }
        }
        e.style_key = str_or(ef, "styleKey", std::string(kIdleStyle));
        ef.finish();
        ok = ok && ef.ok();
        view.edges.push_back(std::move(e));
      }
    }
    if (!ok) return std::nullopt;
    return view;
  }

  std::optional<MainView> tree(const ordered_json& j, const std::string& path) {
    if (!detail::expect_object(sink_, j, path, code::kBadType)) return std::nullopt;
    Fields f(sink_, j, path, code::kBadType, false);
    const auto* nodes = f.required("nodes");
    f.finish();
    if (!nodes || !detail::expect_array(sink_, *nodes, f.path("nodes"), code::kBadType)) {
      return std::nullopt;
    }
    TreeView view;
    bool ok = true;
    for (std::size_t i = 0; i < nodes->size(); ++i) {
      const auto npath = child(f.path("nodes"), i);
      if (!detail::expect_object(sink_, (*nodes)[i], npath, code::kBadType)) {
        ok = false;
        continue;
      }
      Fields nf(sink_, (*nodes)[i], npath, code::kBadType, false);
      TreeNode n;
      n.id = str_req(nf, "id");
      n.label = str_or(nf, "label", n.id);
      n.style_key = str_or(nf, "styleKey", std::string(kIdleStyle));
      if (const auto* children = nf.optional("children")) {
        if (detail::expect_array(sink_, *children, nf.path("children"), code::kBadType)) {
          for (std::size_t c = 0; c < children->size(); ++c) {
            const auto& slot = (*children)[c];
            if (slot.is_null()) {
              n.children.emplace_back();
            } else if (auto s = detail::read_string(sink_, slot, child(nf.path("children"), c),
                                                    code::kBadType)) {
              n.children.emplace_back(*s);
            } else {
              nf.fail();
            }
          }
        } else {
          nf.fail();
        }
      }
      nf.finish();
      ok = ok && nf.ok();
      view.nodes.push_back(std::move(n));
    }
    if (!ok) return std::nullopt;
    return view;
  }

  std::optional<MainView> hashtable(const ordered_json& j, const std::string& path) {
    if (!detail::expect_object(sink_, j, path, code::kBadType)) return std::nullopt;
    Fields f(sink_, j, path, code::kBadType, false);
    const auto* buckets = f.required("buckets");
    f.finish();
    if (!buckets || !detail::expect_array(sink_, *buckets, f.path("buckets"), code::kBadType)) {
      return std::nullopt;
    }
    HashtableView view;
    bool ok = true;
    for (std::size_t b = 0; b < buckets->size(); ++b) {
      const auto bpath = child(f.path("buckets"), b);
      if (!detail::expect_array(sink_, (*buckets)[b], bpath, code::kBadType)) {
        ok = false;
        continue;
      }
      auto& bucket = view.buckets.emplace_back();
      for (std::size_t e = 0; e < (*buckets)[b].size(); ++e) {
        const auto epath = child(bpath, e);
        if (!detail::expect_object(sink_, (*buckets)[b][e], epath, code::kBadType)) {
          ok = false;
          continue;
        }
        Fields ef(sink_, (*buckets)[b][e], epath, code::kBadType, false);
        HashEntry entry;
        entry.key = value_req(ef, "key");
        entry.value = value_or_null(ef, "value");
        entry.style_key = str_or(ef, "styleKey", std::string(kIdleStyle));
        ef.finish();
        ok = ok && ef.ok();
        bucket.push_back(std::move(entry));
      }
    }
    if (!ok) return std::nullopt;
    return view;
  }

  std::optional<MainView> table(const ordered_json& j, const std::string& path) {
    if (!detail::expect_object(sink_, j, path, code::kBadType)) return std::nullopt;
    Fields f(sink_, j, path, code::kBadType, false);
    const auto* rows = f.required("rows");
    const auto* cols = f.required("cols");
    const auto* cells = f.required("cells");
    const auto* row_labels = f.optional("row_labels");
    const auto* col_labels = f.optional("col_labels");
    f.finish();
    if (!rows || !cols || !cells) return std::nullopt;
    auto r = detail::read_int(sink_, *rows, f.path("rows"), code::kBadType);
    auto c = detail::read_int(sink_, *cols, f.path("cols"), code::kBadType);
    if (!r || !c) return std::nullopt;
    if (*r < 1 || *c < 1) {
      sink_.error(code::kBadState, f.path(*r < 1 ? "rows" : "cols"),
                  "table dimensions must be at least 1x1");
      return std::nullopt;
    }
    TableView view;
    view.rows = *r;
    view.cols = *c;
    bool ok = detail::expect_array(sink_, *cells, f.path("cells"), code::kBadType);
    if (ok && cells->size() != static_cast<std::size_t>(*r)) {
      sink_.error(code::kBadState, f.path("cells"),
                  fmt::format("expected {} rows of cells, found {}", *r, cells->size()));
      ok = false;
    }
    for (std::size_t i = 0; ok && i < cells->size(); ++i) {
      const auto rpath = child(f.path("cells"), i);
      const auto& row = (*cells)[i];
      if (!detail::expect_array(sink_, row, rpath, code::kBadType)) {
        ok = false;
        break;
      }
      if (row.size() != static_cast<std::size_t>(*c)) {
        sink_.error(code::kBadState, rpath,
                    fmt::format("expected {} cells in row {}, found {}", *c, i, row.size()));
        ok = false;
        break;
      }
      for (std::size_t k = 0; k < row.size(); ++k) {
        const auto cpath = child(rpath, k);
        if (!detail::expect_object(sink_, row[k], cpath, code::kBadType)) {
          ok = false;
          continue;
        }
        Fields cf(sink_, row[k], cpath, code::kBadType, false);
        TableCell cell;
        cell.value = value_or_null(cf, "value");
        cell.style_key = str_or(cf, "styleKey", std::string(kIdleStyle));
        cf.finish();
        ok = ok && cf.ok();
        view.cells.push_back(std::move(cell));
      }
    }
    auto labels = [&](const ordered_json* l, std::string_view key, std::vector<std::string>& out) {
      if (!l) return;
      if (!detail::expect_array(sink_, *l, f.path(key), code::kBadType)) {
        ok = false;
        return;
      }
      for (std::size_t i = 0; i < l->size(); ++i) {
        if (auto s = detail::read_string(sink_, (*l)[i], child(f.path(key), i), code::kBadType)) {
          out.push_back(*s);
        } else {
          ok = false;
        }
      }
    };
    labels(row_labels, "row_labels", view.row_labels);
    labels(col_labels, "col_labels", view.col_labels);
    if (!ok) return std::nullopt;
    return view;
  }

  bool auxiliary(const ordered_json& j, const std::string& path, std::vector<AuxView>& out) {
    if (!detail::expect_array(sink_, j, path, code::kBadType)) return false;
    bool ok = true;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const auto apath = child(path, i);
      if (!detail::expect_object(sink_, j[i], apath, code::kBadType)) {
        ok = false;
        continue;
      }
      Fields f(sink_, j[i], apath, code::kBadType, false);
      AuxView view;
      view.name = str_req(f, "name");
      const auto kind = str_or(f, "kind", "list");
      if (kind == "list") {
        view.kind = AuxKind::List;
      } else if (kind == "map") {
        view.kind = AuxKind::Map;
      } else {
        sink_.error(code::kBadType, f.path("kind"), "kind must be 'list' or 'map'");
        f.fail();
      }
      if (const auto* entries = f.optional("entries")) {
        if (!detail::expect_array(sink_, *entries, f.path("entries"), code::kBadType)) {
          f.fail();
        } else {
          for (std::size_t e = 0; e < entries->size(); ++e) {
            const auto epath = child(f.path("entries"), e);
            if (!detail::expect_object(sink_, (*entries)[e], epath, code::kBadType)) {
              f.fail();
              continue;
            }
            Fields ef(sink_, (*entries)[e], epath, code::kBadType, false);
            AuxEntry entry;
            if (const auto* k = ef.optional("key")) {
              if (auto v = detail::read_value(sink_, *k, ef.path("key"), code::kBadType)) {
                entry.key = *v;
              } else {
                ef.fail();
              }
            }
            entry.value = value_or_null(ef, "value");
            entry.style_key = str_or(ef, "styleKey", std::string(kIdleStyle));
            ef.finish();
            if (!ef.ok()) f.fail();
            view.entries.push_back(std::move(entry));
          }
        }
      }
      f.finish();
      ok = ok && f.ok();
      out.push_back(std::move(view));
    }
    return ok;
  }

  bool styles(const ordered_json& j, const std::string& path, std::map<std::string, StyleDef>& out) {
    if (!detail::expect_object(sink_, j, path, code::kBadType)) return false;
    Fields f(sink_, j, path, code::kBadType, false);
    const auto* element_styles = f.optional("elementStyles");
    f.finish();
    if (!element_styles) return true;
    const auto epath = f.path("elementStyles");
    if (!detail::expect_object(sink_, *element_styles, epath, code::kBadType)) return false;
    bool ok = true;
    for (auto it = element_styles->begin(); it != element_styles->end(); ++it) {
      const auto spath = child(epath, it.key());
      if (!detail::expect_object(sink_, it.value(), spath, code::kBadType)) {
        ok = false;
        continue;
      }
      Fields sf(sink_, it.value(), spath, code::kBadType, false);
      StyleDef def;
      auto color = [&](std::string_view key, std::optional<std::string>& dst) {
        if (const auto* c = sf.optional(key)) {
          if (auto s = detail::read_string(sink_, *c, sf.path(key), code::kBadType)) {
            dst = *s;
          } else {
            sf.fail();
          }
        }
      };
      color("fill", def.fill);
      color("stroke", def.stroke);
      color("text", def.text);
      sf.finish();
      ok = ok && sf.ok();
      out[it.key()] = def;
    }
    return ok;
  }

 private:
  Sink& sink_;
};

// code_highlight: integer or array of integers.
std::optional<std::vector<int>> decode_highlight(Sink& sink, const ordered_json& j,
                                                 const std::string& path) {
  std::vector<int> out;
  auto one = [&](const ordered_json& v, const std::string& p) {
    if (!v.is_number_integer()) {
      sink.error(code::kBadHighlightType, p,
                 fmt::format("code_highlight must be an integer or integer array, found {}",
                             detail::type_name(v)));
      return false;
    }
    out.push_back(static_cast<int>(v.get<std::int64_t>()));
    return true;
  };
  if (j.is_array()) {
    bool ok = true;
    for (std::size_t i = 0; i < j.size(); ++i) ok = one(j[i], child(path, i)) && ok;
    if (!ok) return std::nullopt;
    return out;
  }
  if (!one(j, path)) return std::nullopt;
  return out;
}

std::optional<Delta> decode_delta(Sink& sink, const ordered_json& j, const std::string& path) {
  if (!detail::expect_object(sink, j, path, code::kBadType)) return std::nullopt;
  Fields f(sink, j, path, code::kBadType, false);
  const auto* description = f.optional("action_description");
  const auto* highlight = f.optional("code_highlight");
  const auto* operations = f.required("operations");
  f.finish();
  bool ok = f.ok();
  Delta delta;
  if (description) {
    if (auto s = detail::read_string(sink, *description, f.path("action_description"), code::kBadType)) {
      delta.action_description = *s;
    } else {
      ok = false;
    }
  }
  if (highlight) {
    if (auto h = decode_highlight(sink, *highlight, f.path("code_highlight"))) {
      delta.code_highlight = std::move(*h);
    } else {
      ok = false;
    }
  }
  if (operations) {
    const auto opath = f.path("operations");
    if (!operations->is_array()) {
      sink.error(code::kOpsNot2D, opath, "operations must be a 2D array ([[...]])");
      ok = false;
    } else {
      for (std::size_t g = 0; g < operations->size(); ++g) {
        const auto& group = (*operations)[g];
        const auto gpath = child(opath, g);
        if (!group.is_array()) {
          sink.error(code::kOpsNot2D, group.is_object() && g == 0 ? opath : gpath,
                     "operations must be a 2D array ([[...]]); found a flat operation list");
          ok = false;
          if (group.is_object()) break;
          continue;
        }
        OpGroup ops;
        for (std::size_t k = 0; k < group.size(); ++k) {
          if (auto op = decode_op(sink, group[k], child(gpath, k))) {
            ops.push_back(std::move(*op));
          } else {
            ok = false;
          }
        }
        delta.operations.push_back(std::move(ops));
      }
    }
  }
  if (!ok) return std::nullopt;
  return delta;
}

std::optional<Trace> decode_trace(Sink& sink, const ordered_json& doc) {
  if (!detail::expect_object(sink, doc, "", code::kBadType)) return std::nullopt;
  Trace trace;
  Fields top(sink, doc, "", code::kBadType, false);
  const auto* version = top.required("vta_version");
  const auto* algorithm = top.optional("algorithm");
  const auto* frame = top.required("initial_frame");
  const auto* deltas = top.required("deltas");
  const auto* extensions = top.optional("required_extensions");
  top.finish();
  bool ok = top.ok();

  if (version) {
    if (!version->is_string()) {
      sink.error(code::kVersionNotString, "/vta_version",
                 fmt::format("vta_version must be the string \"{}\", not {}", kVtaVersion,
                             detail::type_name(*version)));
      ok = false;
    } else {
      trace.vta_version = version->get<std::string>();
    }
  }

  if (algorithm) {
    if (detail::expect_object(sink, *algorithm, "/algorithm", code::kBadType)) {
      Fields af(sink, *algorithm, "/algorithm", code::kBadType, false);
      StateDecoder sd(sink);
      trace.algorithm.name = sd.str_or(af, "name", "");
      trace.algorithm.family = sd.str_or(af, "family", "");
      af.finish();
      ok = ok && af.ok();
    } else {
      ok = false;
    }
  }

  if (frame) {
    if (detail::expect_object(sink, *frame, "/initial_frame", code::kBadType)) {
      Fields ff(sink, *frame, "/initial_frame", code::kBadType, false);
      const auto* schema = ff.optional("data_schema");
      const auto* data = ff.required("data_state");
      const auto* aux = ff.optional("auxiliary_views");
      const auto* styles = ff.optional("styles");
      const auto* pseudocode = ff.optional("pseudocode");
      ff.finish();
      ok = ok && ff.ok();
      StateDecoder sd(sink);
      if (schema) trace.data_schema = *schema;
      if (data) {
        if (auto view = sd.data_state(*data, ff.path("data_state"))) {
          trace.initial.main = std::move(*view);
        } else {
          ok = false;
        }
      }
      if (aux && !sd.auxiliary(*aux, ff.path("auxiliary_views"), trace.initial.auxiliary_views)) {
        ok = false;
      }
      if (styles) {
        ok = sd.styles(*styles, ff.path("styles"), trace.initial.styles) && ok;
      }
      if (!trace.initial.styles.contains(std::string(kIdleStyle))) {
        sink.warning(code::kMissingIdleStyle, styles ? ff.path("styles") : "/initial_frame",
                     "reserved style 'idle' is missing; a default definition is used");
        trace.initial.styles.emplace(std::string(kIdleStyle), default_styles().at(std::string(kIdleStyle)));
      }
      if (pseudocode) {
        if (detail::expect_array(sink, *pseudocode, ff.path("pseudocode"), code::kBadType)) {
          for (std::size_t i = 0; i < pseudocode->size(); ++i) {
            if (auto s = detail::read_string(sink, (*pseudocode)[i],
                                             child(ff.path("pseudocode"), i), code::kBadType)) {
              trace.initial.pseudocode.push_back(*s);
            } else {
              ok = false;
            }
          }
        } else {
          ok = false;
        }
      }
    } else {
      ok = false;
    }
  }

  if (deltas) {
    if (detail::expect_array(sink, *deltas, "/deltas", code::kBadType)) {
      for (std::size_t d = 0; d < deltas->size(); ++d) {
        sink.set_delta(d);
        if (auto delta = decode_delta(sink, (*deltas)[d], child("/deltas", d))) {
          trace.deltas.push_back(std::move(*delta));
        } else {
          ok = false;
        }
      }
      sink.set_delta(std::nullopt);
    } else {
      ok = false;
    }
  }

  if (extensions) {
    if (detail::expect_array(sink, *extensions, "/required_extensions", code::kBadType)) {
      for (std::size_t i = 0; i < extensions->size(); ++i) {
        if (auto s = detail::read_string(sink, (*extensions)[i], child("/required_extensions", i),
                                         code::kBadType)) {
          trace.required_extensions.push_back(*s);
        } else {
          ok = false;
        }
      }
    } else {
      ok = false;
    }
  }

  if (!ok) return std::nullopt;
  return trace;
}

}  // namespace

std::optional<Operation> decode_operation(const ordered_json& j, const std::string& path,
                                          std::vector<Diagnostic>& diagnostics) {
  Sink sink(diagnostics);
  return decode_op(sink, j, path);
}

ParseResult parse_trace(std::string_view document) {
  ParseResult result;
  auto doc = detail::parse_document(document, result.diagnostics, result.syntax_error);
  if (!doc) return result;
  Sink sink(result.diagnostics);
  auto trace = decode_trace(sink, *doc);
  const bool clean = std::none_of(result.diagnostics.begin(), result.diagnostics.end(),
                                  [](const Diagnostic& d) { return d.is_error(); });
  if (trace && clean && sink.error_count() == 0) result.trace = std::move(trace);
  return result;
}

}  // namespace vta::json
