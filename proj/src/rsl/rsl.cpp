#include "vta/rsl/rsl.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include <fmt/format.h>

#include "json/decoder.hpp"
#include "vta/core/algebra.hpp"

namespace vta::rsl {

using namespace vta::core;
using json::detail::child;
using json::detail::Fields;
using json::detail::Sink;
namespace code = json::code;

namespace {

constexpr std::array<std::string_view, 6> kLayoutNames = {
    "force_directed", "hierarchical", "circular", "grid", "matrix", "horizontal_array"};
constexpr std::array<std::string_view, 5> kVariantNames = {"pulse", "glow", "shake", "fade", "morph"};

constexpr std::string_view kDefaultBackground = "#1A1A1A";
constexpr std::string_view kDefaultText = "#FFFFFF";
constexpr std::string_view kDefaultPrimary = "#3498DB";
constexpr std::string_view kDefaultNeutral = "#34495E";

double default_spacing(ViewSort sort) {
  switch (sort) {
    case ViewSort::Graph: return 2.0;
    case ViewSort::Tree: return 1.5;
    default: return 1.0;
  }
}

double default_cell_size(ViewSort sort) {
  return sort == ViewSort::Table || sort == ViewSort::Hashtable ? 0.8 : 1.0;
}

constexpr double kDefaultEdgeCurve = 0.2;
constexpr double kDefaultTransition = 0.5;
constexpr double kDefaultPause = 0.3;

class Reader {
 public:
  Reader(Sink& sink, bool lenient) : sink_(sink), lenient_(lenient) {}

  std::optional<double> bounded(const ordered_json& j, const std::string& path, Bounds b) {
    auto v = json::detail::read_number(sink_, j, path, code::kBadType);
    if (!v) return std::nullopt;
    if (b.contains(*v)) return v;
    if (lenient_) {
      const double c = b.clamp(*v);
      sink_.warning(code::kOutOfBounds, path,
                    fmt::format("{} outside [{}, {}]; clamped to {}", *v, b.lo, b.hi, c));
      return c;
    }
    sink_.error(code::kOutOfBounds, path, fmt::format("{} outside [{}, {}]", *v, b.lo, b.hi));
    return std::nullopt;
  }

  std::optional<std::string> color(const ordered_json& j, const std::string& path) {
    auto s = json::detail::read_string(sink_, j, path, code::kBadType);
    if (!s) return std::nullopt;
    if (!is_hex_color(*s)) {
      sink_.error(code::kBadColor, path, fmt::format("'{}' is not a #RRGGBB color", *s));
      return std::nullopt;
    }
    return s;
  }

  bool object(const ordered_json& j, const std::string& path) {
    return json::detail::expect_object(sink_, j, path, code::kBadType);
  }

  void meta(const ordered_json& j, RslConfig& cfg) {
    if (!object(j, "/meta")) return;
    Fields f(sink_, j, "/meta", code::kBadType, false);
    if (const auto* v = f.optional("rsl_version")) {
      if (auto s = json::detail::read_string(sink_, *v, f.path("rsl_version"), code::kBadType)) {
        cfg.rsl_version = *s;
      }
    }
    f.finish();
  }

  void theme(const ordered_json& j, RslConfig& cfg) {
    if (!object(j, "/theme")) return;
    for (auto it = j.begin(); it != j.end(); ++it) {
      auto c = color(it.value(), child("/theme", it.key()));
      if (!c) continue;
      if (it.key() == "background") {
        cfg.theme.background = *c;
      } else if (it.key() == "text") {
        cfg.theme.text = *c;
      } else if (it.key() == "primary") {
        cfg.theme.primary = *c;
      } else {
        cfg.theme.named[it.key()] = *c;
      }
    }
  }

  void timeline(const ordered_json& j, RslConfig& cfg) {
    if (!object(j, "/timeline")) return;
    Fields f(sink_, j, "/timeline", code::kBadType, false);
    if (const auto* v = f.optional("transition")) {
      cfg.timeline.transition = bounded(*v, f.path("transition"), kTransitionBounds);
    }
    if (const auto* v = f.optional("pause")) cfg.timeline.pause = bounded(*v, f.path("pause"), kPauseBounds);
    f.finish();
  }

  void layout(const ordered_json& j, RslConfig& cfg) {
    if (!object(j, "/layout")) return;
    Fields f(sink_, j, "/layout", code::kBadType, false);
    const auto* main = f.optional("main");
    f.finish();
    if (!main) return;
    const auto mpath = f.path("main");
    if (!object(*main, mpath)) return;
    Fields m(sink_, *main, mpath, code::kBadType, false);
    if (const auto* t = m.optional("type")) {
      if (auto s = json::detail::read_string(sink_, *t, m.path("type"), code::kBadType)) {
        cfg.layout.type = layout_type_from_string(*s);
        if (!cfg.layout.type) {
          sink_.error(code::kBadEnum, m.path("type"), fmt::format("unknown layout type '{}'", *s));
        }
      }
    }
    if (const auto* p = m.optional("params")) {
      const auto ppath = m.path("params");
      if (object(*p, ppath)) {
        Fields pf(sink_, *p, ppath, code::kBadType, false);
        if (const auto* v = pf.optional("node_spacing")) {
          cfg.layout.node_spacing = bounded(*v, pf.path("node_spacing"), kNodeSpacingBounds);
        }
        if (const auto* v = pf.optional("edge_curve")) {
          cfg.layout.edge_curve = bounded(*v, pf.path("edge_curve"), kEdgeCurveBounds);
        }
        if (const auto* v = pf.optional("cell_size")) {
          cfg.layout.cell_size = bounded(*v, pf.path("cell_size"), kCellSizeBounds);
        }
        pf.finish();
      }
    }
    m.finish();
  }

  void rules(const ordered_json& j, RslConfig& cfg) {
    if (!json::detail::expect_array(sink_, j, "/rules", code::kBadType)) return;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const auto rpath = child("/rules", i);
      if (!object(j[i], rpath)) continue;
      Fields f(sink_, j[i], rpath, code::kBadType, false);
      const auto* when = f.required("when");
      const auto* act = f.optional("do");
      f.finish();
      Rule rule;
      bool ok = when != nullptr;
      if (when && object(*when, f.path("when"))) {
        Fields w(sink_, *when, f.path("when"), code::kBadType, false);
        if (const auto* op = w.required("op")) {
          if (!op->is_string()) {
            sink_.error(code::kBadType, w.path("op"), "op must be a string");
            ok = false;
          } else if (auto c = op_code_from_string(op->get<std::string>())) {
            rule.op = *c;
          } else {
            sink_.error(code::kUnknownOp, w.path("op"),
                        fmt::format("'{}' is not an operation name", op->get<std::string>()));
            ok = false;
          }
        } else {
          ok = false;
        }
        if (const auto* sk = w.optional("styleKey")) {
          if (auto s = json::detail::read_string(sink_, *sk, w.path("styleKey"), code::kBadType)) {
            rule.style_key = *s;
          } else {
            ok = false;
          }
        }
        w.finish();
      } else {
        ok = false;
      }
      if (act && object(*act, f.path("do"))) {
        Fields d(sink_, *act, f.path("do"), code::kBadType, false);
        if (const auto* anim = d.optional("animation")) {
          const auto apath = d.path("animation");
          if (object(*anim, apath)) {
            Fields a(sink_, *anim, apath, code::kBadType, false);
            if (const auto* v = a.optional("variant")) {
              if (auto s = json::detail::read_string(sink_, *v, a.path("variant"), code::kBadType)) {
                rule.variant = animation_variant_from_string(*s);
                if (!rule.variant) {
                  sink_.error(code::kBadEnum, a.path("variant"),
                              fmt::format("unknown animation variant '{}'", *s));
                }
              }
            }
            if (const auto* v = a.optional("duration")) {
              rule.duration = bounded(*v, a.path("duration"), kDurationBounds);
            }
            a.finish();
          }
        }
        if (const auto* e = d.optional("emphasis")) rule.emphasis = color(*e, d.path("emphasis"));
        d.finish();
      }
      if (ok) cfg.rules.push_back(std::move(rule));
    }
  }

 private:
  Sink& sink_;
  bool lenient_;
};

bool has_error(const std::vector<Diagnostic>& d) {
  return std::any_of(d.begin(), d.end(), [](const Diagnostic& x) { return x.is_error(); });
}

/// styleKey written by an op, for rule filters.
std::optional<std::string_view> written_style(const Operation& op) {
  if (const auto* o = op.get<op::UpdateStyle>()) return o->style_key;
  if (const auto* o = op.get<op::UpdateNodeStyle>()) return o->style_key;
  if (const auto* o = op.get<op::UpdateEdgeStyle>()) return o->style_key;
  if (const auto* o = op.get<op::HighlightCollision>()) return o->style_key;
  if (const auto* o = op.get<op::HighlightTableCell>()) return o->style_key;
  if (const auto* o = op.get<op::AddNode>()) return o->node.style_key;
  if (const auto* o = op.get<op::AddChild>()) return o->node.style_key;
  if (const auto* o = op.get<op::AppendToList>()) return o->entry.style_key;
  return std::nullopt;
}

AnimationVariant default_variant(OpCode c) {
  switch (c) {
    case OpCode::UpdateStyle:
    case OpCode::UpdateNodeStyle:
    case OpCode::UpdateEdgeStyle:
    case OpCode::HighlightTableCell:
      return AnimationVariant::Pulse;
    case OpCode::MoveElements:
    case OpCode::ShiftElements:
    case OpCode::Rehash:
    case OpCode::Reparent:
    case OpCode::Rotate:
      return AnimationVariant::Morph;
    case OpCode::UpdateValues:
    case OpCode::UpdateNodeProperties:
    case OpCode::UpdateTableCell:
    case OpCode::InsertIntoBucket:
    case OpCode::SetPointer:
      return AnimationVariant::Glow;
    case OpCode::HighlightCollision:
      return AnimationVariant::Shake;
    default:
      return AnimationVariant::Fade;
  }
}

}  // namespace

std::string_view to_string(LayoutType t) { return kLayoutNames[static_cast<std::size_t>(t)]; }

std::optional<LayoutType> layout_type_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kLayoutNames.size(); ++i) {
    if (kLayoutNames[i] == s) return static_cast<LayoutType>(i);
  }
  return std::nullopt;
}

std::string_view to_string(AnimationVariant v) { return kVariantNames[static_cast<std::size_t>(v)]; }

std::optional<AnimationVariant> animation_variant_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kVariantNames.size(); ++i) {
    if (kVariantNames[i] == s) return static_cast<AnimationVariant>(i);
  }
  return std::nullopt;
}

bool is_hex_color(std::string_view s) {
  if (s.size() != 7 || s[0] != '#') return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); });
}

RslParse parse_rsl(std::string_view text, bool lenient) {
  RslParse result;
  bool syntax_error = false;
  auto doc = json::detail::parse_document(text, result.diagnostics, syntax_error);
  if (!doc) return result;
  Sink sink(result.diagnostics);
  if (!json::detail::expect_object(sink, *doc, "", code::kBadType)) return result;

  RslConfig cfg;
  Reader r(sink, lenient);
  Fields top(sink, *doc, "", code::kBadType, false);
  if (const auto* j = top.optional("meta")) r.meta(*j, cfg);
  if (const auto* j = top.optional("theme")) r.theme(*j, cfg);
  if (const auto* j = top.optional("timeline")) r.timeline(*j, cfg);
  if (const auto* j = top.optional("layout")) r.layout(*j, cfg);
  if (const auto* j = top.optional("rules")) r.rules(*j, cfg);
  if (const auto* j = top.optional("annotations")) {
    if (j->is_array()) {
      cfg.annotations = *j;
    } else {
      sink.error(code::kBadType, "/annotations", "annotations must be a list");
    }
  }
  top.finish();
  if (!has_error(result.diagnostics) && sink.error_count() == 0) result.config = std::move(cfg);
  return result;
}

json::ValidationReport validate_rsl(std::string_view text, bool lenient) {
  return json::make_report(parse_rsl(text, lenient).diagnostics);
}

std::string serialize_rsl(const RslConfig& c) {
  ordered_json doc;
  doc["meta"] = ordered_json{{"rsl_version", c.rsl_version}};
  auto theme = ordered_json::object();
  if (c.theme.background) theme["background"] = *c.theme.background;
  if (c.theme.text) theme["text"] = *c.theme.text;
  if (c.theme.primary) theme["primary"] = *c.theme.primary;
  for (const auto& [k, v] : c.theme.named) theme[k] = v;
  doc["theme"] = theme;
  auto timeline = ordered_json::object();
  if (c.timeline.transition) timeline["transition"] = *c.timeline.transition;
  if (c.timeline.pause) timeline["pause"] = *c.timeline.pause;
  doc["timeline"] = timeline;
  auto main = ordered_json::object();
  if (c.layout.type) main["type"] = std::string(to_string(*c.layout.type));
  auto params = ordered_json::object();
  if (c.layout.node_spacing) params["node_spacing"] = *c.layout.node_spacing;
  if (c.layout.edge_curve) params["edge_curve"] = *c.layout.edge_curve;
  if (c.layout.cell_size) params["cell_size"] = *c.layout.cell_size;
  main["params"] = params;
  doc["layout"] = ordered_json{{"main", main}};
  auto rules = ordered_json::array();
  for (const auto& r : c.rules) {
    ordered_json when;
    when["op"] = std::string(to_string(r.op));
    if (r.style_key) when["styleKey"] = *r.style_key;
    auto act = ordered_json::object();
    auto anim = ordered_json::object();
    if (r.variant) anim["variant"] = std::string(to_string(*r.variant));
    if (r.duration) anim["duration"] = *r.duration;
    if (!anim.empty()) act["animation"] = anim;
    if (r.emphasis) act["emphasis"] = *r.emphasis;
    rules.push_back(ordered_json{{"when", when}, {"do", act}});
  }
  doc["rules"] = rules;
  if (c.annotations) doc["annotations"] = *c.annotations;
  return doc.dump(2, ' ', false) + "\n";
}

TraceFeatures extract_features(const json::Trace& trace) {
  TraceFeatures f;
  f.family = trace.algorithm.family;
  f.data_type = sort_of(trace.initial.main);
  f.frame_count = trace.deltas.size() + 1;
  f.scale = std::visit(
      [](const auto& v) -> std::size_t {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, ArrayView>) {
          return v.elements.size();
        } else if constexpr (std::is_same_v<V, GraphView> || std::is_same_v<V, TreeView>) {
          return v.nodes.size();
        } else if constexpr (std::is_same_v<V, HashtableView>) {
          std::size_t n = 0;
          for (const auto& b : v.buckets) n += b.size();
          return n;
        } else {
          return static_cast<std::size_t>(v.rows * v.cols);
        }
      },
      trace.initial.main);
  for (const auto& d : trace.deltas) {
    for (const auto& g : d.operations) {
      for (const auto& op : g) f.ops.insert(op.code());
    }
  }
  return f;
}

LayoutType default_layout(ViewSort sort) {
  switch (sort) {
    case ViewSort::Array: return LayoutType::HorizontalArray;
    case ViewSort::Graph: return LayoutType::ForceDirected;
    case ViewSort::Tree: return LayoutType::Hierarchical;
    case ViewSort::Hashtable: return LayoutType::Grid;
    case ViewSort::Table: return LayoutType::Matrix;
  }
  return LayoutType::Grid;
}

bool layout_supports(LayoutType type, ViewSort sort) {
  switch (type) {
    case LayoutType::Grid: return true;
    case LayoutType::HorizontalArray: return sort == ViewSort::Array;
    case LayoutType::Matrix: return sort == ViewSort::Table;
    case LayoutType::ForceDirected:
    case LayoutType::Hierarchical:
    case LayoutType::Circular:
      return sort == ViewSort::Graph || sort == ViewSort::Tree;
  }
  return false;
}

RslConfig default_rsl(const TraceFeatures& features) {
  RslConfig c;
  c.theme.background = std::string(kDefaultBackground);
  c.theme.text = std::string(kDefaultText);
  c.theme.primary = std::string(kDefaultPrimary);
  c.timeline.transition = kDefaultTransition;
  c.timeline.pause = kDefaultPause;
  c.layout.type = default_layout(features.data_type);
  c.layout.node_spacing = default_spacing(features.data_type);
  c.layout.edge_curve = kDefaultEdgeCurve;
  c.layout.cell_size = default_cell_size(features.data_type);
  for (auto op : features.ops) {
    Rule r;
    r.op = op;
    r.variant = default_variant(op);
    c.rules.push_back(r);
  }
  return c;
}

std::optional<AnimationDirective> RenderConfig::directive_for(const Operation& op) const {
  std::optional<AnimationDirective> out;
  const auto style = written_style(op);
  for (const auto& r : rules) {
    if (r.op != op.code()) continue;
    if (r.style_key && (!style || *style != *r.style_key)) continue;
    out = r.directive;
  }
  return out;
}

RenderConfig interpret_rsl(const std::optional<RslConfig>& config, const TraceFeatures& features) {
  RenderConfig out;
  out.fallback = !config.has_value();
  const RslConfig cfg = config ? *config : default_rsl(features);

  out.theme.background = cfg.theme.background.value_or(std::string(kDefaultBackground));
  out.theme.text = cfg.theme.text.value_or(std::string(kDefaultText));
  out.theme.primary = cfg.theme.primary.value_or(std::string(kDefaultPrimary));
  out.theme.neutral = std::string(kDefaultNeutral);
  out.theme.named = cfg.theme.named;

  out.transition = kTransitionBounds.clamp(cfg.timeline.transition.value_or(kDefaultTransition));
  out.pause = kPauseBounds.clamp(cfg.timeline.pause.value_or(kDefaultPause));

  out.layout = cfg.layout.type.value_or(default_layout(features.data_type));
  out.node_spacing = kNodeSpacingBounds.clamp(cfg.layout.node_spacing.value_or(default_spacing(features.data_type)));
  out.edge_curve = kEdgeCurveBounds.clamp(cfg.layout.edge_curve.value_or(kDefaultEdgeCurve));
  out.cell_size = kCellSizeBounds.clamp(cfg.layout.cell_size.value_or(default_cell_size(features.data_type)));

  for (const auto& r : cfg.rules) {
    DirectiveRule d{r.op, r.style_key, {}};
    d.directive.variant = r.variant.value_or(AnimationVariant::Pulse);
    d.directive.duration = kDurationBounds.clamp(r.duration.value_or(out.transition));
    d.directive.emphasis = r.emphasis;
    out.rules.push_back(std::move(d));
  }

  if (cfg.annotations && cfg.annotations->is_array()) {
    for (const auto& a : *cfg.annotations) {
      if (a.is_string()) {
        out.captions.push_back(a.get<std::string>());
      } else if (a.is_object() && a.contains("text") && a["text"].is_string()) {
        out.captions.push_back(a["text"].get<std::string>());
      }
    }
  }
  return out;
}

RenderConfig interpret_rsl_text(std::string_view text, const TraceFeatures& features, bool lenient,
                                std::vector<Diagnostic>* notes) {
  auto parsed = parse_rsl(text, lenient);
  if (notes) {
    notes->insert(notes->end(), parsed.diagnostics.begin(), parsed.diagnostics.end());
  }
  return interpret_rsl(parsed.config, features);
}

ResolvedStyle resolve_style(std::string_view style_key, const std::map<std::string, StyleDef>& styles,
                            const ResolvedTheme& theme) {
  std::string key(style_key);
  auto it = styles.find(key);
  if (it == styles.end()) {
    key = std::string(kIdleStyle);
    it = styles.find(key);
  }
  const StyleDef def = it == styles.end() ? StyleDef{} : it->second;
  ResolvedStyle out;
  if (auto named = theme.named.find(key); named != theme.named.end()) {
    out.fill = named->second;
  } else if (def.fill) {
    out.fill = *def.fill;
  } else {
    out.fill = key == kIdleStyle ? theme.neutral : theme.primary;
  }
  out.stroke = def.stroke.value_or(theme.text);
  out.text = def.text.value_or(theme.text);
  return out;
}

}  // namespace vta::rsl
