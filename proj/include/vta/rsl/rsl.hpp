#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vta/core/operation.hpp"
#include "vta/core/state.hpp"
#include "vta/json/diagnostic.hpp"
#include "vta/json/trace.hpp"

namespace vta::rsl {

using json::Diagnostic;
using json::ordered_json;

enum class LayoutType { ForceDirected, Hierarchical, Circular, Grid, Matrix, HorizontalArray };
enum class AnimationVariant { Pulse, Glow, Shake, Fade, Morph };

std::string_view to_string(LayoutType t);
std::optional<LayoutType> layout_type_from_string(std::string_view s);
std::string_view to_string(AnimationVariant v);
std::optional<AnimationVariant> animation_variant_from_string(std::string_view s);

/// Inclusive numeric bounds enforced on every config.
struct Bounds {
  double lo;
  double hi;
  double clamp(double v) const { return v < lo ? lo : (v > hi ? hi : v); }
  bool contains(double v) const { return v >= lo && v <= hi; }
};
inline constexpr Bounds kTransitionBounds{0.1, 2.0};
inline constexpr Bounds kPauseBounds{0.0, 1.0};
inline constexpr Bounds kNodeSpacingBounds{1.0, 10.0};
inline constexpr Bounds kEdgeCurveBounds{-1.0, 1.0};
inline constexpr Bounds kCellSizeBounds{0.3, 2.0};
inline constexpr Bounds kDurationBounds{0.1, 2.0};

inline constexpr std::string_view kRslVersion = "0.1";

struct RslTheme {
  std::optional<std::string> background;
  std::optional<std::string> text;
  std::optional<std::string> primary;
  std::map<std::string, std::string> named;  // any other "#RRGGBB" entry
  bool operator==(const RslTheme&) const = default;
};

struct RslTimeline {
  std::optional<double> transition;
  std::optional<double> pause;
  bool operator==(const RslTimeline&) const = default;
};

struct RslLayout {
  std::optional<LayoutType> type;
  std::optional<double> node_spacing;
  std::optional<double> edge_curve;
  std::optional<double> cell_size;
  bool operator==(const RslLayout&) const = default;
};

struct Rule {
  core::OpCode op = core::OpCode::UpdateStyle;
  std::optional<std::string> style_key;  // matches only ops writing this styleKey
  std::optional<AnimationVariant> variant;
  std::optional<double> duration;
  std::optional<std::string> emphasis;
  bool operator==(const Rule&) const = default;
};

/// A decoded rsl.json. Every field is optional; absent ones take defaults at
/// interpretation time.
struct RslConfig {
  std::string rsl_version{kRslVersion};
  RslTheme theme;
  RslTimeline timeline;
  RslLayout layout;
  std::vector<Rule> rules;
  std::optional<ordered_json> annotations;
  bool operator==(const RslConfig&) const = default;
};

struct RslParse {
  std::optional<RslConfig> config;  // set iff no error diagnostics
  std::vector<Diagnostic> diagnostics;
};

/// Decodes and checks an RSL document. Out-of-bound numerics are errors,
/// unless `lenient`, in which case they are clamped with a warning.
RslParse parse_rsl(std::string_view text, bool lenient = false);
json::ValidationReport validate_rsl(std::string_view text, bool lenient = false);

/// Canonical rsl.json text.
std::string serialize_rsl(const RslConfig& config);

struct TraceFeatures {
  std::string family;
  core::ViewSort data_type = core::ViewSort::Array;
  std::size_t scale = 0;
  std::size_t frame_count = 1;
  std::set<core::OpCode> ops;
  bool operator==(const TraceFeatures&) const = default;
};

TraceFeatures extract_features(const json::Trace& trace);

LayoutType default_layout(core::ViewSort sort);

/// Whether `type` can place a main view of `sort`.
bool layout_supports(LayoutType type, core::ViewSort sort);

/// Deterministic stand-in for a generated config: layout per data type, dark theme.
RslConfig default_rsl(const TraceFeatures& features);

struct ResolvedTheme {
  std::string background;
  std::string text;
  std::string primary;
  std::string neutral;  // fill used for "idle" when the trace gives none
  std::map<std::string, std::string> named;
  bool operator==(const ResolvedTheme&) const = default;
};

struct AnimationDirective {
  AnimationVariant variant = AnimationVariant::Fade;
  double duration = 0.5;
  std::optional<std::string> emphasis;
  bool operator==(const AnimationDirective&) const = default;
};

struct DirectiveRule {
  core::OpCode op;
  std::optional<std::string> style_key;
  AnimationDirective directive;
  bool operator==(const DirectiveRule&) const = default;
};

struct CanvasSpec {
  double width = 16.0;
  double height = 9.0;
  double margin = 0.5;
  bool operator==(const CanvasSpec&) const = default;
};

/// Render-time configuration. Holds presentation only; nothing in it can
/// reach trace replay.
struct RenderConfig {
  ResolvedTheme theme;
  double transition = 0.5;
  double pause = 0.3;
  LayoutType layout = LayoutType::HorizontalArray;
  double node_spacing = 1.0;
  double edge_curve = 0.2;
  double cell_size = 1.0;
  std::vector<DirectiveRule> rules;  // listed order; later matches win
  CanvasSpec canvas;
  std::vector<std::string> captions;
  bool fallback = false;  // built from defaults because the config was invalid
  bool operator==(const RenderConfig&) const = default;

  double frame_duration() const { return transition + pause; }

  /// Directive for an op, honouring each rule's styleKey filter.
  std::optional<AnimationDirective> directive_for(const core::Operation& op) const;
};

/// Total: an absent config yields the default RenderConfig for the data type.
RenderConfig interpret_rsl(const std::optional<RslConfig>& config, const TraceFeatures& features);

/// Parse + interpret; never fails. Fallback notes are appended to `notes`.
RenderConfig interpret_rsl_text(std::string_view text, const TraceFeatures& features, bool lenient,
                                std::vector<Diagnostic>* notes = nullptr);

struct ResolvedStyle {
  std::string fill;
  std::string stroke;
  std::string text;
  bool operator==(const ResolvedStyle&) const = default;
};

/// Concrete colors for a styleKey: theme entry of the same name, then the
/// trace's style definition, then theme defaults. Unknown keys render as "idle".
ResolvedStyle resolve_style(std::string_view style_key,
                            const std::map<std::string, core::StyleDef>& styles,
                            const ResolvedTheme& theme);

bool is_hex_color(std::string_view s);

}  // namespace vta::rsl
