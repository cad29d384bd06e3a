#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vta/core/state.hpp"
#include "vta/json/diagnostic.hpp"
#include "vta/rsl/rsl.hpp"

namespace vta::layout {

struct Point {
  double x = 0;
  double y = 0;
  bool operator==(const Point&) const = default;
};

/// Axis-aligned box; (x, y) is the top-left corner, y grows downwards.
struct Box {
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;
  bool operator==(const Box&) const = default;
  Point center() const { return {x + w / 2, y + h / 2}; }
  double right() const { return x + w; }
  double bottom() const { return y + h; }
};

double overlap_area(const Box& a, const Box& b);
bool inside(const Box& inner, const Box& outer);

inline constexpr double kCaptionBand = 0.6;
inline constexpr double kLeftShare = 0.35;
inline constexpr double kPanelGutter = 0.25;
inline constexpr double kScaleFloor = 0.4;

/// Abstract drawing area: left panel for pseudocode and auxiliary views, main
/// panel for the data view, caption band along the bottom.
struct Canvas {
  double width = 16.0;
  double height = 9.0;
  double margin = 0.5;

  static Canvas from(const rsl::CanvasSpec& spec) { return {spec.width, spec.height, spec.margin}; }
  Box left_panel() const;
  Box main_panel() const;
  Box caption() const;
};

/// Drawn connection between two main-view elements. `control` equals the
/// midpoint for straight edges.
struct EdgePath {
  std::size_t index = 0;  // position in the view's edge list (trees: parent order)
  std::string from;
  std::string to;
  Point start;
  Point control;
  Point end;
  bool curved = false;
  bool directed = false;
  bool operator==(const EdgePath&) const = default;
};

struct AuxPlacement {
  std::string name;
  Box header;
  std::vector<Box> entries;
  bool operator==(const AuxPlacement&) const = default;
};

/// Uniform scale about the origin followed by a translation.
struct Transform {
  double scale = 1.0;
  double dx = 0.0;
  double dy = 0.0;
  bool operator==(const Transform&) const = default;
  Point apply(Point p) const { return {p.x * scale + dx, p.y * scale + dy}; }
  Box apply(const Box& b) const { return {b.x * scale + dx, b.y * scale + dy, b.w * scale, b.h * scale}; }
};

struct Placement {
  rsl::LayoutType engine = rsl::LayoutType::Grid;
  Box main_panel;
  Box left_panel;
  Box caption;

  /// Main-view element boxes keyed by element id: array index, node id,
  /// "row,col" for table cells, key text for hash entries.
  std::map<std::string, Box> elements;
  /// Droppable extras: matrix labels, bucket headers, array pointers.
  std::map<std::string, Box> decorations;
  std::vector<EdgePath> edges;

  std::vector<Box> pseudocode;
  std::vector<AuxPlacement> aux;
  std::vector<std::pair<std::string, Box>> comments;

  Transform transform;  // content units -> canvas units for the main panel
  double left_scale = 1.0;
  bool abbreviated = false;
  std::vector<json::Diagnostic> warnings;

  bool operator==(const Placement&) const = default;
};

class CapacityExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kDensityRescale = "DENSITY_RESCALE";
inline constexpr std::string_view kLayoutFallback = "LAYOUT_FALLBACK";
inline constexpr std::string_view kOverlapFallback = "OVERLAP_FALLBACK";

/// Places one state. `previous` warm-starts force-directed layouts: nodes
/// present there keep their positions and the previous transform is reused
/// when the content still fits.
Placement compute_layout(const core::VisualState& state, const rsl::RenderConfig& config,
                         const Placement* previous = nullptr);

/// One placement per state, warm-starting each from its predecessor.
std::vector<Placement> layout_frames(std::span<const core::VisualState> states,
                                     const rsl::RenderConfig& config);

/// Content laid out in its own units, before fitting to the panel.
struct Content {
  std::map<std::string, Box> elements;
  std::map<std::string, Box> decorations;
};

struct FitResult {
  Transform transform;
  bool abbreviated = false;
  std::vector<json::Diagnostic> warnings;
};

/// Fits content into `panel`: centred at scale 1 when it fits, otherwise a
/// uniform shrink down to `floor`, then abbreviated mode (decorations
/// dropped), then CapacityExceeded.
FitResult shrink_to_fit(const Content& content, const Box& panel, double floor = kScaleFloor);

struct DriftReport {
  double max_displacement = 0.0;
  std::size_t persisting = 0;
  std::string worst_id;
};

/// Largest centre displacement over element ids present in both placements.
DriftReport layout_stability(const Placement& prev, const Placement& next);

/// Pairs of intersecting boxes (positive area) in the main panel and the
/// left panel. Empty for a collision-free placement.
std::vector<std::pair<std::string, std::string>> overlapping_pairs(const Placement& p);

/// Ids of boxes that fall outside their panel.
std::vector<std::string> uncontained(const Placement& p);

}  // namespace vta::layout
