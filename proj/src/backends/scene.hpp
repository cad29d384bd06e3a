#pragma once

// Backend-neutral drawing list in canvas units. The TikZ and SVG emitters
// only translate these primitives, so both show the same picture.

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "vta/backends/backends.hpp"

namespace vta::backends::detail {

struct RectPrim {
  layout::Box box;
  std::string fill;  // empty: no fill
  std::string stroke;
  double stroke_width = 0.02;
  bool dashed = false;
  std::string tag;  // element id, carried into output for inspection
};

enum class Anchor { Start, Middle, End };

struct TextPrim {
  layout::Point at;  // baseline point: left for Start, centre for Middle, right for End
  std::string text;  // UTF-8; null values already replaced by their glyph
  std::string color;
  double size = 0.25;  // em height in canvas units
  Anchor anchor = Anchor::Middle;
  bool bold = false;
  bool mono = false;
};

struct PathPrim {
  layout::Point start;
  layout::Point control;
  layout::Point end;
  bool curved = false;
  std::string color;
  double width = 0.03;
  bool arrow = false;
  bool dashed = false;
};

using Prim = std::variant<RectPrim, TextPrim, PathPrim>;

struct Scene {
  std::vector<Prim> prims;
  std::vector<std::string> colors() const;  // sorted, unique
};

inline constexpr std::string_view kArrayNull = "\u00B7";     // middle dot
inline constexpr std::string_view kInfinityNull = "\u221E";  // infinity

Scene build_scene(const FrameSet& frames, std::size_t index, const rsl::RenderConfig& config);

/// Arrowhead triangle at the path's end: tip first.
std::array<layout::Point, 3> arrow_head(const PathPrim& p);

/// Fixed-precision coordinate text; never prints "-0.0000".
std::string num(double v);

/// Writes files under one directory and records them for manifest.json.
class BundleWriter {
 public:
  explicit BundleWriter(fs::path dir);
  void write(const std::string& relative, std::string_view bytes);
  /// Writes manifest.json and returns the bundle.
  Bundle finish();

 private:
  fs::path dir_;
  std::vector<ManifestEntry> files_;
};

}  // namespace vta::backends::detail
