#include "scene.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

namespace vta::backends::detail {

using namespace vta::core;
using layout::Box;
using layout::Point;

namespace {

constexpr std::size_t kMaxChars = 48;

/// UTF-8 aware character count, good enough for sizing text.
std::size_t glyphs(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

std::string clip(std::string s, std::size_t max_glyphs) {
  if (glyphs(s) <= max_glyphs) return s;
  std::string out;
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto c = static_cast<unsigned char>(s[i]);
    if ((c & 0xC0) != 0x80) {
      if (n == max_glyphs - 1) break;
      ++n;
    }
    out += s[i];
  }
  return out + "~";
}

/// Font size that fits `text` into a box of width w and height h.
double fit_size(std::string_view text, double w, double h) {
  const double by_height = h * 0.5;
  const double by_width = w / (0.62 * static_cast<double>(std::max<std::size_t>(glyphs(text), 1)));
  return std::max(0.05, std::min(by_height, by_width));
}

Point baseline(const Box& b, double size) { return {b.x + b.w / 2, b.y + b.h / 2 + size * 0.35}; }

class Builder {
 public:
  Builder(const FrameSet& set, std::size_t index, const rsl::RenderConfig& config)
      : frame_(set.frames.at(index)), set_(set), config_(config), theme_(config.theme) {}

  Scene run() {
    const auto& p = frame_.placement;
    const layout::Canvas canvas = layout::Canvas::from(config_.canvas);
    rect(Box{0, 0, canvas.width, canvas.height}, theme_.background, "", 0, "background");
    text({canvas.margin, canvas.margin * 0.7}, set_.title, theme_.text, 0.25, Anchor::Start, true, false);
    text({canvas.width - canvas.margin, canvas.margin * 0.7},
         fmt::format("{}/{}", frame_.index, set_.frames.size() - 1), theme_.text, 0.2, Anchor::End, false, true);

    pseudocode();
    aux();
    std::visit([this](const auto& v) { main(v); }, frame_.state.main);
    dependencies();
    comments();
    captions(p.caption);
    return std::move(scene_);
  }

 private:
  void rect(const Box& b, std::string fill, std::string stroke, double width, std::string tag, bool dashed = false) {
    scene_.prims.push_back(RectPrim{b, std::move(fill), std::move(stroke), width, dashed, std::move(tag)});
  }
  void text(Point at, std::string s, std::string color, double size, Anchor a, bool bold, bool mono) {
    if (s.empty()) return;
    scene_.prims.push_back(TextPrim{at, std::move(s), std::move(color), size, a, bold, mono});
  }
  void path(Point a, Point c, Point b, bool curved, std::string color, double width, bool arrow, bool dashed) {
    scene_.prims.push_back(PathPrim{a, c, b, curved, std::move(color), width, arrow, dashed});
  }

  rsl::ResolvedStyle style(const std::string& key) const {
    return rsl::resolve_style(key, frame_.state.styles, theme_);
  }

  /// Edges take the style's stroke when it sets one, otherwise its fill.
  std::string edge_color(const std::string& key) const {
    auto it = frame_.state.styles.find(key);
    if (it != frame_.state.styles.end() && it->second.stroke && !theme_.named.contains(key)) return *it->second.stroke;
    return style(key).fill;
  }

  void element(const Box& b, const std::string& style_key, std::string label, const std::string& tag) {
    const auto s = style(style_key);
    rect(b, s.fill, s.stroke, 0.03, tag);
    label = clip(std::move(label), kMaxChars);
    const double size = fit_size(label, b.w * 0.9, b.h);
    text(baseline(b, size), std::move(label), s.text, size, Anchor::Middle, false, false);
  }

  void pseudocode() {
    const auto& lines = frame_.state.pseudocode;
    const auto& boxes = frame_.placement.pseudocode;
    const std::set<int> lit(frame_.state.highlight.begin(), frame_.state.highlight.end());
    for (std::size_t i = 0; i < lines.size() && i < boxes.size(); ++i) {
      const bool on = lit.contains(static_cast<int>(i + 1));
      const auto& b = boxes[i];
      if (on) rect(b, "", theme_.primary, 0.02, fmt::format("pseudocode:{}", i));
      const auto line = clip(lines[i], 60);
      const double size = std::min(b.h * 0.55, b.w / (0.6 * static_cast<double>(std::max<std::size_t>(glyphs(line), 20))));
      text({b.x + 0.05, b.y + b.h / 2 + size * 0.35}, line, on ? theme_.primary : theme_.text, size, Anchor::Start,
           on, true);
    }
  }

  void aux() {
    const auto& views = frame_.state.auxiliary_views;
    const auto& boxes = frame_.placement.aux;
    for (std::size_t v = 0; v < views.size() && v < boxes.size(); ++v) {
      const auto& b = boxes[v].header;
      const double size = b.h * 0.55;
      text({b.x + 0.05, b.y + b.h / 2 + size * 0.35}, views[v].name, theme_.text, size, Anchor::Start, true, false);
      for (std::size_t e = 0; e < views[v].entries.size() && e < boxes[v].entries.size(); ++e) {
        const auto& entry = views[v].entries[e];
        std::string label = display(entry.value, kInfinityNull);
        if (entry.key) label = key_text(*entry.key) + "=" + label;
        element(boxes[v].entries[e], entry.style_key, label, fmt::format("aux:{}:{}", views[v].name, e));
      }
    }
  }

  void edge_label(const layout::EdgePath& e, const std::string& label, const std::string& color) {
    if (label.empty()) return;
    const Point m{0.25 * e.start.x + 0.5 * e.control.x + 0.25 * e.end.x,
                  0.25 * e.start.y + 0.5 * e.control.y + 0.25 * e.end.y};
    const double size = std::max(0.2 * frame_.placement.transform.scale, 0.08);
    // Sit beside the edge rather than on it, so the label clears property
    // text hanging under the nodes. Right of vertical edges, above flat ones.
    double nx = -(e.end.y - e.start.y);
    double ny = e.end.x - e.start.x;
    const double len = std::hypot(nx, ny);
    if (len > 1e-9) {
      nx /= len;
      ny /= len;
    }
    if (nx < 0 || (std::abs(nx) < 1e-9 && ny > 0)) {
      nx = -nx;
      ny = -ny;
    }
    const double half_w = 0.3 * size * static_cast<double>(label.size());
    const double off = size * 0.4 + half_w * std::abs(nx);
    text({m.x + nx * off, m.y + ny * off + size * 0.35}, label, color, size, Anchor::Middle, false, false);
  }

  void main(const ArrayView& a) {
    const auto& p = frame_.placement;
    for (std::size_t i = 0; i < a.elements.size(); ++i) {
      const auto id = std::to_string(i);
      auto it = p.elements.find(id);
      if (it == p.elements.end()) continue;
      element(it->second, a.elements[i].style_key, display(a.elements[i].value, kArrayNull), "element " + id);
    }
    for (const auto& [name, index] : a.pointers) {
      auto it = p.decorations.find("pointer:" + name);
      if (it == p.decorations.end()) continue;
      const auto& b = it->second;
      const double size = fit_size("^" + name, b.w, b.h * 1.6);
      text(baseline(b, size), "^" + name, theme_.primary, size, Anchor::Middle, true, false);
    }
  }

  void main(const GraphView& g) {
    const auto& p = frame_.placement;
    for (const auto& e : p.edges) {
      const auto& edge = g.edges.at(e.index);
      const auto color = edge_color(edge.style_key);
      path(e.start, e.control, e.end, e.curved, color, 0.04 * std::max(p.transform.scale, 0.5), e.directed, false);
      if (edge.weight) edge_label(e, display(*edge.weight, kInfinityNull), theme_.text);
    }
    for (const auto& n : g.nodes) {
      auto it = p.elements.find(n.id);
      if (it == p.elements.end()) continue;
      element(it->second, n.style_key, n.label, "element " + n.id);
      if (n.properties.empty()) continue;
      std::string props;
      for (const auto& [k, v] : n.properties) {
        if (!props.empty()) props += " ";
        props += k + "=" + display(v, kInfinityNull);
      }
      const auto& b = it->second;
      const double size = std::max(0.08, 0.18 * p.transform.scale);
      text({b.x + b.w / 2, b.bottom() + size * 1.1}, clip(props, kMaxChars), theme_.text, size, Anchor::Middle, false,
           false);
    }
  }

  void main(const TreeView& t) {
    const auto& p = frame_.placement;
    for (const auto& e : p.edges) {
      const auto* child = t.find(e.to);
      path(e.start, e.control, e.end, false, child ? edge_color(child->style_key) : theme_.text,
           0.04 * std::max(p.transform.scale, 0.5), false, false);
    }
    for (const auto& n : t.nodes) {
      auto it = p.elements.find(n.id);
      if (it != p.elements.end()) element(it->second, n.style_key, n.label, "element " + n.id);
    }
  }

  void main(const HashtableView& h) {
    const auto& p = frame_.placement;
    for (std::size_t b = 0; b < h.buckets.size(); ++b) {
      auto it = p.decorations.find(fmt::format("bucket:{}", b));
      if (it != p.decorations.end()) {
        rect(it->second, "", theme_.text, 0.02, it->first);
        const auto label = std::to_string(b);
        const double size = fit_size(label, it->second.w, it->second.h);
        text(baseline(it->second, size), label, theme_.text, size, Anchor::Middle, false, true);
      }
      for (const auto& e : h.buckets[b]) {
        const auto id = key_text(e.key);
        auto el = p.elements.find(id);
        if (el == p.elements.end()) continue;
        std::string label = id;
        if (!is_null(e.value)) label += ":" + display(e.value, kInfinityNull);
        element(el->second, e.style_key, label, "element " + id);
      }
    }
  }

  void main(const TableView& t) {
    const auto& p = frame_.placement;
    for (std::int64_t r = 0; r < t.rows; ++r) {
      for (std::int64_t c = 0; c < t.cols; ++c) {
        const auto id = fmt::format("{},{}", r, c);
        auto it = p.elements.find(id);
        if (it == p.elements.end()) continue;
        element(it->second, t.at(r, c).style_key, display(t.at(r, c).value, kInfinityNull), "element " + id);
      }
    }
    auto labels = [&](const std::vector<std::string>& names, std::string_view prefix) {
      for (std::size_t i = 0; i < names.size(); ++i) {
        auto it = p.decorations.find(fmt::format("{}:{}", prefix, i));
        if (it == p.decorations.end()) continue;
        const auto label = clip(names[i], 12);
        const double size = fit_size(label, it->second.w, it->second.h);
        text(baseline(it->second, size), label, theme_.text, size, Anchor::Middle, true, false);
      }
    };
    labels(t.col_labels, "col_label");
    labels(t.row_labels, "row_label");
  }

  void dependencies() {
    const auto& p = frame_.placement;
    for (const auto& d : frame_.dependencies) {
      auto a = p.elements.find(fmt::format("{},{}", d.from.row, d.from.col));
      auto b = p.elements.find(fmt::format("{},{}", d.to.row, d.to.col));
      if (a == p.elements.end() || b == p.elements.end()) continue;
      const auto ca = a->second.center();
      const auto cb = b->second.center();
      path(ca, {(ca.x + cb.x) / 2, (ca.y + cb.y) / 2}, cb, false, theme_.primary,
           0.05 * std::max(p.transform.scale, 0.5), true, false);
    }
  }

  /// Box of an anchored element, if it is on screen.
  std::optional<Box> anchor_box(const core::Anchor& a) const {
    const auto& p = frame_.placement;
    if (a.view == "main") {
      auto it = p.elements.find(a.element);
      if (it != p.elements.end()) return it->second;
      return std::nullopt;
    }
    const auto& views = frame_.state.auxiliary_views;
    for (std::size_t v = 0; v < views.size() && v < p.aux.size(); ++v) {
      if (views[v].name != a.view) continue;
      for (std::size_t e = 0; e < views[v].entries.size() && e < p.aux[v].entries.size(); ++e) {
        const auto& entry = views[v].entries[e];
        if (std::to_string(e) == a.element || (entry.key && key_text(*entry.key) == a.element)) {
          return p.aux[v].entries[e];
        }
      }
    }
    return std::nullopt;
  }

  void comments() {
    const auto& p = frame_.placement;
    for (std::size_t i = 0; i < frame_.state.comments.size() && i < p.comments.size(); ++i) {
      const auto& c = frame_.state.comments[i];
      const auto& b = p.comments[i].second;
      const auto line = clip(c.text, 60);
      const double size = std::min(b.h * 0.5, b.w / (0.6 * static_cast<double>(std::max<std::size_t>(glyphs(line), 20))));
      text({b.x + 0.05, b.y + b.h / 2 + size * 0.35}, line, theme_.primary, size, Anchor::Start, false, false);
      if (!c.anchor) continue;
      if (auto target = anchor_box(*c.anchor)) {
        rect(*target, "", theme_.primary, 0.05, "comment:" + c.id, true);
      }
    }
  }

  void captions(const Box& band) {
    std::string caption = frame_.caption;
    for (const auto& extra : config_.captions) {
      caption += caption.empty() ? extra : "  |  " + extra;
    }
    caption = clip(caption, 110);
    const double size = std::min(band.h * 0.5, band.w / (0.55 * static_cast<double>(std::max<std::size_t>(glyphs(caption), 40))));
    text({band.x + band.w / 2, band.y + band.h / 2 + size * 0.35}, caption, theme_.text, size, Anchor::Middle, false,
         false);
  }

  const Frame& frame_;
  const FrameSet& set_;
  const rsl::RenderConfig& config_;
  const rsl::ResolvedTheme& theme_;
  Scene scene_;
};

}  // namespace

std::vector<std::string> Scene::colors() const {
  std::set<std::string> out;
  for (const auto& p : prims) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, RectPrim>) {
            if (!x.fill.empty()) out.insert(x.fill);
            if (!x.stroke.empty()) out.insert(x.stroke);
          } else {
            out.insert(x.color);
          }
        },
        p);
  }
  return {out.begin(), out.end()};
}

Scene build_scene(const FrameSet& frames, std::size_t index, const rsl::RenderConfig& config) {
  return Builder(frames, index, config).run();
}

std::array<Point, 3> arrow_head(const PathPrim& p) {
  const Point from = p.curved ? p.control : p.start;
  double dx = p.end.x - from.x;
  double dy = p.end.y - from.y;
  const double len = std::hypot(dx, dy);
  if (len > 0) {
    dx /= len;
    dy /= len;
  }
  const double size = std::max(0.08, p.width * 3.5);
  const Point base{p.end.x - dx * size, p.end.y - dy * size};
  return {p.end, Point{base.x - dy * size * 0.5, base.y + dx * size * 0.5},
          Point{base.x + dy * size * 0.5, base.y - dx * size * 0.5}};
}

std::string num(double v) {
  if (std::abs(v) < 5e-5) v = 0;  // no "-0.0000"
  return fmt::format("{:.4f}", v);
}

}  // namespace vta::backends::detail
