#include <cmath>

#include <fmt/format.h>

#include "scene.hpp"

namespace vta::backends {

using namespace detail;

namespace {

constexpr double kPx = 80.0;  // 16x9 units onto 1280x720

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\n': case '\r': case '\t': out += ' '; break;
      default: out += c;
    }
  }
  return out;
}

std::string px(double v) { return num(v * kPx); }

void emit(std::string& out, const RectPrim& r) {
  out += fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="{}")", px(r.box.x), px(r.box.y), px(r.box.w),
                     px(r.box.h), r.fill.empty() ? "none" : r.fill);
  if (!r.stroke.empty()) {
    out += fmt::format(R"( stroke="{}" stroke-width="{}")", r.stroke, px(r.stroke_width));
    if (r.dashed) out += R"( stroke-dasharray="6 4")";
  }
  if (!r.tag.empty()) out += fmt::format(R"( data-tag="{}")", xml_escape(r.tag));
  out += "/>\n";
}

void emit(std::string& out, const TextPrim& t) {
  out += fmt::format(R"(<text x="{}" y="{}" fill="{}" font-size="{}" font-family="{}")", px(t.at.x), px(t.at.y),
                     t.color, px(t.size), t.mono ? "DejaVu Sans Mono, monospace" : "DejaVu Sans, Helvetica, sans-serif");
  if (t.anchor == Anchor::Middle) out += R"( text-anchor="middle")";
  if (t.anchor == Anchor::End) out += R"( text-anchor="end")";
  if (t.bold) out += R"( font-weight="bold")";
  out += fmt::format(">{}</text>\n", xml_escape(t.text));
}

void emit(std::string& out, const PathPrim& p) {
  if (p.curved) {
    out += fmt::format(R"(<path d="M {} {} Q {} {} {} {}")", px(p.start.x), px(p.start.y), px(p.control.x),
                       px(p.control.y), px(p.end.x), px(p.end.y));
  } else {
    out += fmt::format(R"(<path d="M {} {} L {} {}")", px(p.start.x), px(p.start.y), px(p.end.x), px(p.end.y));
  }
  out += fmt::format(R"( fill="none" stroke="{}" stroke-width="{}")", p.color, px(p.width));
  if (p.dashed) out += R"( stroke-dasharray="6 4")";
  out += "/>\n";
  if (p.arrow) {
    const auto h = arrow_head(p);
    out += fmt::format(R"(<polygon points="{},{} {},{} {},{}" fill="{}"/>)", px(h[0].x), px(h[0].y), px(h[1].x),
                       px(h[1].y), px(h[2].x), px(h[2].y), p.color);
    out += "\n";
  }
}

constexpr std::string_view kFlipbookHead = R"(<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>{title}</title>
<style>
body {{ margin: 0; background: {background}; color: {text}; font-family: sans-serif; }}
#stage {{ width: 1280px; height: 720px; margin: 0 auto; }}
#stage img {{ width: 1280px; height: 720px; display: block; }}
#bar {{ text-align: center; padding: 8px; }}
.pulse {{ animation: pulse var(--d) ease-in-out; }}
.glow {{ animation: glow var(--d) ease-in-out; }}
.shake {{ animation: shake var(--d) linear; }}
.fade {{ animation: fade var(--d) ease-in; }}
.morph {{ animation: morph var(--d) ease-in-out; }}
@keyframes pulse {{ 50% {{ filter: brightness(1.3); }} }}
@keyframes glow {{ 50% {{ filter: drop-shadow(0 0 12px var(--e)); }} }}
@keyframes shake {{ 25% {{ filter: hue-rotate(20deg); }} 75% {{ filter: hue-rotate(-20deg); }} }}
@keyframes fade {{ from {{ opacity: 0.4; }} to {{ opacity: 1; }} }}
@keyframes morph {{ from {{ opacity: 0.7; }} to {{ opacity: 1; }} }}
</style>
</head>
<body>
<div id="stage"><img id="frame" alt="frame" src="frame_000.svg"></div>
<div id="bar"><button id="toggle">pause</button> <span id="counter"></span></div>
<script type="application/json" id="vta-flipbook">
)";

// Effects only touch CSS on the frame image; the SVG geometry is never altered.
constexpr std::string_view kFlipbookTail = R"(</script>
<script>
(function () {
  const meta = JSON.parse(document.getElementById("vta-flipbook").textContent);
  const img = document.getElementById("frame");
  const counter = document.getElementById("counter");
  let index = 0;
  let playing = true;
  let timer = null;
  function show(i) {
    index = i;
    const f = meta.frames[i];
    img.src = f.file;
    img.className = "";
    const d = f.directives[0];
    if (d) {
      img.style.setProperty("--d", d.duration + "s");
      img.style.setProperty("--e", d.emphasis || meta.theme.primary);
      void img.offsetWidth;
      img.className = d.variant;
    }
    counter.textContent = (i + 1) + " / " + meta.frames.length + "  " + f.caption;
  }
  function tick() {
    show((index + 1) % meta.frames.length);
    timer = setTimeout(tick, meta.frame_duration * 1000);
  }
  document.getElementById("toggle").onclick = function () {
    playing = !playing;
    this.textContent = playing ? "pause" : "play";
    if (playing) timer = setTimeout(tick, meta.frame_duration * 1000);
    else clearTimeout(timer);
  };
  show(0);
  timer = setTimeout(tick, meta.frame_duration * 1000);
})();
</script>
</body>
</html>
)";

/// Keeps "</script>" out of the embedded JSON.
std::string script_safe(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "\\u003c";
    else out += c;
  }
  return out;
}

}  // namespace

std::string svg_frame(const FrameSet& frames, std::size_t index, const rsl::RenderConfig& config) {
  const Scene scene = build_scene(frames, index, config);
  const double w = config.canvas.width * kPx;
  const double h = config.canvas.height * kPx;
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{1}" viewBox="0 0 {0} {1}">)",
                     std::lround(w), std::lround(h));
  out += "\n";
  for (const auto& prim : scene.prims) {
    std::visit([&](const auto& p) { emit(out, p); }, prim);
  }
  out += "</svg>\n";
  return out;
}

json::ordered_json flipbook_metadata(const FrameSet& frames, const rsl::RenderConfig& config) {
  json::ordered_json meta;
  meta["title"] = frames.title;
  meta["frame_count"] = frames.frames.size();
  meta["transition"] = config.transition;
  meta["pause"] = config.pause;
  meta["frame_duration"] = config.frame_duration();
  meta["total_duration"] = static_cast<double>(frames.frames.size()) * config.frame_duration();
  meta["theme"] = {{"background", config.theme.background}, {"text", config.theme.text},
                   {"primary", config.theme.primary}};
  auto list = json::ordered_json::array();
  for (const auto& f : frames.frames) {
    json::ordered_json entry;
    entry["index"] = f.index;
    entry["file"] = fmt::format("frame_{:03d}.svg", f.index);
    entry["caption"] = f.caption;
    entry["highlight"] = f.state.highlight;
    auto directives = json::ordered_json::array();
    for (const auto& op : f.ops) {
      const auto d = config.directive_for(op);
      if (!d) continue;
      json::ordered_json j;
      j["op"] = std::string(core::to_string(op.code()));
      j["variant"] = std::string(rsl::to_string(d->variant));
      j["duration"] = d->duration;
      if (d->emphasis) j["emphasis"] = *d->emphasis;
      directives.push_back(std::move(j));
    }
    entry["directives"] = std::move(directives);
    list.push_back(std::move(entry));
  }
  meta["frames"] = std::move(list);
  return meta;
}

Bundle emit_svg(const FrameSet& frames, const rsl::RenderConfig& config, const fs::path& out_dir) {
  if (frames.frames.empty()) throw std::invalid_argument("emit_svg: empty frame set");
  BundleWriter writer(out_dir);
  for (std::size_t i = 0; i < frames.frames.size(); ++i) {
    writer.write(fmt::format("frame_{:03d}.svg", i), svg_frame(frames, i, config));
  }
  std::string html = fmt::format(fmt::runtime(kFlipbookHead), fmt::arg("title", xml_escape(frames.title)),
                                 fmt::arg("background", config.theme.background), fmt::arg("text", config.theme.text));
  html += script_safe(flipbook_metadata(frames, config).dump(2, ' ', false));
  html += "\n";
  html += kFlipbookTail;
  writer.write("index.html", html);
  writer.write("trace.json", frames.trace_json);
  writer.write("rsl.json", frames.rsl_json);
  return writer.finish();
}

}  // namespace vta::backends
