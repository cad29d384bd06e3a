#include <fmt/format.h>

#include "scene.hpp"

namespace vta::backends {

using namespace detail;
using layout::Point;

namespace {

constexpr double kPtPerCm = 28.4527559;

std::string tex_escape(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.substr(i).starts_with(kInfinityNull)) {
      out += "$\\infty$";
      i += kInfinityNull.size() - 1;
      continue;
    }
    if (s.substr(i).starts_with(kArrayNull)) {
      out += "$\\cdot$";
      i += kArrayNull.size() - 1;
      continue;
    }
    switch (const char c = s[i]) {
      case '\\': out += "\\textbackslash{}"; break;
      case '{': case '}': case '$': case '&': case '%': case '#': case '_':
        out += '\\';
        out += c;
        break;
      case '^': out += "\\^{}"; break;
      case '~': out += "\\textasciitilde{}"; break;
      case '<': out += "\\textless{}"; break;
      case '>': out += "\\textgreater{}"; break;
      case '\n': case '\r': case '\t': out += ' '; break;
      default: out += c;
    }
  }
  return out;
}

/// "#3498DB" -> "vta3498DB"
std::string color_name(std::string_view hex) {
  std::string out = "vta";
  for (char c : hex.substr(1)) out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string pt(const Point& p) { return fmt::format("({},{})", num(p.x), num(p.y)); }

void emit(std::string& out, const RectPrim& r) {
  if (!r.tag.empty()) out += "% " + r.tag + "\n";
  const std::string corners = fmt::format("{} rectangle {}", pt({r.box.x, r.box.y}), pt({r.box.right(), r.box.bottom()}));
  std::string opts;
  if (!r.fill.empty()) opts += "fill=" + color_name(r.fill);
  if (!r.stroke.empty()) {
    if (!opts.empty()) opts += ", ";
    opts += fmt::format("draw={}, line width={}cm", color_name(r.stroke), num(r.stroke_width));
    if (r.dashed) opts += ", dashed";
  }
  if (opts.empty()) return;
  out += fmt::format("\\path[{}] {};\n", opts, corners);
}

void emit(std::string& out, const TextPrim& t) {
  std::string font = fmt::format("\\fontsize{{{}}}{{{}}}\\selectfont", num(t.size * kPtPerCm), num(t.size * kPtPerCm * 1.2));
  if (t.mono) font += "\\ttfamily";
  if (t.bold) font += "\\bfseries";
  out += fmt::format("\\node[anchor={}, inner sep=0, text={}, font={}] at {} {{{}}};\n",
                     t.anchor == Anchor::Middle ? "base" : (t.anchor == Anchor::End ? "base east" : "base west"), color_name(t.color), font, pt(t.at),
                     tex_escape(t.text));
}

void emit(std::string& out, const PathPrim& p) {
  std::string opts = fmt::format("draw={}, line width={}cm", color_name(p.color), num(p.width));
  if (p.dashed) opts += ", dashed";
  if (p.curved) {
    // quadratic control point raised to the cubic form TikZ expects
    const Point c1{p.start.x + 2.0 / 3 * (p.control.x - p.start.x), p.start.y + 2.0 / 3 * (p.control.y - p.start.y)};
    const Point c2{p.end.x + 2.0 / 3 * (p.control.x - p.end.x), p.end.y + 2.0 / 3 * (p.control.y - p.end.y)};
    out += fmt::format("\\path[{}] {} .. controls {} and {} .. {};\n", opts, pt(p.start), pt(c1), pt(c2), pt(p.end));
  } else {
    out += fmt::format("\\path[{}] {} -- {};\n", opts, pt(p.start), pt(p.end));
  }
  if (p.arrow) {
    const auto h = arrow_head(p);
    out += fmt::format("\\fill[{}] {} -- {} -- {} -- cycle;\n", color_name(p.color), pt(h[0]), pt(h[1]), pt(h[2]));
  }
}

}  // namespace

std::string tikz_frame(const FrameSet& frames, std::size_t index, const rsl::RenderConfig& config) {
  const Scene scene = build_scene(frames, index, config);
  std::string out;
  out += fmt::format("% frame {} of {}\n", index, frames.frames.size());
  out +=
      "\\documentclass[tikz,border=0pt]{standalone}\n"
      "\\usepackage[T1]{fontenc}\n"
      "\\usepackage{lmodern}\n"
      "\\begin{document}\n"
      "\\begin{tikzpicture}[x=1cm,y=-1cm]\n";
  for (const auto& c : scene.colors()) {
    out += fmt::format("\\definecolor{{{}}}{{HTML}}{{{}}}\n", color_name(c), color_name(c).substr(3));
  }
  for (const auto& prim : scene.prims) {
    std::visit([&](const auto& p) { emit(out, p); }, prim);
  }
  out +=
      "\\end{tikzpicture}\n"
      "\\end{document}\n";
  return out;
}

Bundle emit_tikz(const FrameSet& frames, const rsl::RenderConfig& config, const fs::path& out_dir) {
  if (frames.frames.empty()) throw std::invalid_argument("emit_tikz: empty frame set");
  BundleWriter writer(out_dir);
  std::string index =
      "\\documentclass{article}\n"
      "\\usepackage[T1]{fontenc}\n"
      "\\usepackage{lmodern}\n"
      "\\usepackage{standalone}\n"
      "\\usepackage{tikz}\n"
      "\\begin{document}\n";
  for (std::size_t i = 0; i < frames.frames.size(); ++i) {
    const auto name = fmt::format("frame_{:03d}.tex", i);
    writer.write(name, tikz_frame(frames, i, config));
    index += fmt::format("\\input{{{}}}\n", name);
    if (i + 1 < frames.frames.size()) index += "\\clearpage\n";
  }
  index += "\\end{document}\n";
  writer.write("index.tex", index);
  writer.write("trace.json", frames.trace_json);
  writer.write("rsl.json", frames.rsl_json);
  return writer.finish();
}

}  // namespace vta::backends
