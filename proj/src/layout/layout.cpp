#include "vta/layout/layout.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include <fmt/format.h>

namespace vta::layout {

using namespace vta::core;
using rsl::LayoutType;
using rsl::RenderConfig;

namespace {

constexpr double kFill = 0.9;         // box side as a fraction of its slot
constexpr double kFitInset = 1e-6;    // keeps fitted boxes strictly inside the panel
constexpr int kForceIterations = 300;
constexpr double kGravity = 1.0;  // pull toward the origin; keeps isolated nodes near the rest
constexpr std::uint32_t kForceSeed = 0x5EEDu;
constexpr int kSweepPasses = 200;

constexpr double kLineHeight = 0.35;
constexpr double kLineGap = 0.05;
constexpr double kChipW = 0.7;
constexpr double kChipH = 0.4;
constexpr double kChipGap = 0.1;
constexpr double kSectionGap = 0.2;

json::Diagnostic warning(std::string_view code, std::string message) {
  return json::Diagnostic{json::Severity::Warning, std::string(code), "", std::move(message), std::nullopt};
}

std::string cell_id(std::int64_t r, std::int64_t c) { return fmt::format("{},{}", r, c); }

// ---------------------------------------------------------------------------
// Graph-like views share node/edge extraction.

struct Topology {
  std::vector<std::string> ids;  // node order
  std::vector<std::pair<std::string, std::string>> links;
  std::vector<bool> directed;
};

Topology topology(const GraphView& g) {
  Topology t;
  for (const auto& n : g.nodes) t.ids.push_back(n.id);
  for (const auto& e : g.edges) {
    t.links.emplace_back(e.from, e.to);
    t.directed.push_back(e.directed);
  }
  return t;
}

Topology topology(const TreeView& tree) {
  Topology t;
  for (const auto& n : tree.nodes) t.ids.push_back(n.id);
  for (const auto& n : tree.nodes) {
    for (const auto& c : n.children) {
      if (!c) continue;
      t.links.emplace_back(n.id, *c);
      t.directed.push_back(true);
    }
  }
  return t;
}

double pitch_of(const RenderConfig& c) { return std::max(c.node_spacing, c.cell_size); }

void square(Content& out, const std::string& id, double cx, double cy, double side) {
  out.elements[id] = Box{cx - side / 2, cy - side / 2, side, side};
}

// ---------------------------------------------------------------------------
// Engines. Each one lays out in content units with an arbitrary origin.

Content horizontal_array(const ArrayView& a, const RenderConfig& c) {
  Content out;
  const double pitch = pitch_of(c);
  const double side = kFill * c.cell_size;
  for (std::size_t i = 0; i < a.elements.size(); ++i) {
    out.elements[std::to_string(i)] = Box{static_cast<double>(i) * pitch, 0, side, side};
  }
  std::map<std::int64_t, int> stacked;
  for (const auto& [name, index] : a.pointers) {
    if (!index) continue;
    const int k = stacked[*index]++;
    out.decorations["pointer:" + name] =
        Box{static_cast<double>(*index) * pitch, side + 0.15 + k * 0.45, side, 0.4};
  }
  return out;
}

Content grid_of(const std::vector<std::string>& ids, const RenderConfig& c) {
  Content out;
  const double pitch = pitch_of(c);
  const double side = kFill * c.cell_size;
  const auto n = ids.size();
  const auto cols = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n)))));
  for (std::size_t i = 0; i < n; ++i) {
    out.elements[ids[i]] =
        Box{static_cast<double>(i % cols) * pitch, static_cast<double>(i / cols) * pitch, side, side};
  }
  return out;
}

Content table_cells(const TableView& t, const RenderConfig& c, bool labels) {
  Content out;
  const double pitch = c.cell_size;
  const double side = kFill * pitch;
  for (std::int64_t r = 0; r < t.rows; ++r) {
    for (std::int64_t k = 0; k < t.cols; ++k) {
      out.elements[cell_id(r, k)] = Box{static_cast<double>(k) * pitch, static_cast<double>(r) * pitch, side, side};
    }
  }
  if (labels) {
    for (std::size_t k = 0; k < t.col_labels.size(); ++k) {
      out.decorations[fmt::format("col_label:{}", k)] = Box{static_cast<double>(k) * pitch, -pitch, side, side};
    }
    for (std::size_t r = 0; r < t.row_labels.size(); ++r) {
      out.decorations[fmt::format("row_label:{}", r)] = Box{-pitch, static_cast<double>(r) * pitch, side, side};
    }
  }
  return out;
}

Content hashtable_rows(const HashtableView& h, const RenderConfig& c) {
  Content out;
  const double pitch = pitch_of(c);
  const double row = c.cell_size;
  const double side = kFill * c.cell_size;
  for (std::size_t b = 0; b < h.buckets.size(); ++b) {
    const double y = static_cast<double>(b) * row;
    out.decorations[fmt::format("bucket:{}", b)] = Box{0, y, side, side};
    for (std::size_t e = 0; e < h.buckets[b].size(); ++e) {
      out.elements[key_text(h.buckets[b][e].key)] = Box{static_cast<double>(e + 1) * pitch, y, side, side};
    }
  }
  return out;
}

Content grid_layout(const VisualState& s, const RenderConfig& c) {
  return std::visit(
      [&](const auto& v) -> Content {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, ArrayView>) {
          std::vector<std::string> ids;
          for (std::size_t i = 0; i < v.elements.size(); ++i) ids.push_back(std::to_string(i));
          return grid_of(ids, c);
        } else if constexpr (std::is_same_v<V, GraphView> || std::is_same_v<V, TreeView>) {
          return grid_of(topology(v).ids, c);
        } else if constexpr (std::is_same_v<V, HashtableView>) {
          return hashtable_rows(v, c);
        } else {
          return table_cells(v, c, false);
        }
      },
      s.main);
}

/// In-order ranks: the first ceil(k/2) child slots precede the node.
void in_order(const TreeView& t, const std::string& id, std::size_t depth, std::set<std::string>& seen,
              std::vector<std::pair<std::string, std::size_t>>& out) {
  if (!seen.insert(id).second) return;
  const auto* node = t.find(id);
  if (!node) return;
  const auto k = node->children.size();
  const auto split = (k + 1) / 2;
  for (std::size_t i = 0; i < split; ++i) {
    if (node->children[i]) in_order(t, *node->children[i], depth + 1, seen, out);
  }
  out.emplace_back(id, depth);
  for (std::size_t i = split; i < k; ++i) {
    if (node->children[i]) in_order(t, *node->children[i], depth + 1, seen, out);
  }
}

Content tree_hierarchical(const TreeView& t, const RenderConfig& c) {
  Content out;
  const double pitch = pitch_of(c);
  const double gap = c.cell_size * 1.2;
  const double side = kFill * c.cell_size;
  std::vector<std::pair<std::string, std::size_t>> order;
  std::set<std::string> seen;
  for (const auto& root : t.roots()) in_order(t, root, 0, seen, order);
  for (const auto& n : t.nodes) {
    if (!seen.contains(n.id)) order.emplace_back(n.id, 0);  // unreachable: only in broken states
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    square(out, order[i].first, static_cast<double>(i) * pitch, static_cast<double>(order[i].second) * gap, side);
  }
  return out;
}

/// BFS layering from the first source; remaining components start new
/// searches in node order. Neighbours are visited in id order.
Content graph_hierarchical(const Topology& topo, const RenderConfig& c) {
  Content out;
  const double pitch = pitch_of(c);
  const double side = kFill * c.cell_size;
  std::map<std::string, std::vector<std::string>> adj;
  std::set<std::string> has_incoming;
  for (std::size_t i = 0; i < topo.links.size(); ++i) {
    const auto& [a, b] = topo.links[i];
    adj[a].push_back(b);
    if (topo.directed[i]) {
      has_incoming.insert(b);
    } else {
      adj[b].push_back(a);
    }
  }
  for (auto& [_, v] : adj) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  std::set<std::string> known(topo.ids.begin(), topo.ids.end());
  std::vector<std::string> starts;
  for (const auto& id : topo.ids) {
    if (!has_incoming.contains(id)) starts.push_back(id);
  }
  for (const auto& id : topo.ids) starts.push_back(id);

  std::map<std::string, std::size_t> depth;
  std::vector<std::vector<std::string>> layers;
  std::size_t base = 0;
  for (const auto& s : starts) {
    if (depth.contains(s)) continue;
    std::deque<std::string> queue{s};
    depth[s] = base;
    std::size_t deepest = base;
    while (!queue.empty()) {
      auto u = queue.front();
      queue.pop_front();
      const auto d = depth[u];
      deepest = std::max(deepest, d);
      if (layers.size() <= d) layers.resize(d + 1);
      layers[d].push_back(u);
      for (const auto& v : adj[u]) {
        if (!known.contains(v) || depth.contains(v)) continue;
        depth[v] = d + 1;
        queue.push_back(v);
      }
    }
    base = deepest + 1;  // next component gets its own rows
  }
  for (std::size_t d = 0; d < layers.size(); ++d) {
    const double offset = -static_cast<double>(layers[d].size() - 1) * pitch / 2;
    for (std::size_t i = 0; i < layers[d].size(); ++i) {
      square(out, layers[d][i], offset + static_cast<double>(i) * pitch, static_cast<double>(d) * pitch, side);
    }
  }
  return out;
}

double circle_radius(std::size_t n, double spacing) {
  if (n < 2) return 0;
  return spacing / (2 * std::sin(std::numbers::pi / static_cast<double>(n)));
}

Point circle_point(std::size_t i, std::size_t n, double r) {
  const double a = -std::numbers::pi / 2 + 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
  return {r * std::cos(a), r * std::sin(a)};
}

double circular_side(const RenderConfig& c) {
  return std::min(kFill * c.cell_size, 0.95 * c.node_spacing / std::numbers::sqrt2);
}

Content circular(const Topology& topo, const RenderConfig& c) {
  Content out;
  const auto n = topo.ids.size();
  const double r = circle_radius(n, c.node_spacing);
  const double side = circular_side(c);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = circle_point(i, n, r);
    square(out, topo.ids[i], p.x, p.y, side);
  }
  return out;
}

bool boxes_overlap(Point a, Point b, double side) {
  return std::abs(a.x - b.x) < side && std::abs(a.y - b.y) < side;
}

/// Fruchterman-Reingold from a circle (or from pinned previous positions),
/// then a deterministic sweep that pushes overlapping pairs apart.
Content force_directed(const Topology& topo, const RenderConfig& c, const std::map<std::string, Point>& pinned,
                       std::vector<json::Diagnostic>& warnings) {
  const auto n = topo.ids.size();
  const double k = c.node_spacing;
  const double side = std::min(kFill * c.cell_size, 0.6 * k);
  std::vector<Point> pos(n);
  std::vector<bool> fixed(n, false);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[topo.ids[i]] = i;

  std::mt19937 rng(kForceSeed);
  auto jitter = [&] { return (static_cast<double>(rng()) / 4294967296.0 - 0.5) * 0.02 * k; };
  const double r = std::max(k, circle_radius(n, k));
  for (std::size_t i = 0; i < n; ++i) {
    auto base = circle_point(i, std::max<std::size_t>(n, 1), n > 1 ? r : 0);
    pos[i] = {base.x + jitter(), base.y + jitter()};
    if (auto it = pinned.find(topo.ids[i]); it != pinned.end()) {
      pos[i] = it->second;
      fixed[i] = true;
    }
  }
  // Fresh nodes in a warm start begin next to their placed neighbours.
  if (!pinned.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (fixed[i]) continue;
      Point sum{0, 0};
      int count = 0;
      for (const auto& [a, b] : topo.links) {
        const std::string* other = a == topo.ids[i] ? &b : (b == topo.ids[i] ? &a : nullptr);
        if (!other) continue;
        auto it = index.find(*other);
        if (it != index.end() && fixed[it->second]) {
          sum.x += pos[it->second].x;
          sum.y += pos[it->second].y;
          ++count;
        }
      }
      if (count > 0) pos[i] = {sum.x / count + k * 0.5 + jitter(), sum.y / count + k * 0.5 + jitter()};
    }
  }

  const bool all_fixed = std::all_of(fixed.begin(), fixed.end(), [](bool f) { return f; });
  for (int it = 0; it < kForceIterations && !all_fixed && n > 1; ++it) {
    const double temp = k * (1.0 - static_cast<double>(it) / kForceIterations);
    std::vector<Point> disp(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dx = pos[i].x - pos[j].x;
        const double dy = pos[i].y - pos[j].y;
        const double dist = std::max(std::hypot(dx, dy), 1e-6);
        const double f = k * k / dist;
        disp[i].x += dx / dist * f;
        disp[i].y += dy / dist * f;
        disp[j].x -= dx / dist * f;
        disp[j].y -= dy / dist * f;
      }
    }
    for (const auto& [a, b] : topo.links) {
      auto ia = index.find(a);
      auto ib = index.find(b);
      if (ia == index.end() || ib == index.end() || ia->second == ib->second) continue;
      const auto u = ia->second;
      const auto v = ib->second;
      const double dx = pos[u].x - pos[v].x;
      const double dy = pos[u].y - pos[v].y;
      const double dist = std::max(std::hypot(dx, dy), 1e-6);
      const double f = dist * dist / k;
      disp[u].x -= dx / dist * f;
      disp[u].y -= dy / dist * f;
      disp[v].x += dx / dist * f;
      disp[v].y += dy / dist * f;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (fixed[i]) continue;
      // weak gravity keeps disconnected components together
      disp[i].x -= pos[i].x * kGravity;
      disp[i].y -= pos[i].y * kGravity;
      const double len = std::hypot(disp[i].x, disp[i].y);
      if (len < 1e-12) continue;
      const double step = std::min(len, temp);
      pos[i].x += disp[i].x / len * step;
      pos[i].y += disp[i].y / len * step;
    }
  }

  // Repulsion alone leaves sparse graphs far wider than the spacing asks
  // for; pull a fresh layout in until the median nearest-neighbour gap is k.
  // Pairs pushed too close are separated by the sweep below.
  if (pinned.empty() && n > 1) {
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) nearest[i] = std::min(nearest[i], std::hypot(pos[i].x - pos[j].x, pos[i].y - pos[j].y));
      }
    }
    std::nth_element(nearest.begin(), nearest.begin() + static_cast<std::ptrdiff_t>(n / 2), nearest.end());
    const double median = nearest[n / 2];
    if (median > k) {
      const double f = k / median;
      for (auto& p : pos) p = {p.x * f, p.y * f};
    }
  }

  // Overlap resolution, pairs in id order.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return topo.ids[a] < topo.ids[b]; });
  const double sep = side * 1.2;
  bool clean = false;
  for (int pass = 0; pass < kSweepPasses && !clean; ++pass) {
    clean = true;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = x + 1; y < n; ++y) {
        const auto i = order[x];
        const auto j = order[y];
        if (!boxes_overlap(pos[i], pos[j], side)) continue;
        clean = false;
        double dx = pos[j].x - pos[i].x;
        double dy = pos[j].y - pos[i].y;
        const bool along_x = std::abs(dx) >= std::abs(dy);
        double d = along_x ? dx : dy;
        if (d == 0) d = 1;  // coincident: j goes right/down of i
        const double need = sep - std::abs(along_x ? dx : dy);
        const double sign = d > 0 ? 1.0 : -1.0;
        const bool move_i = !fixed[i];
        const bool move_j = !fixed[j] || fixed[i];
        const double share_i = move_i && move_j ? need / 2 : (move_i ? need : 0);
        const double share_j = need - share_i;
        if (along_x) {
          pos[i].x -= sign * share_i;
          pos[j].x += sign * share_j;
        } else {
          pos[i].y -= sign * share_i;
          pos[j].y += sign * share_j;
        }
      }
    }
  }

  Content out;
  if (!clean) {
    warnings.push_back(warning(kOverlapFallback, "force-directed overlap resolution did not converge; grid used"));
    return grid_of(topo.ids, c);
  }
  for (std::size_t i = 0; i < n; ++i) square(out, topo.ids[i], pos[i].x, pos[i].y, side);
  return out;
}

// ---------------------------------------------------------------------------

struct Extent {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool empty = true;
  void add(const Box& b) {
    if (empty) {
      x0 = b.x;
      y0 = b.y;
      x1 = b.right();
      y1 = b.bottom();
      empty = false;
      return;
    }
    x0 = std::min(x0, b.x);
    y0 = std::min(y0, b.y);
    x1 = std::max(x1, b.right());
    y1 = std::max(y1, b.bottom());
  }
};

Extent extent_of(const Content& c, bool with_decorations) {
  Extent e;
  for (const auto& [_, b] : c.elements) e.add(b);
  if (with_decorations) {
    for (const auto& [_, b] : c.decorations) e.add(b);
  }
  return e;
}

Transform centred(const Extent& e, const Box& panel, double scale) {
  const double cx = (e.x0 + e.x1) / 2;
  const double cy = (e.y0 + e.y1) / 2;
  const auto pc = panel.center();
  return Transform{scale, pc.x - cx * scale, pc.y - cy * scale};
}

bool fits(const Content& c, const Transform& t, const Box& panel) {
  for (const auto* m : {&c.elements, &c.decorations}) {
    for (const auto& [_, b] : *m) {
      if (!inside(t.apply(b), panel)) return false;
    }
  }
  return true;
}

Content main_content(const VisualState& s, const RenderConfig& c, LayoutType engine, const Placement* previous,
                     std::vector<json::Diagnostic>& warnings) {
  const auto sort = sort_of(s.main);
  switch (engine) {
    case LayoutType::HorizontalArray:
      return horizontal_array(std::get<ArrayView>(s.main), c);
    case LayoutType::Matrix:
      return table_cells(std::get<TableView>(s.main), c, true);
    case LayoutType::Grid:
      return grid_layout(s, c);
    default:
      break;
  }
  const Topology topo = sort == ViewSort::Graph ? topology(std::get<GraphView>(s.main))
                                                : topology(std::get<TreeView>(s.main));
  if (engine == LayoutType::Hierarchical) {
    if (sort == ViewSort::Tree) return tree_hierarchical(std::get<TreeView>(s.main), c);
    return graph_hierarchical(topo, c);
  }
  if (engine == LayoutType::Circular) return circular(topo, c);

  std::map<std::string, Point> pinned;
  if (previous && previous->engine == LayoutType::ForceDirected && previous->transform.scale > 0) {
    const auto& t = previous->transform;
    for (const auto& id : topo.ids) {
      if (auto it = previous->elements.find(id); it != previous->elements.end()) {
        const auto p = it->second.center();
        pinned[id] = {(p.x - t.dx) / t.scale, (p.y - t.dy) / t.scale};
      }
    }
  }
  return force_directed(topo, c, pinned, warnings);
}

Point border_point(const Box& b, Point toward) {
  const auto c = b.center();
  const double dx = toward.x - c.x;
  const double dy = toward.y - c.y;
  if (dx == 0 && dy == 0) return c;
  const double tx = dx == 0 ? std::numeric_limits<double>::infinity() : (b.w / 2) / std::abs(dx);
  const double ty = dy == 0 ? std::numeric_limits<double>::infinity() : (b.h / 2) / std::abs(dy);
  const double t = std::min(tx, ty);
  return {c.x + dx * t, c.y + dy * t};
}

std::vector<EdgePath> route_edges(const VisualState& s, const Placement& p, double curve) {
  std::vector<EdgePath> out;
  auto route = [&](std::size_t index, const std::string& from, const std::string& to, bool directed, bool bend) {
    auto a = p.elements.find(from);
    auto b = p.elements.find(to);
    if (a == p.elements.end() || b == p.elements.end()) return;
    EdgePath e;
    e.index = index;
    e.from = from;
    e.to = to;
    e.directed = directed;
    const auto ca = a->second.center();
    const auto cb = b->second.center();
    Point mid{(ca.x + cb.x) / 2, (ca.y + cb.y) / 2};
    if (bend && curve != 0 && from != to) {
      const double dx = cb.x - ca.x;
      const double dy = cb.y - ca.y;
      const double len = std::hypot(dx, dy);
      // perpendicular to the left of from->to, so a reverse pair bends apart
      mid = {mid.x - dy * curve * 0.5, mid.y + dx * curve * 0.5};
      e.curved = len > 0;
    }
    e.control = mid;
    e.start = border_point(a->second, e.curved ? mid : cb);
    e.end = border_point(b->second, e.curved ? mid : ca);
    out.push_back(e);
  };
  if (const auto* g = std::get_if<GraphView>(&s.main)) {
    for (std::size_t i = 0; i < g->edges.size(); ++i) {
      const auto& e = g->edges[i];
      bool twin = false;
      for (std::size_t j = 0; j < g->edges.size(); ++j) {
        if (j == i) continue;
        const auto& o = g->edges[j];
        if ((o.from == e.from && o.to == e.to) || (o.from == e.to && o.to == e.from)) twin = true;
      }
      route(i, e.from, e.to, e.directed, twin);
    }
  } else if (const auto* t = std::get_if<TreeView>(&s.main)) {
    std::size_t index = 0;
    for (const auto& n : t->nodes) {
      for (const auto& c : n.children) {
        if (c) route(index++, n.id, *c, true, false);
      }
    }
  }
  return out;
}

void place_left_panel(const VisualState& s, Placement& p) {
  const auto& panel = p.left_panel;
  const double w = panel.w;
  double y = 0;
  for (std::size_t i = 0; i < s.pseudocode.size(); ++i) {
    p.pseudocode.push_back(Box{0, y, w, kLineHeight});
    y += kLineHeight + kLineGap;
  }
  const auto per_row = std::max<std::size_t>(1, static_cast<std::size_t>((w + kChipGap) / (kChipW + kChipGap)));
  for (const auto& aux : s.auxiliary_views) {
    if (y > 0) y += kSectionGap;
    AuxPlacement a;
    a.name = aux.name;
    a.header = Box{0, y, w, kLineHeight};
    y += kLineHeight + kLineGap;
    for (std::size_t i = 0; i < aux.entries.size(); ++i) {
      const auto col = i % per_row;
      const auto row = i / per_row;
      a.entries.push_back(Box{static_cast<double>(col) * (kChipW + kChipGap),
                              y + static_cast<double>(row) * (kChipH + kChipGap), kChipW, kChipH});
    }
    if (!aux.entries.empty()) {
      y += static_cast<double>((aux.entries.size() + per_row - 1) / per_row) * (kChipH + kChipGap);
    }
    p.aux.push_back(std::move(a));
  }
  for (const auto& c : s.comments) {
    if (y > 0) y += kLineGap;
    p.comments.emplace_back(c.id, Box{0, y, w, kLineHeight});
    y += kLineHeight;
  }
  double scale = 1.0;
  if (y > panel.h) {
    scale = (panel.h - kFitInset) / y;
    p.warnings.push_back(warning(kDensityRescale, fmt::format("left panel content scaled by {:.3f}", scale)));
  }
  p.left_scale = scale;
  const Transform t{scale, panel.x, panel.y};
  for (auto& b : p.pseudocode) b = t.apply(b);
  for (auto& a : p.aux) {
    a.header = t.apply(a.header);
    for (auto& b : a.entries) b = t.apply(b);
  }
  for (auto& [_, b] : p.comments) b = t.apply(b);
}

}  // namespace

double overlap_area(const Box& a, const Box& b) {
  const double w = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double h = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  return w > 0 && h > 0 ? w * h : 0.0;
}

bool inside(const Box& inner, const Box& outer) {
  return inner.x >= outer.x && inner.y >= outer.y && inner.right() <= outer.right() &&
         inner.bottom() <= outer.bottom();
}

Box Canvas::left_panel() const {
  const double inner_w = width - 2 * margin;
  return Box{margin, margin, inner_w * kLeftShare, height - 2 * margin - kCaptionBand};
}

Box Canvas::main_panel() const {
  const auto left = left_panel();
  const double x = left.right() + kPanelGutter;
  return Box{x, margin, width - margin - x, left.h};
}

Box Canvas::caption() const {
  return Box{margin, height - margin - kCaptionBand, width - 2 * margin, kCaptionBand};
}

FitResult shrink_to_fit(const Content& content, const Box& panel, double floor) {
  FitResult r;
  const Box target{panel.x + kFitInset, panel.y + kFitInset, panel.w - 2 * kFitInset, panel.h - 2 * kFitInset};
  auto scale_for = [&](const Extent& e) {
    const double w = e.x1 - e.x0;
    const double h = e.y1 - e.y0;
    double s = 1.0;
    if (w > target.w) s = std::min(s, target.w / w);
    if (h > target.h) s = std::min(s, target.h / h);
    return s;
  };
  const auto full = extent_of(content, true);
  if (full.empty) {
    r.transform = Transform{1.0, panel.center().x, panel.center().y};
    return r;
  }
  double s = scale_for(full);
  if (s >= floor) {
    r.transform = centred(full, target, s);
    if (s < 1.0) {
      r.warnings.push_back(warning(kDensityRescale, fmt::format("main view scaled by {:.3f} to fit the panel", s)));
    }
    return r;
  }
  const auto bare = extent_of(content, false);
  s = scale_for(bare);
  if (s < floor) {
    throw CapacityExceeded(fmt::format(
        "content needs scale {:.3f}, below the legibility floor {} even without labels", s, floor));
  }
  r.abbreviated = true;
  r.transform = centred(bare, target, s);
  r.warnings.push_back(
      warning(kDensityRescale, fmt::format("main view scaled by {:.3f} with labels abbreviated", s)));
  return r;
}

Placement compute_layout(const VisualState& state, const RenderConfig& config, const Placement* previous) {
  Placement p;
  const auto canvas = Canvas::from(config.canvas);
  p.main_panel = canvas.main_panel();
  p.left_panel = canvas.left_panel();
  p.caption = canvas.caption();

  const auto sort = sort_of(state.main);
  p.engine = config.layout;
  if (!rsl::layout_supports(p.engine, sort)) {
    const auto fallback = rsl::default_layout(sort);
    p.warnings.push_back(warning(kLayoutFallback, fmt::format("layout '{}' cannot place a {} view; using '{}'",
                                                              rsl::to_string(p.engine), to_string(sort),
                                                              rsl::to_string(fallback))));
    p.engine = fallback;
  }

  auto content = main_content(state, config, p.engine, previous, p.warnings);

  // A warm start keeps the previous transform while everything still fits.
  bool reused = false;
  if (p.engine == LayoutType::ForceDirected && previous && previous->engine == p.engine &&
      !previous->abbreviated && fits(content, previous->transform, p.main_panel)) {
    p.transform = previous->transform;
    reused = true;
  }
  if (!reused) {
    auto fit = shrink_to_fit(content, p.main_panel);
    p.transform = fit.transform;
    p.abbreviated = fit.abbreviated;
    p.warnings.insert(p.warnings.end(), fit.warnings.begin(), fit.warnings.end());
  }
  for (const auto& [id, b] : content.elements) p.elements[id] = p.transform.apply(b);
  if (!p.abbreviated) {
    for (const auto& [id, b] : content.decorations) p.decorations[id] = p.transform.apply(b);
  }
  p.edges = route_edges(state, p, config.edge_curve);
  place_left_panel(state, p);
  return p;
}

std::vector<Placement> layout_frames(std::span<const VisualState> states, const RenderConfig& config) {
  std::vector<Placement> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(compute_layout(s, config, out.empty() ? nullptr : &out.back()));
  return out;
}

DriftReport layout_stability(const Placement& prev, const Placement& next) {
  DriftReport r;
  for (const auto& [id, b] : next.elements) {
    auto it = prev.elements.find(id);
    if (it == prev.elements.end()) continue;
    ++r.persisting;
    const auto a = it->second.center();
    const auto c = b.center();
    const double d = std::hypot(c.x - a.x, c.y - a.y);
    if (d > r.max_displacement) {
      r.max_displacement = d;
      r.worst_id = id;
    }
  }
  return r;
}

std::vector<std::pair<std::string, std::string>> overlapping_pairs(const Placement& p) {
  std::vector<std::pair<std::string, Box>> main;
  for (const auto& [id, b] : p.elements) main.emplace_back(id, b);
  for (const auto& [id, b] : p.decorations) main.emplace_back(id, b);
  std::vector<std::pair<std::string, Box>> left;
  for (std::size_t i = 0; i < p.pseudocode.size(); ++i) left.emplace_back(fmt::format("pseudocode:{}", i), p.pseudocode[i]);
  for (const auto& a : p.aux) {
    left.emplace_back("aux:" + a.name, a.header);
    for (std::size_t i = 0; i < a.entries.size(); ++i) left.emplace_back(fmt::format("aux:{}:{}", a.name, i), a.entries[i]);
  }
  for (const auto& [id, b] : p.comments) left.emplace_back("comment:" + id, b);

  std::vector<std::pair<std::string, std::string>> out;
  for (const auto* set : {&main, &left}) {
    for (std::size_t i = 0; i < set->size(); ++i) {
      for (std::size_t j = i + 1; j < set->size(); ++j) {
        if (overlap_area((*set)[i].second, (*set)[j].second) > 0) out.emplace_back((*set)[i].first, (*set)[j].first);
      }
    }
  }
  return out;
}

std::vector<std::string> uncontained(const Placement& p) {
  std::vector<std::string> out;
  for (const auto* m : {&p.elements, &p.decorations}) {
    for (const auto& [id, b] : *m) {
      if (!inside(b, p.main_panel)) out.push_back(id);
    }
  }
  for (std::size_t i = 0; i < p.pseudocode.size(); ++i) {
    if (!inside(p.pseudocode[i], p.left_panel)) out.push_back(fmt::format("pseudocode:{}", i));
  }
  for (const auto& a : p.aux) {
    if (!inside(a.header, p.left_panel)) out.push_back("aux:" + a.name);
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
      if (!inside(a.entries[i], p.left_panel)) out.push_back(fmt::format("aux:{}:{}", a.name, i));
    }
  }
  for (const auto& [id, b] : p.comments) {
    if (!inside(b, p.left_panel)) out.push_back("comment:" + id);
  }
  return out;
}

}  // namespace vta::layout
