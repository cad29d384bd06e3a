#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "vta/trackers/trackers.hpp"

namespace vta::trackers {

using namespace core;

namespace {

// --- shared helpers ----------------------------------------------------------

const std::map<std::string, StyleDef>& style_table() {
  static const std::map<std::string, StyleDef> table = {
      {"idle", {"#2C3E50", "#ECF0F1", "#FFFFFF"}},
      {"current", {"#3498DB", "#FFFFFF", "#FFFFFF"}},
      {"compare", {"#F39C12", "#FFFFFF", "#1A1A1A"}},
      {"sorted", {"#27AE60", "#FFFFFF", "#FFFFFF"}},
      {"found", {"#27AE60", "#FFFFFF", "#FFFFFF"}},
      {"prime", {"#27AE60", "#FFFFFF", "#FFFFFF"}},
      {"composite", {"#7F8C8D", "#BDC3C7", "#1A1A1A"}},
      {"visited", {"#8E44AD", "#FFFFFF", "#FFFFFF"}},
      {"cycle", {"#C0392B", "#FFFFFF", "#FFFFFF"}},
      {"filled", {"#34495E", "#95A5A6", "#FFFFFF"}},
      {"answer", {"#E67E22", "#FFFFFF", "#FFFFFF"}},
      {"collision", {"#E74C3C", "#FFFFFF", "#FFFFFF"}},
      {"edge", {std::nullopt, "#95A5A6", std::nullopt}},
      {"relax", {std::nullopt, "#F1C40F", std::nullopt}},
      {"checked", {std::nullopt, "#5D6D7E", std::nullopt}},
      {"used", {std::nullopt, "#F1C40F", std::nullopt}},
  };
  return table;
}

std::map<std::string, StyleDef> palette(std::initializer_list<std::string_view> keys) {
  std::map<std::string, StyleDef> out;
  out["idle"] = style_table().at("idle");
  for (auto k : keys) out[std::string(k)] = style_table().at(std::string(k));
  return out;
}

double num(const Value& v) { return *as_number(v); }

Value add(const Value& a, const Value& b) {
  if (std::holds_alternative<std::int64_t>(a) && std::holds_alternative<std::int64_t>(b)) {
    return std::get<std::int64_t>(a) + std::get<std::int64_t>(b);
  }
  return num(a) + num(b);
}

std::string show(const Value& v) { return display(v, "null"); }

ordered_json values_json(const std::vector<Value>& vs) {
  auto out = ordered_json::array();
  for (const auto& v : vs) out.push_back(json::encode_value(v));
  return out;
}

std::vector<std::int64_t> one(std::size_t i) { return {static_cast<std::int64_t>(i)}; }

Operation array_style(std::vector<std::int64_t> indices, std::string key) {
  return op::UpdateStyle{std::move(indices), std::move(key)};
}

Operation node_style(std::vector<std::string> ids, std::string key) {
  return op::UpdateNodeStyle{std::move(ids), std::move(key)};
}

Operation append(std::string view, Value value, std::optional<Value> key = std::nullopt) {
  return op::AppendToList{std::move(view), AuxEntry{std::move(key), std::move(value), std::string(kIdleStyle)}};
}

Operation cell_style(std::vector<CellRef> cells, std::string key) {
  return op::HighlightTableCell{std::move(cells), std::move(key)};
}

const AuxView* aux_of(const VisualState& s, std::string_view name) { return s.aux(name); }

ordered_json aux_values(const VisualState& s, std::string_view name) {
  auto out = ordered_json::array();
  if (const auto* a = aux_of(s, name)) {
    for (const auto& e : a->entries) out.push_back(json::encode_value(e.value));
  }
  return out;
}

ordered_json aux_lookup(const VisualState& s, std::string_view name, const Value& key) {
  if (const auto* a = aux_of(s, name)) {
    for (const auto& e : a->entries) {
      if (e.key && *e.key == key) return json::encode_value(e.value);
    }
  }
  return nullptr;
}

void require_numbers(const std::vector<Value>& vs, std::string_view who) {
  for (const auto& v : vs) {
    if (!is_number(v)) throw IncompatibleInput(fmt::format("{} needs numeric array elements", who));
  }
}

// --- bubble_sort --------------------------------------------------------------

const std::vector<std::string> kBubbleCode = {
    "for i = 0 to n - 2",
    "  for j = 0 to n - 2 - i",
    "    compare a[j] and a[j + 1]",
    "    if a[j] > a[j + 1]: swap them",
    "  a[n - 1 - i] is in its final place",
    "a[0] is in its final place",
};

TrackerRun bubble_sort(const TaskSpec& t) {
  require_numbers(t.array, "bubble_sort");
  ArrayView view;
  for (const auto& v : t.array) view.elements.push_back({v});
  Visualizer viz("Bubble Sort", "Sorting", kBubbleCode, view, palette({"compare", "sorted"}));
  std::vector<Value> a = t.array;
  auto snap = [&] { viz.observe({{"values", values_json(a)}}); };
  snap();

  const std::size_t n = a.size();
  std::vector<std::int64_t> lit;
  for (std::size_t i = 0; n >= 2 && i + 1 < n; ++i) {
    for (std::size_t j = 0; j + 1 < n - i; ++j) {
      std::vector<OpGroup> groups;
      if (!lit.empty()) groups.push_back({array_style(lit, "idle")});
      lit = {static_cast<std::int64_t>(j), static_cast<std::int64_t>(j + 1)};
      groups.push_back({array_style(lit, "compare"), op::SetPointer{"j", static_cast<std::int64_t>(j)}});
      viz.step(fmt::format("Compare a[{}] = {} with a[{}] = {}", j, show(a[j]), j + 1, show(a[j + 1])), {3},
               std::move(groups));
      snap();
      if (num(a[j]) > num(a[j + 1])) {
        std::swap(a[j], a[j + 1]);
        const auto x = static_cast<std::int64_t>(j);
        viz.step(fmt::format("Swap: {} > {}", show(a[j + 1]), show(a[j])), 4,
                 {op::MoveElements{{{x, x + 1}, {x + 1, x}}}});
        snap();
      }
    }
    const std::size_t done = n - 1 - i;
    std::vector<OpGroup> groups;
    if (!lit.empty()) groups.push_back({array_style(lit, "idle")});
    lit.clear();
    groups.push_back({array_style(one(done), "sorted")});
    viz.step(fmt::format("a[{}] = {} is in its final place", done, show(a[done])), {5}, std::move(groups));
    snap();
  }
  if (n >= 1) {
    std::vector<Operation> ops{array_style(one(0), "sorted")};
    if (n >= 2) ops.push_back(op::ClearPointer{"j"});
    viz.step(fmt::format("a[0] = {} is in its final place; sorted", show(a[0])), 6, std::move(ops));
    snap();
  }
  return {viz.finish(), viz.take_snapshots()};
}

ordered_json project_array_values(const VisualState& s) {
  std::vector<Value> vs;
  for (const auto& e : std::get<ArrayView>(s.main).elements) vs.push_back(e.value);
  return {{"values", values_json(vs)}};
}

// --- two_pointer_search ---------------------------------------------------------

const std::vector<std::string> kTwoPointerCode = {
    "lo = 0, hi = n - 1",
    "while lo < hi",
    "  s = a[lo] + a[hi]",
    "  if s == target: report (lo, hi)",
    "  if s < target: lo = lo + 1",
    "  else: hi = hi - 1",
    "no pair sums to target",
};

TrackerRun two_pointer_search(const TaskSpec& t) {
  require_numbers(t.array, "two_pointer_search");
  if (!t.target || !is_number(*t.target)) throw IncompatibleInput("two_pointer_search needs a numeric target");
  for (std::size_t i = 1; i < t.array.size(); ++i) {
    if (num(t.array[i - 1]) > num(t.array[i])) throw IncompatibleInput("two_pointer_search needs a sorted array");
  }
  ArrayView view;
  for (const auto& v : t.array) view.elements.push_back({v});
  Visualizer viz("Two-Pointer Pair Search", "Array", kTwoPointerCode, view, palette({"compare", "found"}));
  viz.add_aux(AuxView{"search", AuxKind::Map, {AuxEntry{Value{"target"}, *t.target, "idle"}}});

  const auto& a = t.array;
  std::optional<std::int64_t> lo;
  std::optional<std::int64_t> hi;
  std::optional<std::string> result;
  auto opt = [](const auto& o) -> ordered_json {
    if (o) return *o;
    return nullptr;
  };
  auto snap = [&] { viz.observe({{"lo", opt(lo)}, {"hi", opt(hi)}, {"result", opt(result)}}); };
  snap();

  const auto n = static_cast<std::int64_t>(a.size());
  if (n >= 2) {
    lo = 0;
    hi = n - 1;
    viz.step(fmt::format("lo = 0, hi = {}", n - 1), 1, {op::SetPointer{"lo", 0}, op::SetPointer{"hi", n - 1}});
    snap();
  }
  const double target = num(*t.target);
  while (lo && hi && *lo < *hi) {
    const auto l = static_cast<std::size_t>(*lo);
    const auto h = static_cast<std::size_t>(*hi);
    const Value s = add(a[l], a[h]);
    viz.step(fmt::format("a[{}] + a[{}] = {} + {} = {}", l, h, show(a[l]), show(a[h]), show(s)), 3,
             {array_style({*lo, *hi}, "compare"), append("search", s, Value{"sum"})});
    snap();
    if (num(s) == target) {
      result = fmt::format("{},{}", l, h);
      viz.step(fmt::format("{} == target: pair found at ({}, {})", show(s), l, h), 4,
               {array_style({*lo, *hi}, "found"), append("search", *result, Value{"result"})});
      snap();
      break;
    }
    if (num(s) < target) {
      ++*lo;
      viz.step(fmt::format("{} < {}: move lo right", show(s), show(*t.target)), 5,
               {array_style({*lo - 1}, "idle"), op::SetPointer{"lo", *lo}});
    } else {
      --*hi;
      viz.step(fmt::format("{} > {}: move hi left", show(s), show(*t.target)), 6,
               {array_style({*hi + 1}, "idle"), op::SetPointer{"hi", *hi}});
    }
    snap();
  }
  if (!result) {
    result = "none";
    std::vector<Operation> ops;
    if (lo) ops.push_back(array_style({*lo}, "idle"));
    ops.push_back(append("search", *result, Value{"result"}));
    viz.step(fmt::format("No pair sums to {}", show(*t.target)), 7, std::move(ops));
    snap();
  }
  return {viz.finish(), viz.take_snapshots()};
}

ordered_json project_two_pointer(const VisualState& s) {
  const auto& a = std::get<ArrayView>(s.main);
  auto ptr = [&](const std::string& name) -> ordered_json {
    auto it = a.pointers.find(name);
    if (it == a.pointers.end() || !it->second) return nullptr;
    return *it->second;
  };
  return {{"lo", ptr("lo")}, {"hi", ptr("hi")}, {"result", aux_lookup(s, "search", Value{"result"})}};
}

// --- sieve_of_eratosthenes -------------------------------------------------------

const std::vector<std::string> kSieveCode = {
    "mark every number 2..n as a candidate",
    "1 is not prime",
    "for p = 2 while p * p <= n",
    "  if p is still a candidate: p is prime",
    "    for m = p * p to n step p",
    "      cross out m",
    "the remaining candidates are prime",
    "count the primes",
};

constexpr std::int64_t kSieveMax = 10000;

TrackerRun sieve(const TaskSpec& t) {
  std::int64_t n = 0;
  for (const auto& v : t.array) {
    const auto* i = std::get_if<std::int64_t>(&v);
    if (!i || *i < 1 || *i > kSieveMax) {
      throw IncompatibleInput(fmt::format("sieve_of_eratosthenes needs integers in 1..{}", kSieveMax));
    }
    n = std::max(n, *i);
  }
  ArrayView view;
  for (const auto& v : t.array) view.elements.push_back({v});
  Visualizer viz("Sieve of Eratosthenes", "Array", kSieveCode, view, palette({"current", "prime", "composite"}));
  viz.add_aux(AuxView{"result", AuxKind::Map, {}});

  std::vector<bool> is_prime(static_cast<std::size_t>(n) + 1, true);
  auto indices_of = [&](std::int64_t value) {
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < t.array.size(); ++i) {
      if (std::get<std::int64_t>(t.array[i]) == value) out.push_back(static_cast<std::int64_t>(i));
    }
    return out;
  };
  auto snap = [&] {
    std::set<std::int64_t> crossed;
    for (const auto& v : t.array) {
      const auto x = std::get<std::int64_t>(v);
      if (!is_prime[static_cast<std::size_t>(x)]) crossed.insert(x);
    }
    viz.observe({{"crossed", std::vector<std::int64_t>(crossed.begin(), crossed.end())}});
  };
  snap();

  if (n >= 1) {
    is_prime[0] = false;
    is_prime[1] = false;
    if (auto ids = indices_of(1); !ids.empty()) {
      viz.step("1 is not prime", 2, {array_style(ids, "composite")});
      snap();
    }
  }
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (!is_prime[static_cast<std::size_t>(p)]) continue;
    const auto ids = indices_of(p);
    if (!ids.empty()) {
      viz.step(fmt::format("{} is prime; cross out its multiples", p), 4, {array_style(ids, "current")});
      snap();
    }
    for (std::int64_t m = p * p; m <= n; m += p) {
      if (!is_prime[static_cast<std::size_t>(m)]) continue;
      is_prime[static_cast<std::size_t>(m)] = false;
      if (auto mids = indices_of(m); !mids.empty()) {
        viz.step(fmt::format("Cross out {} = {} x {}", m, p, m / p), 6, {array_style(mids, "composite")});
        snap();
      }
    }
    if (!ids.empty()) {
      viz.step(fmt::format("Multiples of {} crossed out", p), 3, {array_style(ids, "prime")});
      snap();
    }
  }
  std::vector<std::int64_t> rest;
  for (std::size_t i = 0; i < t.array.size(); ++i) {
    const auto x = std::get<std::int64_t>(t.array[i]);
    if (x >= 2 && is_prime[static_cast<std::size_t>(x)] && x * x > n) rest.push_back(static_cast<std::int64_t>(i));
  }
  if (!rest.empty()) {
    viz.step("The remaining candidates are prime", 7, {array_style(rest, "prime")});
    snap();
  }
  std::int64_t count = 0;
  for (std::int64_t x = 2; x <= n; ++x) count += is_prime[static_cast<std::size_t>(x)] ? 1 : 0;
  viz.step(fmt::format("{} primes up to {}", count, n), 8, {append("result", count, Value{"count"})});
  snap();
  return {viz.finish(), viz.take_snapshots()};
}

ordered_json project_sieve(const VisualState& s) {
  std::set<std::int64_t> crossed;
  for (const auto& e : std::get<ArrayView>(s.main).elements) {
    if (e.style_key == "composite") crossed.insert(std::get<std::int64_t>(e.value));
  }
  return {{"crossed", std::vector<std::int64_t>(crossed.begin(), crossed.end())}};
}

// --- graph helpers --------------------------------------------------------------

struct Arc {
  std::string to;
  Value weight;
  std::size_t edge;
};

/// Outgoing arcs per node, neighbours in sorted-id order.
std::map<std::string, std::vector<Arc>> adjacency(const GraphInput& g, bool weighted) {
  std::map<std::string, std::vector<Arc>> out;
  for (const auto& n : g.nodes) out[n.id];
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    const Value w = weighted && e.weight ? *e.weight : Value{std::int64_t{1}};
    out[e.from].push_back({e.to, w, i});
    if (!e.directed && e.from != e.to) out[e.to].push_back({e.from, w, i});
  }
  for (auto& [_, arcs] : out) {
    std::stable_sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
      return a.to != b.to ? a.to < b.to : a.edge < b.edge;
    });
  }
  return out;
}

GraphView graph_view(const GraphInput& g, const PropertyMap& props) {
  GraphView v;
  for (const auto& n : g.nodes) v.nodes.push_back({n.id, n.label, "idle", props});
  for (const auto& e : g.edges) v.edges.push_back({e.from, e.to, e.weight, e.directed, "edge"});
  return v;
}

// --- dijkstra ---------------------------------------------------------------------

const std::vector<std::string> kDijkstraCode = {
    "dist[source] = 0; every other dist = infinity",
    "while some unvisited node has a finite dist",
    "  u = the unvisited node with the smallest dist",
    "  mark u visited",
    "  for each edge (u, v, w) with v unvisited",
    "    if dist[u] + w >= dist[v]: keep dist[v]",
    "    else: dist[v] = dist[u] + w",
};

TrackerRun dijkstra(const TaskSpec& t) {
  const auto& g = t.graph;
  if (g.nodes.empty()) throw IncompatibleInput("dijkstra needs at least one node");
  for (const auto& e : g.edges) {
    if (e.weight && (!is_number(*e.weight) || num(*e.weight) < 0)) {
      throw IncompatibleInput("dijkstra needs non-negative numeric edge weights");
    }
  }
  const std::string source = t.source.value_or(g.nodes.front().id);
  if (std::none_of(g.nodes.begin(), g.nodes.end(), [&](const InputNode& n) { return n.id == source; })) {
    throw IncompatibleInput("dijkstra source '" + source + "' is not a node");
  }
  Visualizer viz("Dijkstra Shortest Path", "Graph", kDijkstraCode, graph_view(g, {{"distance", Value{}}}),
                 palette({"current", "visited", "edge", "relax", "checked"}));
  viz.add_aux(AuxView{"visited", AuxKind::List, {}});

  const auto adj = adjacency(g, true);
  std::map<std::string, std::optional<Value>> dist;
  std::vector<std::string> visited;
  auto snap = [&] {
    ordered_json d = ordered_json::object();
    for (const auto& n : g.nodes) d[n.id] = dist[n.id] ? json::encode_value(*dist[n.id]) : ordered_json(nullptr);
    viz.observe({{"dist", d}, {"visited", visited}});
  };
  snap();

  dist[source] = Value{std::int64_t{0}};
  viz.step(fmt::format("dist[{}] = 0", source), 1, {op::UpdateNodeProperties{source, {{"distance", std::int64_t{0}}}}});
  snap();
  std::set<std::string> done;
  while (true) {
    std::optional<std::string> u;
    for (const auto& n : g.nodes) {
      const auto& d = dist[n.id];
      if (done.contains(n.id) || !d) continue;
      if (!u || num(*d) < num(*dist[*u]) || (num(*d) == num(*dist[*u]) && n.id < *u)) u = n.id;
    }
    if (!u) break;
    const Value du = *dist[*u];
    viz.step(fmt::format("Select {} (dist {})", *u, show(du)), 3, {node_style({*u}, "current")});
    snap();
    done.insert(*u);
    visited.push_back(*u);
    viz.step(fmt::format("Mark {} visited", *u), 4, {node_style({*u}, "visited"), append("visited", Value{*u})});
    snap();
    for (const auto& arc : adj.at(*u)) {
      if (done.contains(arc.to)) continue;
      const auto& e = g.edges[arc.edge];
      const EdgeRef ref{e.from, e.to};
      const Value nd = add(du, arc.weight);
      auto& dv = dist[arc.to];
      if (!dv || num(nd) < num(*dv)) {
        dv = nd;
        viz.step(fmt::format("Relax {} -> {}: dist[{}] = {}", *u, arc.to, arc.to, show(nd)), 7,
                 {op::UpdateEdgeStyle{{ref}, "relax"}, op::UpdateNodeProperties{arc.to, {{"distance", nd}}}});
      } else {
        viz.step(fmt::format("{} -> {} gives {}, not better than {}", *u, arc.to, show(nd), show(*dv)), 6,
                 {op::UpdateEdgeStyle{{ref}, "checked"}});
      }
      snap();
    }
  }
  return {viz.finish(), viz.take_snapshots()};
}

ordered_json project_dijkstra(const VisualState& s) {
  const auto& g = std::get<GraphView>(s.main);
  ordered_json d = ordered_json::object();
  for (const auto& n : g.nodes) {
    auto it = n.properties.find("distance");
    d[n.id] = it == n.properties.end() ? ordered_json(nullptr) : json::encode_value(it->second);
  }
  return {{"dist", d}, {"visited", aux_values(s, "visited")}};
}

// --- bfs_course_schedule -----------------------------------------------------------

const std::vector<std::string> kCourseCode = {
    "indegree[v] = number of prerequisites of v",
    "queue every course with indegree 0",
    "while the queue is not empty",
    "  u = pop the queue front; append u to the order",
    "  for each edge (u, v)",
    "    indegree[v] -= 1; if it reaches 0, queue v",
    "all courses can be finished iff the order holds every course",
};

TrackerRun course_schedule(const TaskSpec& t) {
  const auto& g = t.graph;
  for (const auto& e : g.edges) {
    if (!e.directed) throw IncompatibleInput("bfs_course_schedule needs directed prerequisite edges");
  }
  Visualizer viz("Course Schedule (BFS)", "Graph", kCourseCode, graph_view(g, {}),
                 palette({"current", "visited", "cycle", "edge", "used"}));
  viz.add_aux(AuxView{"queue", AuxKind::List, {}});
  viz.add_aux(AuxView{"order", AuxKind::List, {}});
  viz.add_aux(AuxView{"result", AuxKind::Map, {}});

  const auto adj = adjacency(g, false);
  std::map<std::string, std::int64_t> indegree;
  bool counted = false;
  std::deque<std::string> queue;
  std::vector<std::string> order;
  auto snap = [&] {
    ordered_json in = ordered_json::object();
    if (counted) {
      for (const auto& n : g.nodes) in[n.id] = indegree[n.id];
    }
    viz.observe({{"indegree", in}, {"queue", std::vector<std::string>(queue.begin(), queue.end())}, {"order", order}});
  };
  snap();

  for (const auto& n : g.nodes) indegree[n.id] = 0;
  for (const auto& e : g.edges) ++indegree[e.to];
  counted = true;
  if (!g.nodes.empty()) {
    std::vector<Operation> ops;
    for (const auto& n : g.nodes) ops.push_back(op::UpdateNodeProperties{n.id, {{"indegree", indegree[n.id]}}});
    viz.step("Count the prerequisites of every course", 1, std::move(ops));
    snap();
  }
  std::vector<OpGroup> seeds;
  for (const auto& n : g.nodes) {
    if (indegree[n.id] != 0) continue;
    queue.push_back(n.id);
    seeds.push_back({append("queue", Value{n.id})});
  }
  if (!seeds.empty()) {
    viz.step("Queue every course without prerequisites", {2}, std::move(seeds));
    snap();
  }
  while (!queue.empty()) {
    const std::string u = queue.front();
    queue.pop_front();
    order.push_back(u);
    viz.step(fmt::format("Take {}", u), 4,
             {op::PopFromList{"queue", ListEnd::Front}, append("order", Value{u}), node_style({u}, "current")});
    snap();
    for (const auto& arc : adj.at(u)) {
      const auto& e = g.edges[arc.edge];
      const auto left = --indegree[arc.to];
      std::vector<Operation> ops{op::UpdateEdgeStyle{{{e.from, e.to}}, "used"},
                                 op::UpdateNodeProperties{arc.to, {{"indegree", left}}}};
      if (left == 0) {
        queue.push_back(arc.to);
        ops.push_back(append("queue", Value{arc.to}));
      }
      viz.step(fmt::format("{} -> {}: indegree[{}] = {}{}", u, arc.to, arc.to, left, left == 0 ? ", queue it" : ""), 6,
               std::move(ops));
      snap();
    }
    viz.step(fmt::format("{} is scheduled", u), 3, {node_style({u}, "visited")});
    snap();
  }
  const bool can = order.size() == g.nodes.size();
  std::vector<Operation> ops{append("result", Value{can ? "true" : "false"}, Value{"can_finish"})};
  std::vector<std::string> stuck;
  for (const auto& n : g.nodes) {
    if (std::find(order.begin(), order.end(), n.id) == order.end()) stuck.push_back(n.id);
  }
  if (!stuck.empty()) ops.push_back(node_style(stuck, "cycle"));
  viz.step(can ? "Every course can be finished" : fmt::format("{} courses are stuck on a cycle", stuck.size()), 7,
           std::move(ops));
  snap();
  return {viz.finish(), viz.take_snapshots()};
}

ordered_json project_course(const VisualState& s) {
  const auto& g = std::get<GraphView>(s.main);
  ordered_json in = ordered_json::object();
  for (const auto& n : g.nodes) {
    if (auto it = n.properties.find("indegree"); it != n.properties.end()) in[n.id] = json::encode_value(it->second);
  }
  return {{"indegree", in}, {"queue", aux_values(s, "queue")}, {"order", aux_values(s, "order")}};
}

// --- table helpers ---------------------------------------------------------------

ordered_json table_json(const std::vector<std::vector<std::optional<std::int64_t>>>& t) {
  auto out = ordered_json::array();
  for (const auto& row : t) {
    auto r = ordered_json::array();
    for (const auto& c : row) r.push_back(c ? ordered_json(*c) : ordered_json(nullptr));
    out.push_back(std::move(r));
  }
  return out;
}

ordered_json project_table(const VisualState& s) {
  const auto& t = std::get<TableView>(s.main);
  auto out = ordered_json::array();
  for (std::int64_t r = 0; r < t.rows; ++r) {
    auto row = ordered_json::array();
    for (std::int64_t c = 0; c < t.cols; ++c) row.push_back(json::encode_value(t.at(r, c).value));
    out.push_back(std::move(row));
  }
  return {{"table", out}};
}

constexpr std::int64_t kTableMax = 30;

// --- knapsack_01 -------------------------------------------------------------------

const std::vector<std::string> kKnapsackCode = {
    "dp[0][c] = 0 for every capacity c",
    "for i = 1 to n",
    "  for c = 0 to C",
    "    if w[i] > c: dp[i][c] = dp[i-1][c]",
    "    else: dp[i][c] = max(dp[i-1][c], dp[i-1][c-w[i]] + v[i])",
    "answer = dp[n][C]",
};

TrackerRun knapsack(const TaskSpec& t) {
  if (!t.capacity || *t.capacity < 0 || *t.capacity > kTableMax) {
    throw IncompatibleInput(fmt::format("knapsack_01 needs an integer capacity in 0..{}", kTableMax));
  }
  if (static_cast<std::int64_t>(t.pairs.size()) > kTableMax) throw IncompatibleInput("knapsack_01: too many items");
  std::vector<std::pair<std::int64_t, std::int64_t>> items;
  for (const auto& [w, v] : t.pairs) {
    const auto* wi = std::get_if<std::int64_t>(&w);
    const auto* vi = std::get_if<std::int64_t>(&v);
    if (!wi || !vi || *wi < 0 || *vi < 0) {
      throw IncompatibleInput("knapsack_01 needs [weight, value] pairs of non-negative integers");
    }
    items.emplace_back(*wi, *vi);
  }
  const auto n = static_cast<std::int64_t>(items.size());
  const auto cap = *t.capacity;
  TableView table = TableView::filled(n + 1, cap + 1, Value{});
  table.row_labels.push_back("-");
  for (const auto& [w, v] : items) table.row_labels.push_back(fmt::format("w{} v{}", w, v));
  for (std::int64_t c = 0; c <= cap; ++c) table.col_labels.push_back(std::to_string(c));
  Visualizer viz("0/1 Knapsack", "DP", kKnapsackCode, table, palette({"current", "filled", "answer"}));

  std::vector<std::vector<std::optional<std::int64_t>>> dp(static_cast<std::size_t>(n + 1),
                                                           std::vector<std::optional<std::int64_t>>(
                                                               static_cast<std::size_t>(cap + 1)));
  auto at = [&](std::int64_t r, std::int64_t c) -> std::optional<std::int64_t>& {
    return dp[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  };
  auto snap = [&] { viz.observe({{"table", table_json(dp)}}); };
  snap();

  std::vector<Operation> base;
  std::vector<CellRef> row0;
  for (std::int64_t c = 0; c <= cap; ++c) {
    at(0, c) = 0;
    base.push_back(op::UpdateTableCell{0, c, std::int64_t{0}});
    row0.push_back({0, c});
  }
  base.push_back(cell_style(row0, "filled"));
  viz.step("No items: every capacity is worth 0", 1, std::move(base));
  snap();

  std::optional<CellRef> lit;
  for (std::int64_t i = 1; i <= n; ++i) {
    const auto [w, v] = items[static_cast<std::size_t>(i - 1)];
    for (std::int64_t c = 0; c <= cap; ++c) {
      const bool fits = w <= c;
      const auto skip = *at(i - 1, c);
      const auto take = fits ? *at(i - 1, c - w) + v : -1;
      const auto best = std::max(skip, take);
      at(i, c) = best;
      std::vector<OpGroup> groups;
      if (lit) groups.push_back({cell_style({*lit}, "filled")});
      std::vector<Operation> ops{op::UpdateTableCell{i, c, best}, cell_style({{i, c}}, "current"),
                                 op::ShowDependency{{i - 1, c}, {i, c}}};
      if (fits) ops.push_back(op::ShowDependency{{i - 1, c - w}, {i, c}});
      groups.push_back(std::move(ops));
      lit = CellRef{i, c};
      const auto caption = fits ? fmt::format("dp[{}][{}] = max({}, {} + {}) = {}", i, c, skip, *at(i - 1, c - w), v, best)
                                : fmt::format("Item {} (w{}) does not fit in {}: dp[{}][{}] = {}", i, w, c, i, c, best);
      viz.step(caption, {fits ? 5 : 4}, std::move(groups));
      snap();
    }
  }
  std::vector<OpGroup> groups;
  if (lit) groups.push_back({cell_style({*lit}, "filled")});
  groups.push_back({cell_style({{n, cap}}, "answer")});
  viz.step(fmt::format("Best value = dp[{}][{}] = {}", n, cap, *at(n, cap)), {6}, std::move(groups));
  snap();
  return {viz.finish(), viz.take_snapshots()};
}

// --- lcs_table ---------------------------------------------------------------------

const std::vector<std::string> kLcsCode = {
    "L[i][0] = L[0][j] = 0",
    "for i = 1 to m",
    "  for j = 1 to n",
    "    if a[i] == b[j]: L[i][j] = L[i-1][j-1] + 1",
    "    else: L[i][j] = max(L[i-1][j], L[i][j-1])",
    "length = L[m][n]",
};

/// A row given as one string is read character by character.
std::vector<Value> sequence(const std::vector<Value>& row) {
  if (row.size() == 1) {
    if (const auto* s = std::get_if<std::string>(&row[0])) {
      std::vector<Value> out;
      for (char c : *s) out.push_back(std::string(1, c));
      return out;
    }
  }
  return row;
}

TrackerRun lcs(const TaskSpec& t) {
  if (t.matrix.size() != 2) throw IncompatibleInput("lcs_table needs a matrix of exactly two sequences");
  const auto a = sequence(t.matrix[0]);
  const auto b = sequence(t.matrix[1]);
  if (static_cast<std::int64_t>(std::max(a.size(), b.size())) > kTableMax) {
    throw IncompatibleInput("lcs_table: sequences are too long");
  }
  const auto m = static_cast<std::int64_t>(a.size());
  const auto n = static_cast<std::int64_t>(b.size());
  TableView table = TableView::filled(m + 1, n + 1, Value{});
  table.row_labels.push_back("-");
  for (const auto& x : a) table.row_labels.push_back(display(x, "-"));
  table.col_labels.push_back("-");
  for (const auto& x : b) table.col_labels.push_back(display(x, "-"));
  Visualizer viz("Longest Common Subsequence", "DP", kLcsCode, table, palette({"current", "filled", "answer"}));
  viz.add_aux(AuxView{"result", AuxKind::Map, {}});

  std::vector<std::vector<std::optional<std::int64_t>>> L(static_cast<std::size_t>(m + 1),
                                                          std::vector<std::optional<std::int64_t>>(
                                                              static_cast<std::size_t>(n + 1)));
  auto at = [&](std::int64_t r, std::int64_t c) -> std::optional<std::int64_t>& {
    return L[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  };
  auto snap = [&] { viz.observe({{"table", table_json(L)}}); };
  snap();

  std::vector<Operation> base;
  std::vector<CellRef> border;
  for (std::int64_t j = 0; j <= n; ++j) border.push_back({0, j});
  for (std::int64_t i = 1; i <= m; ++i) border.push_back({i, 0});
  for (const auto& c : border) {
    at(c.row, c.col) = 0;
    base.push_back(op::UpdateTableCell{c.row, c.col, std::int64_t{0}});
  }
  base.push_back(cell_style(border, "filled"));
  viz.step("Empty prefixes share nothing", 1, std::move(base));
  snap();

  std::optional<CellRef> lit;
  for (std::int64_t i = 1; i <= m; ++i) {
    for (std::int64_t j = 1; j <= n; ++j) {
      const auto& x = a[static_cast<std::size_t>(i - 1)];
      const auto& y = b[static_cast<std::size_t>(j - 1)];
      std::vector<OpGroup> groups;
      if (lit) groups.push_back({cell_style({*lit}, "filled")});
      std::string caption;
      CellRef from;
      if (x == y) {
        at(i, j) = *at(i - 1, j - 1) + 1;
        from = {i - 1, j - 1};
        caption = fmt::format("a[{}] = b[{}] = {}: L[{}][{}] = {}", i, j, display(x, "-"), i, j, *at(i, j));
      } else {
        const auto up = *at(i - 1, j);
        const auto left = *at(i, j - 1);
        at(i, j) = std::max(up, left);
        from = up >= left ? CellRef{i - 1, j} : CellRef{i, j - 1};
        caption = fmt::format("{} != {}: L[{}][{}] = max({}, {}) = {}", display(x, "-"), display(y, "-"), i, j, up,
                              left, *at(i, j));
      }
      groups.push_back({op::UpdateTableCell{i, j, *at(i, j)}, cell_style({{i, j}}, "current"),
                        op::ShowDependency{from, {i, j}}});
      lit = CellRef{i, j};
      viz.step(caption, {x == y ? 4 : 5}, std::move(groups));
      snap();
    }
  }
  std::vector<OpGroup> groups;
  if (lit) groups.push_back({cell_style({*lit}, "filled")});
  groups.push_back({cell_style({{m, n}}, "answer"), append("result", *at(m, n), Value{"length"})});
  viz.step(fmt::format("LCS length = {}", *at(m, n)), {6}, std::move(groups));
  snap();
  return {viz.finish(), viz.take_snapshots()};
}

// --- bst_insert ---------------------------------------------------------------------

const std::vector<std::string> kBstCode = {
    "for each key k",
    "  if the tree is empty: k becomes the root",
    "  node = root",
    "  if k == node.key: skip the duplicate",
    "  if k < node.key: go left, or attach k as the left child",
    "  else: go right, or attach k as the right child",
};

bool key_less(const Value& a, const Value& b) {
  if (is_number(a)) return num(a) < num(b);
  return std::get<std::string>(a) < std::get<std::string>(b);
}

bool key_equal(const Value& a, const Value& b) { return !key_less(a, b) && !key_less(b, a); }

TrackerRun bst_insert(const TaskSpec& t) {
  const bool numbers = !t.array.empty() && is_number(t.array.front());
  for (const auto& v : t.array) {
    if (numbers ? !is_number(v) : !std::holds_alternative<std::string>(v)) {
      throw IncompatibleInput("bst_insert needs keys that are all numbers or all strings");
    }
  }
  Visualizer viz("BST Insert", "Tree", kBstCode, TreeView{}, palette({}));

  struct Node {
    Value key;
    std::string id;
    std::array<std::optional<std::size_t>, 2> child;
  };
  std::vector<Node> nodes;
  auto snap = [&] {
    ordered_json c = ordered_json::object();
    for (const auto& nd : nodes) {
      auto slot = [&](int k) { return nd.child[k] ? ordered_json(nodes[*nd.child[k]].id) : ordered_json(nullptr); };
      c[nd.id] = ordered_json::array({slot(0), slot(1)});
    }
    viz.observe({{"children", c}});
  };
  snap();

  // trees have no style op, so a comment anchored to the node under
  // comparison plays the cursor
  auto cursor = [](const std::string& node, std::string text) {
    return Operation{op::ShowComment{"cursor", std::move(text), Anchor{"main", node}}};
  };
  for (const auto& k : t.array) {
    const std::string id = key_text(k);
    const std::string label = display(k, "-");
    if (nodes.empty()) {
      nodes.push_back({k, id, {}});
      viz.step(fmt::format("Insert {} as the root", label), {2},
               {{op::AddChild{std::nullopt, {id, label, "idle"}, 0}}, {cursor(id, "new root")}});
      snap();
      continue;
    }
    std::size_t at = 0;
    while (true) {
      const Node node = nodes[at];
      const std::string key = display(node.key, "-");
      if (key_equal(k, node.key)) {
        viz.step(fmt::format("{} is already in the tree", label), 4, {cursor(node.id, label + " == " + key)});
        snap();
        break;
      }
      const int side = key_less(k, node.key) ? 0 : 1;
      const std::string dir = side == 0 ? "left" : "right";
      const std::string cmp = fmt::format("{} {} {}", label, side == 0 ? "<" : ">", key);
      viz.step(fmt::format("{}: go {}", cmp, dir), 5 + side, {cursor(node.id, cmp)});
      snap();
      if (node.child[side]) {
        at = *node.child[side];
        continue;
      }
      nodes[at].child[side] = nodes.size();
      nodes.push_back({k, id, {}});
      viz.step(fmt::format("Attach {} as the {} child of {}", label, dir, node.id), {5 + side},
               {{op::AddChild{node.id, {id, label, "idle"}, side}}, {cursor(id, "inserted " + label)}});
      snap();
      break;
    }
  }
  return {viz.finish(), viz.take_snapshots()};
}

ordered_json project_bst(const VisualState& s) {
  const auto& t = std::get<TreeView>(s.main);
  ordered_json c = ordered_json::object();
  for (const auto& n : t.nodes) {
    auto slot = [&](std::size_t k) {
      return k < n.children.size() && n.children[k] ? ordered_json(*n.children[k]) : ordered_json(nullptr);
    };
    c[n.id] = ordered_json::array({slot(0), slot(1)});
  }
  return {{"children", c}};
}

// --- chained_hash_insert -------------------------------------------------------------

const std::vector<std::string> kHashCode = {
    "for each (key, value)",
    "  b = hash(key) mod capacity",
    "  if key is already in bucket b: overwrite its value",
    "  else if bucket b is occupied: note the collision",
    "  append (key, value) to bucket b",
    "  if size / capacity > 0.75: rehash into 2 x capacity buckets",
};

constexpr std::int64_t kDefaultBuckets = 4;
constexpr std::int64_t kMaxBuckets = 64;

TrackerRun chained_hash(const TaskSpec& t) {
  const std::int64_t initial = t.capacity.value_or(kDefaultBuckets);
  if (initial < 1 || initial > kMaxBuckets) {
    throw IncompatibleInput(fmt::format("chained_hash_insert needs a capacity in 1..{}", kMaxBuckets));
  }
  for (const auto& [k, v] : t.pairs) {
    if (is_null(k)) throw IncompatibleInput("chained_hash_insert keys must not be null");
  }
  HashtableView table{std::vector<std::vector<HashEntry>>(static_cast<std::size_t>(initial))};
  Visualizer viz("Chained Hash Insert", "Hashtable", kHashCode, table, palette({"current", "collision"}));

  std::int64_t cap = initial;
  std::vector<std::vector<std::pair<Value, Value>>> buckets(static_cast<std::size_t>(cap));
  std::size_t size = 0;
  auto snap = [&] {
    auto bs = ordered_json::array();
    for (const auto& b : buckets) {
      auto entries = ordered_json::array();
      for (const auto& [k, v] : b) entries.push_back(ordered_json::array({json::encode_value(k), json::encode_value(v)}));
      bs.push_back(std::move(entries));
    }
    viz.observe({{"capacity", cap}, {"buckets", bs}});
  };
  snap();

  std::optional<std::int64_t> lit;
  auto reset = [&](std::vector<Operation> ops) {
    std::vector<OpGroup> groups;
    if (lit) groups.push_back({op::HighlightCollision{*lit, "idle"}});
    groups.push_back(std::move(ops));
    return groups;
  };
  for (const auto& [k, v] : t.pairs) {
    const std::int64_t b = hash_bucket(k, cap);
    auto& bucket = buckets[static_cast<std::size_t>(b)];
    auto hit = std::find_if(bucket.begin(), bucket.end(), [&](const auto& e) { return e.first == k; });
    if (hit != bucket.end()) {
      hit->second = v;
      viz.step(fmt::format("{} is already in bucket {}: value = {}", key_text(k), b, show(v)), {3},
               reset({op::InsertIntoBucket{b, k, v}, op::HighlightCollision{b, "current"}}));
      lit = b;
      snap();
      continue;
    }
    if (!bucket.empty()) {
      viz.step(fmt::format("hash({}) -> bucket {}, already holding {}", key_text(k), b, bucket.size()), {4},
               reset({op::HighlightCollision{b, "collision"}}));
      lit = b;
      snap();
    }
    bucket.emplace_back(k, v);
    ++size;
    viz.step(fmt::format("Append {} = {} to bucket {}", key_text(k), show(v), b), {5},
             reset({op::InsertIntoBucket{b, k, v}, op::HighlightCollision{b, "current"}}));
    lit = b;
    snap();
    if (static_cast<double>(size) / static_cast<double>(cap) > 0.75) {
      const std::int64_t next = cap * 2;
      std::vector<std::vector<std::pair<Value, Value>>> moved(static_cast<std::size_t>(next));
      std::vector<KeyPlacement> placement;
      for (const auto& old : buckets) {
        for (const auto& e : old) {
          const auto nb = hash_bucket(e.first, next);
          moved[static_cast<std::size_t>(nb)].push_back(e);
          placement.push_back({e.first, nb});
        }
      }
      viz.step(fmt::format("Load {}/{} > 0.75: rehash into {} buckets", size, cap, next), {6},
               reset({op::Rehash{next, std::move(placement)}}));
      lit.reset();
      buckets = std::move(moved);
      cap = next;
      snap();
    }
  }
  return {viz.finish(), viz.take_snapshots()};
}

ordered_json project_hash(const VisualState& s) {
  const auto& h = std::get<HashtableView>(s.main);
  auto bs = ordered_json::array();
  for (const auto& b : h.buckets) {
    auto entries = ordered_json::array();
    for (const auto& e : b) entries.push_back(ordered_json::array({json::encode_value(e.key), json::encode_value(e.value)}));
    bs.push_back(std::move(entries));
  }
  return {{"capacity", h.buckets.size()}, {"buckets", bs}};
}

// --- registry -------------------------------------------------------------------------

const std::vector<TrackerInfo>& registry() {
  static const std::vector<TrackerInfo> r = {
      {"bubble_sort", "Sorting", {InputKind::Array}, kBubbleCode, bubble_sort, project_array_values},
      {"two_pointer_search", "Array", {InputKind::Array}, kTwoPointerCode, two_pointer_search, project_two_pointer},
      {"sieve_of_eratosthenes", "Array", {InputKind::Array}, kSieveCode, sieve, project_sieve},
      {"dijkstra", "Graph", {InputKind::Graph}, kDijkstraCode, dijkstra, project_dijkstra},
      {"bfs_course_schedule", "Graph", {InputKind::Graph}, kCourseCode, course_schedule, project_course},
      {"knapsack_01", "DP", {InputKind::Pairs}, kKnapsackCode, knapsack, project_table},
      {"lcs_table", "DP", {InputKind::Matrix}, kLcsCode, lcs, project_table},
      {"bst_insert", "Tree", {InputKind::Array}, kBstCode, bst_insert, project_bst},
      {"chained_hash_insert", "Hashtable", {InputKind::Pairs}, kHashCode, chained_hash, project_hash},
  };
  return r;
}

}  // namespace

std::int64_t hash_bucket(const Value& key, std::int64_t capacity) {
  if (const auto* i = std::get_if<std::int64_t>(&key)) return ((*i % capacity) + capacity) % capacity;
  // FNV-1a over the key's text form
  std::uint32_t h = 2166136261u;
  for (unsigned char c : key_text(key)) {
    h ^= c;
    h *= 16777619u;
  }
  return static_cast<std::int64_t>(h % static_cast<std::uint32_t>(capacity));
}

std::span<const TrackerInfo> list_trackers() { return registry(); }

const TrackerInfo* find_tracker(std::string_view id) {
  for (const auto& t : registry()) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

TrackerRun run_tracker(std::string_view id, const TaskSpec& task) {
  const auto* info = find_tracker(id);
  if (!info) throw IncompatibleInput("unknown tracker '" + std::string(id) + "'");
  if (std::find(info->accepts.begin(), info->accepts.end(), task.kind) == info->accepts.end()) {
    throw IncompatibleInput(fmt::format("{} does not accept {} input", info->id, to_string(task.kind)));
  }
  return info->run(task);
}

std::optional<std::string> default_tracker(const TaskSpec& task) {
  if (task.tracker) return task.tracker;
  const auto& f = task.family;
  switch (task.kind) {
    case InputKind::Array:
      if (f == "Tree") return "bst_insert";
      if (f == "Sorting") return "bubble_sort";
      if (task.target) return "two_pointer_search";
      if (f == "Array") return "sieve_of_eratosthenes";
      return "bubble_sort";
    case InputKind::Graph:
      return task.source ? "dijkstra" : "bfs_course_schedule";
    case InputKind::Matrix:
      return "lcs_table";
    case InputKind::Pairs:
      return f == "DP" ? "knapsack_01" : "chained_hash_insert";
  }
  return std::nullopt;
}

}  // namespace vta::trackers
