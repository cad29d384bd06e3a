#include "fuzz.hpp"

#include "vta/core/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include <fmt/format.h>

namespace vta::testing {

using namespace core;
using trackers::InputKind;
using trackers::TaskSpec;

namespace {

int uni(Rng& r, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(r); }
bool coin(Rng& r, double p = 0.5) { return std::bernoulli_distribution(p)(r); }
template <typename T>
const T& pick(Rng& r, const std::vector<T>& xs) {
  return xs[static_cast<std::size_t>(uni(r, 0, static_cast<int>(xs.size()) - 1))];
}

double n_of(const Value& v) { return *as_number(v); }

const std::vector<std::string> kWords = {"ant", "bee", "cat", "dog", "eel", "fox", "gnu"};

// --- tasks -------------------------------------------------------------------

TaskSpec array_task(std::string family, std::vector<Value> xs) {
  TaskSpec t;
  t.family = std::move(family);
  t.kind = InputKind::Array;
  t.array = std::move(xs);
  return t;
}

trackers::GraphInput random_graph(Rng& r, const std::string& prefix, int max_nodes, int max_edges, bool weights,
                                  std::optional<bool> directed) {
  trackers::GraphInput g;
  const int n = uni(r, 1, max_nodes);
  for (int i = 0; i < n; ++i) g.nodes.push_back({fmt::format("{}{}", prefix, i), fmt::format("{}{}", prefix, i)});
  const int m = uni(r, 0, max_edges);
  for (int k = 0; k < m; ++k) {
    trackers::InputEdge e;
    e.from = g.nodes[static_cast<std::size_t>(uni(r, 0, n - 1))].id;
    e.to = g.nodes[static_cast<std::size_t>(uni(r, 0, n - 1))].id;
    if (e.from == e.to && coin(r, 0.7)) continue;
    if (weights && coin(r, 0.9)) e.weight = Value{std::int64_t{uni(r, 0, 9)}};
    e.directed = directed ? *directed : coin(r);
    g.edges.push_back(e);
  }
  return g;
}

}  // namespace

TaskSpec random_task(const std::string& tracker, Rng& r) {
  if (tracker == "bubble_sort") {
    std::vector<Value> xs;
    for (int i = uni(r, 0, 8); i > 0; --i) {
      if (coin(r, 0.2)) {
        xs.push_back(uni(r, -20, 20) + 0.5);
      } else {
        xs.push_back(std::int64_t{uni(r, -20, 20)});
      }
    }
    return array_task("Sorting", xs);
  }
  if (tracker == "two_pointer_search") {
    std::vector<std::int64_t> raw;
    for (int i = uni(r, 0, 8); i > 0; --i) raw.push_back(uni(r, -10, 20));
    std::sort(raw.begin(), raw.end());
    auto t = array_task("Array", std::vector<Value>(raw.begin(), raw.end()));
    if (raw.size() >= 2 && coin(r, 0.6)) {
      const int i = uni(r, 0, static_cast<int>(raw.size()) - 2);
      const int j = uni(r, i + 1, static_cast<int>(raw.size()) - 1);
      t.target = Value{raw[static_cast<std::size_t>(i)] + raw[static_cast<std::size_t>(j)]};
    } else {
      t.target = Value{std::int64_t{uni(r, -20, 40)}};
    }
    return t;
  }
  if (tracker == "sieve_of_eratosthenes") {
    std::vector<Value> xs;
    for (int i = uni(r, 0, 8); i > 0; --i) xs.push_back(std::int64_t{uni(r, 1, 60)});
    return array_task("Array", xs);
  }
  if (tracker == "dijkstra" || tracker == "bfs_course_schedule") {
    const bool sp = tracker == "dijkstra";
    TaskSpec t;
    t.family = "Graph";
    t.kind = InputKind::Graph;
    t.graph = random_graph(r, sp ? "N" : "C", 7, sp ? 12 : 10, sp, sp ? std::nullopt : std::optional<bool>(true));
    if (sp && coin(r, 0.8)) t.source = pick(r, t.graph.nodes).id;
    return t;
  }
  if (tracker == "knapsack_01") {
    TaskSpec t;
    t.family = "DP";
    t.kind = InputKind::Pairs;
    for (int i = uni(r, 0, 6); i > 0; --i) {
      t.pairs.emplace_back(std::int64_t{uni(r, 0, 6)}, std::int64_t{uni(r, 0, 9)});
    }
    t.capacity = uni(r, 0, 12);
    return t;
  }
  if (tracker == "lcs_table") {
    TaskSpec t;
    t.family = "DP";
    t.kind = InputKind::Matrix;
    for (int row = 0; row < 2; ++row) {
      const int len = uni(r, 0, 7);
      if (coin(r, 0.6)) {
        std::string s;
        for (int k = 0; k < len; ++k) s += static_cast<char>('a' + uni(r, 0, 2));
        t.matrix.push_back({Value{s}});
      } else {
        std::vector<Value> xs;
        for (int k = 0; k < len; ++k) xs.push_back(std::int64_t{uni(r, 0, 3)});
        t.matrix.push_back(xs);
      }
    }
    return t;
  }
  if (tracker == "bst_insert") {
    std::vector<Value> xs;
    const bool words = coin(r, 0.3);
    for (int i = uni(r, 0, 10); i > 0; --i) {
      xs.push_back(words ? Value{pick(r, kWords)} : Value{std::int64_t{uni(r, 0, 15)}});
    }
    return array_task("Tree", xs);
  }
  if (tracker == "chained_hash_insert") {
    TaskSpec t;
    t.family = "Hashtable";
    t.kind = InputKind::Pairs;
    for (int i = uni(r, 0, 12); i > 0; --i) {
      Value k = coin(r, 0.7) ? Value{std::int64_t{uni(r, -10, 30)}} : Value{pick(r, kWords)};
      t.pairs.emplace_back(k, std::int64_t{uni(r, 0, 99)});
    }
    if (coin(r)) t.capacity = uni(r, 1, 5);
    return t;
  }
  throw std::invalid_argument("no generator for " + tracker);
}

// --- oracles -----------------------------------------------------------------

namespace {

const AuxEntry* aux_entry(const VisualState& s, std::string_view view, const Value& key) {
  const auto* a = s.aux(view);
  if (!a) return nullptr;
  for (const auto& e : a->entries) {
    if (e.key && *e.key == key) return &e;
  }
  return nullptr;
}

std::vector<Value> aux_list(const VisualState& s, std::string_view view) {
  std::vector<Value> out;
  if (const auto* a = s.aux(view)) {
    for (const auto& e : a->entries) out.push_back(e.value);
  }
  return out;
}

bool trial_prime(std::int64_t x) {
  if (x < 2) return false;
  for (std::int64_t d = 2; d < x; ++d) {
    if (x % d == 0) return false;
  }
  return true;
}

std::string oracle_bubble(const TaskSpec& t, const std::vector<Operation>& word, const VisualState& s) {
  const auto& a = std::get<ArrayView>(s.main);
  std::vector<double> want;
  for (const auto& v : t.array) want.push_back(n_of(v));
  std::sort(want.begin(), want.end());
  if (a.elements.size() != want.size()) return "length changed";
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (n_of(a.elements[i].value) != want[i]) return fmt::format("a[{}] = {} but sorted order has {}", i, n_of(a.elements[i].value), want[i]);
    if (a.elements[i].style_key != "sorted") return fmt::format("a[{}] not styled sorted", i);
  }
  std::size_t inversions = 0;
  for (std::size_t i = 0; i < t.array.size(); ++i) {
    for (std::size_t j = i + 1; j < t.array.size(); ++j) inversions += n_of(t.array[i]) > n_of(t.array[j]) ? 1 : 0;
  }
  const auto swaps = static_cast<std::size_t>(
      std::count_if(word.begin(), word.end(), [](const Operation& o) { return o.code() == OpCode::MoveElements; }));
  if (swaps != inversions) return fmt::format("{} swaps for {} inversions", swaps, inversions);
  return {};
}

std::string oracle_two_pointer(const TaskSpec& t, const VisualState& s) {
  const double target = n_of(*t.target);
  bool exists = false;
  for (std::size_t i = 0; i < t.array.size(); ++i) {
    for (std::size_t j = i + 1; j < t.array.size(); ++j) exists |= n_of(t.array[i]) + n_of(t.array[j]) == target;
  }
  const auto* res = aux_entry(s, "search", Value{"result"});
  if (!res) return "no result entry";
  const auto text = std::get<std::string>(res->value);
  if (text == "none") return exists ? "reported none, but a pair exists" : "";
  const auto comma = text.find(',');
  const auto i = std::stoul(text.substr(0, comma));
  const auto j = std::stoul(text.substr(comma + 1));
  if (!(i < j && j < t.array.size())) return "bad pair indices " + text;
  if (n_of(t.array[i]) + n_of(t.array[j]) != target) return "reported pair does not sum to target";
  const auto& a = std::get<ArrayView>(s.main);
  if (a.elements[i].style_key != "found" || a.elements[j].style_key != "found") return "pair not styled found";
  return {};
}

std::string oracle_sieve(const TaskSpec& t, const VisualState& s) {
  const auto& a = std::get<ArrayView>(s.main);
  std::int64_t n = 0;
  for (std::size_t i = 0; i < t.array.size(); ++i) {
    const auto x = std::get<std::int64_t>(t.array[i]);
    n = std::max(n, x);
    const std::string want = trial_prime(x) ? "prime" : "composite";
    if (a.elements[i].style_key != want) return fmt::format("{} styled {}, expected {}", x, a.elements[i].style_key, want);
  }
  std::int64_t count = 0;
  for (std::int64_t x = 2; x <= n; ++x) count += trial_prime(x) ? 1 : 0;
  const auto* c = aux_entry(s, "result", Value{"count"});
  if (!c || c->value != Value{count}) return fmt::format("count differs from {}", count);
  return {};
}

std::string oracle_dijkstra(const TaskSpec& t, const VisualState& s) {
  const auto& g = t.graph;
  const std::string src = t.source.value_or(g.nodes.front().id);
  std::map<std::string, std::optional<double>> d;
  d[src] = 0.0;
  // Bellman-Ford: |V| - 1 rounds over both directions of undirected edges
  for (std::size_t round = 0; round < g.nodes.size(); ++round) {
    for (const auto& e : g.edges) {
      const double w = e.weight ? n_of(*e.weight) : 1.0;
      auto relax = [&](const std::string& u, const std::string& v) {
        if (d[u] && (!d[v] || *d[u] + w < *d[v])) d[v] = *d[u] + w;
      };
      relax(e.from, e.to);
      if (!e.directed) relax(e.to, e.from);
    }
  }
  const auto& view = std::get<GraphView>(s.main);
  std::set<std::string> reachable;
  for (const auto& n : g.nodes) {
    const auto* node = view.find(n.id);
    if (!node) return "node " + n.id + " missing";
    auto it = node->properties.find("distance");
    const Value got = it == node->properties.end() ? Value{} : it->second;
    if (d[n.id]) reachable.insert(n.id);
    if (is_null(got) != !d[n.id]) return "reachability of " + n.id + " differs";
    if (d[n.id] && n_of(got) != *d[n.id]) return fmt::format("dist[{}] = {} expected {}", n.id, n_of(got), *d[n.id]);
  }
  std::set<std::string> visited;
  for (const auto& v : aux_list(s, "visited")) visited.insert(std::get<std::string>(v));
  if (visited != reachable) return "visited set differs from the reachable set";
  return {};
}

std::string oracle_course(const TaskSpec& t, const VisualState& s) {
  const auto& g = t.graph;
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& e : g.edges) out[e.from].push_back(e.to);
  std::map<std::string, int> color;
  bool cycle = false;
  std::function<void(const std::string&)> dfs = [&](const std::string& u) {
    color[u] = 1;
    for (const auto& v : out[u]) {
      if (color[v] == 1) cycle = true;
      if (color[v] == 0) dfs(v);
    }
    color[u] = 2;
  };
  for (const auto& n : g.nodes) {
    if (color[n.id] == 0) dfs(n.id);
  }
  const auto* res = aux_entry(s, "result", Value{"can_finish"});
  if (!res) return "no can_finish entry";
  if (res->value != Value{cycle ? "false" : "true"}) return "can_finish disagrees with cycle detection";
  std::map<std::string, std::size_t> pos;
  for (const auto& v : aux_list(s, "order")) {
    const auto id = std::get<std::string>(v);
    if (pos.contains(id)) return "course " + id + " ordered twice";
    pos[id] = pos.size();
  }
  for (const auto& e : g.edges) {
    if (pos.contains(e.to) && (!pos.contains(e.from) || pos[e.from] >= pos[e.to])) {
      return "order puts " + e.to + " before its prerequisite " + e.from;
    }
  }
  // Kahn's order holds exactly the courses with no cyclic ancestor
  std::set<std::string> blocked;
  std::function<void(const std::string&)> block = [&](const std::string& u) {
    if (!blocked.insert(u).second) return;
    for (const auto& v : out[u]) block(v);
  };
  std::map<std::string, int> c2;
  std::function<bool(const std::string&, const std::string&)> reaches = [&](const std::string& a, const std::string& b) {
    std::set<std::string> seen;
    std::vector<std::string> stack{a};
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (const auto& v : out[u]) {
        if (v == b) return true;
        if (seen.insert(v).second) stack.push_back(v);
      }
    }
    return false;
  };
  for (const auto& n : g.nodes) {
    if (reaches(n.id, n.id)) block(n.id);
  }
  const auto& view = std::get<GraphView>(s.main);
  for (const auto& n : g.nodes) {
    if (blocked.contains(n.id) == pos.contains(n.id)) return "membership of " + n.id + " in the order is wrong";
    const bool stuck = view.find(n.id)->style_key == "cycle";
    if (stuck != blocked.contains(n.id)) return "cycle styling of " + n.id + " is wrong";
  }
  return {};
}

std::string oracle_knapsack(const TaskSpec& t, const VisualState& s) {
  const auto& tab = std::get<TableView>(s.main);
  const auto n = static_cast<std::int64_t>(t.pairs.size());
  const auto cap = *t.capacity;
  if (tab.rows != n + 1 || tab.cols != cap + 1) return "table shape";
  for (std::int64_t i = 0; i <= n; ++i) {
    for (std::int64_t c = 0; c <= cap; ++c) {
      std::int64_t best = 0;
      for (std::uint32_t mask = 0; mask < (1u << i); ++mask) {
        std::int64_t w = 0;
        std::int64_t v = 0;
        for (std::int64_t k = 0; k < i; ++k) {
          if (mask >> k & 1u) {
            w += std::get<std::int64_t>(t.pairs[static_cast<std::size_t>(k)].first);
            v += std::get<std::int64_t>(t.pairs[static_cast<std::size_t>(k)].second);
          }
        }
        if (w <= c) best = std::max(best, v);
      }
      if (tab.at(i, c).value != Value{best}) return fmt::format("dp[{}][{}] expected {}", i, c, best);
    }
  }
  if (tab.at(n, cap).style_key != "answer") return "answer cell not styled";
  return {};
}

std::string oracle_lcs(const TaskSpec& t, const VisualState& s) {
  auto seq = [](const std::vector<Value>& row) {
    if (row.size() == 1 && std::holds_alternative<std::string>(row[0])) {
      std::vector<Value> out;
      for (char c : std::get<std::string>(row[0])) out.push_back(std::string(1, c));
      return out;
    }
    return row;
  };
  const auto a = seq(t.matrix[0]);
  const auto b = seq(t.matrix[1]);
  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> memo;
  std::function<std::int64_t(std::size_t, std::size_t)> lcs = [&](std::size_t i, std::size_t j) -> std::int64_t {
    if (i == 0 || j == 0) return 0;
    if (auto it = memo.find({i, j}); it != memo.end()) return it->second;
    const auto r = a[i - 1] == b[j - 1] ? lcs(i - 1, j - 1) + 1 : std::max(lcs(i - 1, j), lcs(i, j - 1));
    return memo[{i, j}] = r;
  };
  const auto& tab = std::get<TableView>(s.main);
  for (std::size_t i = 0; i <= a.size(); ++i) {
    for (std::size_t j = 0; j <= b.size(); ++j) {
      if (tab.at(static_cast<std::int64_t>(i), static_cast<std::int64_t>(j)).value != Value{lcs(i, j)}) {
        return fmt::format("L[{}][{}] expected {}", i, j, lcs(i, j));
      }
    }
  }
  const auto* len = aux_entry(s, "result", Value{"length"});
  if (!len || len->value != Value{lcs(a.size(), b.size())}) return "length entry differs";
  return {};
}

std::string oracle_bst(const TaskSpec& t, const VisualState& s) {
  std::vector<Value> keys;
  for (const auto& k : t.array) {
    if (std::none_of(keys.begin(), keys.end(), [&](const Value& x) { return key_text(x) == key_text(k); })) keys.push_back(k);
  }
  const auto& tree = std::get<TreeView>(s.main);
  if (tree.nodes.size() != keys.size()) return fmt::format("{} nodes for {} distinct keys", tree.nodes.size(), keys.size());
  if (keys.empty()) return {};
  const auto roots = tree.roots();
  if (roots.size() != 1 || roots[0] != key_text(keys[0])) return "root is not the first key";
  std::vector<std::string> inorder;
  std::function<void(const std::string&)> walk = [&](const std::string& id) {
    const auto* n = tree.find(id);
    if (n->children.size() > 2) throw std::runtime_error("more than two child slots");
    if (n->children.size() > 0 && n->children[0]) walk(*n->children[0]);
    inorder.push_back(id);
    if (n->children.size() > 1 && n->children[1]) walk(*n->children[1]);
  };
  try {
    walk(roots[0]);
  } catch (const std::exception& e) {
    return e.what();
  }
  std::sort(keys.begin(), keys.end(), [](const Value& x, const Value& y) {
    if (is_number(x)) return n_of(x) < n_of(y);
    return std::get<std::string>(x) < std::get<std::string>(y);
  });
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (inorder[i] != key_text(keys[i])) return "in-order traversal is not the sorted key list";
  }
  return {};
}

std::int64_t oracle_hash(const Value& k, std::int64_t cap) {
  if (const auto* i = std::get_if<std::int64_t>(&k)) {
    auto m = *i % cap;
    return m < 0 ? m + cap : m;
  }
  std::uint32_t h = 0x811C9DC5u;
  for (unsigned char c : std::get<std::string>(k)) h = (h ^ c) * 0x01000193u;
  return static_cast<std::int64_t>(h % static_cast<std::uint32_t>(cap));
}

std::string oracle_hash_table(const TaskSpec& t, const VisualState& s) {
  std::vector<std::pair<Value, Value>> want;  // last write wins, first-insertion order
  for (const auto& [k, v] : t.pairs) {
    auto it = std::find_if(want.begin(), want.end(), [&](const auto& e) { return e.first == k; });
    if (it == want.end()) {
      want.emplace_back(k, v);
    } else {
      it->second = v;
    }
  }
  const auto& h = std::get<HashtableView>(s.main);
  const auto cap = static_cast<std::int64_t>(h.buckets.size());
  const auto initial = t.capacity.value_or(4);
  std::int64_t c = initial;
  while (c < cap) c *= 2;
  if (c != cap) return "capacity is not a doubling of the initial one";
  const double size = static_cast<double>(want.size());
  if (size / static_cast<double>(cap) > 0.75) return "final load factor above 0.75";
  if (cap > initial && size / static_cast<double>(cap / 2) <= 0.75) return "rehashed without need";
  std::size_t stored = 0;
  for (std::int64_t b = 0; b < cap; ++b) {
    for (const auto& e : h.buckets[static_cast<std::size_t>(b)]) {
      ++stored;
      if (oracle_hash(e.key, cap) != b) return "key " + key_text(e.key) + " in the wrong bucket";
      auto it = std::find_if(want.begin(), want.end(), [&](const auto& w) { return w.first == e.key; });
      if (it == want.end()) return "unexpected key " + key_text(e.key);
      if (it->second != e.value) return "stale value for " + key_text(e.key);
    }
  }
  if (stored != want.size()) return fmt::format("{} entries stored, {} expected", stored, want.size());
  return {};
}

}  // namespace

std::string check_oracle(const std::string& tracker, const TaskSpec& task, const std::vector<Operation>& word,
                         const VisualState& s) {
  if (tracker == "bubble_sort") return oracle_bubble(task, word, s);
  if (tracker == "two_pointer_search") return oracle_two_pointer(task, s);
  if (tracker == "sieve_of_eratosthenes") return oracle_sieve(task, s);
  if (tracker == "dijkstra") return oracle_dijkstra(task, s);
  if (tracker == "bfs_course_schedule") return oracle_course(task, s);
  if (tracker == "knapsack_01") return oracle_knapsack(task, s);
  if (tracker == "lcs_table") return oracle_lcs(task, s);
  if (tracker == "bst_insert") return oracle_bst(task, s);
  if (tracker == "chained_hash_insert") return oracle_hash_table(task, s);
  return "no oracle for " + tracker;
}

// --- random states and words -------------------------------------------------------

namespace {

const std::vector<std::string> kStyleKeys = {"idle", "a", "b"};

}  // namespace

VisualState random_state(Rng& r, int max_elements) {
  VisualState s;
  s.styles = default_styles();
  s.styles["a"] = StyleDef{"#E74C3C", std::nullopt, std::nullopt};
  s.styles["b"] = StyleDef{"#27AE60", std::nullopt, std::nullopt};
  s.pseudocode = {"one", "two", "three"};
  s.auxiliary_views.push_back(AuxView{"L", AuxKind::List, {}});
  s.auxiliary_views.push_back(AuxView{"M", AuxKind::Map, {}});
  const int n = uni(r, 0, max_elements);
  if (coin(r)) {
    ArrayView a;
    for (int i = 0; i < n; ++i) a.elements.push_back({Value{std::int64_t{uni(r, -9, 9)}}, pick(r, kStyleKeys)});
    if (n > 0 && coin(r)) a.pointers["p"] = uni(r, 0, n - 1);
    s.main = a;
  } else {
    GraphView g;
    for (int i = 0; i < n; ++i) g.nodes.push_back({fmt::format("n{}", i), fmt::format("n{}", i), pick(r, kStyleKeys), {}});
    for (int k = n > 0 ? uni(r, 0, 2 * n) : 0; k > 0; --k) {
      g.edges.push_back({fmt::format("n{}", uni(r, 0, n - 1)), fmt::format("n{}", uni(r, 0, n - 1)),
                         Value{std::int64_t{uni(r, 1, 5)}}, coin(r), pick(r, kStyleKeys)});
    }
    s.main = g;
  }
  return s;
}

Operation random_op(const VisualState& s, Rng& r) {
  const bool array = std::holds_alternative<ArrayView>(s.main);
  const int size = array ? static_cast<int>(std::get<ArrayView>(s.main).elements.size())
                         : static_cast<int>(std::get<GraphView>(s.main).nodes.size());
  // mostly in range; the rest just past either end
  const bool empty = size == 0;
  auto index = [&] {
    return std::int64_t{!empty && coin(r, 0.9) ? uni(r, 0, size - 1) : (coin(r) ? -1 : size)};
  };
  auto node = [&] { return fmt::format("n{}", !empty && coin(r, 0.9) ? uni(r, 0, size - 1) : uni(r, size, size + 1)); };
  auto element = [&] { return array ? std::to_string(index()) : node(); };
  switch (uni(r, 0, 9)) {
    case 0: return op::ShowComment{fmt::format("c{}", uni(r, 0, 1)), "note", coin(r) ? std::optional<Anchor>(Anchor{"main", element()}) : std::nullopt};
    case 1: return op::HideComment{fmt::format("c{}", uni(r, 0, 1))};
    case 2: {
      const bool list = coin(r);
      const bool keyed = coin(r, 0.9) ? !list : list;
      return op::AppendToList{list ? "L" : "M", AuxEntry{keyed ? std::optional<Value>(Value{std::int64_t{uni(r, 0, 3)}}) : std::nullopt, Value{std::int64_t{uni(r, 0, 9)}}, "idle"}};
    }
    case 3: return op::PopFromList{coin(r) ? "L" : "M", coin(r) ? ListEnd::Front : ListEnd::Back};
    default: break;
  }
  if (array) {
    switch (uni(r, 0, 5)) {
      case 0: return op::UpdateStyle{{index(), index()}, pick(r, kStyleKeys)};
      case 1: return op::MoveElements{{{index(), index()}, {index(), index()}}};
      case 2: {
        const auto a = std::int64_t{uni(r, 0, size)};
        return op::ShiftElements{{a, std::int64_t{uni(r, static_cast<int>(a), size)}}, std::int64_t{uni(r, -2, 2)}};
      }
      case 3: return op::UpdateValues{{{index(), Value{std::int64_t{uni(r, -9, 9)}}}}};
      case 4: return op::SetPointer{coin(r) ? "p" : "q", coin(r, 0.8) ? std::optional<std::int64_t>(index()) : std::nullopt};
      default: {
        const auto& ptrs = std::get<ArrayView>(s.main).pointers;
        return op::ClearPointer{!ptrs.empty() && coin(r, 0.8) ? ptrs.begin()->first : (coin(r) ? "p" : "q")};
      }
    }
  }
  switch (uni(r, 0, 4)) {
    case 0: return op::UpdateNodeStyle{{node()}, pick(r, kStyleKeys)};
    case 1: return op::UpdateNodeProperties{node(), {{"d", Value{std::int64_t{uni(r, 0, 9)}}}}};
    case 2: {
      const auto& edges = std::get<GraphView>(s.main).edges;
      if (!edges.empty() && coin(r, 0.8)) {
        const auto& e = pick(r, edges);
        return op::UpdateEdgeStyle{{{e.from, e.to}}, pick(r, kStyleKeys)};
      }
      return op::UpdateEdgeStyle{{{node(), node()}}, pick(r, kStyleKeys)};
    }
    case 3: return op::AddNode{GraphNode{coin(r, 0.8) ? fmt::format("m{}", uni(r, 0, 99)) : node(), "new", "idle", {}}};
    default: return op::RemoveNode{node()};
  }
}

std::vector<Operation> random_word(const VisualState& s, Rng& r, int max_len) {
  std::vector<Operation> w;
  // each op is drawn against the state reached so far, so later ops can
  // refer to what earlier ones created; undefined draws are mostly redrawn
  VisualState cur = s;
  for (int i = uni(r, 0, max_len); i > 0; --i) {
    for (int attempt = 0;; ++attempt) {
      auto o = random_op(cur, r);
      try {
        cur = apply_operation(cur, o);
      } catch (const ApplyError&) {
        if (attempt < 4 && !coin(r, 0.1)) continue;
      }
      w.push_back(std::move(o));
      break;
    }
  }
  return w;
}

// --- rsl documents -------------------------------------------------------------------

std::string random_rsl(Rng& r) {
  using nlohmann::ordered_json;
  ordered_json doc = {
      {"meta", {{"rsl_version", "0.1"}}},
      {"theme", {{"background", "#1A1A1A"}, {"text", "#FFFFFF"}, {"primary", "#3498DB"}}},
      {"timeline", {{"transition", 0.5}, {"pause", 0.3}}},
      {"layout", {{"main", {{"type", "grid"}, {"params", {{"node_spacing", 2.0}, {"cell_size", 0.8}}}}}}},
      {"rules", ordered_json::array({{{"when", {{"op", "updateStyle"}}}, {"do", {{"animation", {{"variant", "pulse"}, {"duration", 0.5}}}}}}})},
  };
  const std::vector<std::string> pointers = {
      "/timeline/transition", "/timeline/pause", "/layout/main/params/node_spacing", "/layout/main/params/edge_curve",
      "/layout/main/params/cell_size", "/rules/0/do/animation/duration", "/layout/main/type", "/theme/primary",
      "/rules/0/when/op", "/rules/0/do/animation/variant", "/meta/rsl_version", "/theme", "/rules", "/meta"};
  const std::vector<ordered_json> junk = {
      -1e9, -1.0, -0.0001, 0.0, 0.05, 0.1, 1.0, 2.0, 2.0001, 10.0, 10.5, 1e12, "fast", "#GGGGGG", "#123", nullptr,
      true, ordered_json::array(), ordered_json::object(), "spiral", "teleport", "wobble", "0.2", 3};
  switch (uni(r, 0, 5)) {
    case 0: {  // truncated or corrupted bytes
      auto text = doc.dump();
      text.resize(static_cast<std::size_t>(uni(r, 0, static_cast<int>(text.size()))));
      if (coin(r)) text += pick(r, std::vector<std::string>{"}", ",,", "NaN", "Infinity", "\x01", "]"});
      return text;
    }
    case 1:
      return pick(r, std::vector<std::string>{"[]", "42", "\"rsl\"", "null", "", "{}", "{\"meta\": 1}"});
    case 5:
      return doc.dump(2);
    default: {
      for (int k = uni(r, 1, 3); k > 0; --k) {
        const ordered_json::json_pointer p(pick(r, pointers));
        try {
          doc[p] = pick(r, junk);
        } catch (const nlohmann::json::exception&) {
          // an earlier mutation replaced a parent with a scalar
        }
      }
      if (coin(r, 0.2)) doc["extra_field"] = 1;
      return doc.dump(2);
    }
  }
}

}  // namespace vta::testing
