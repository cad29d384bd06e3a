#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include <fmt/format.h>

#include "vta/trackers/trackers.hpp"

namespace vta::trackers {

using core::Value;

std::string_view to_string(InputKind kind) {
  switch (kind) {
    case InputKind::Array: return "array";
    case InputKind::Graph: return "graph";
    case InputKind::Matrix: return "matrix";
    case InputKind::Pairs: return "pairs";
  }
  return "array";
}

namespace {

constexpr std::string_view kFamilies[] = {"Array", "DP", "Sorting", "Graph", "Tree", "Hashtable"};

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  if (out.size() > 1 && out.back().empty()) out.pop_back();  // text ended with a newline
  return out;
}

// --- relaxed literal -> JSON -------------------------------------------------

struct Token {
  enum Kind { Punct, String, Word, Ellipsis, Space } kind;
  std::string text;
};

/// Splits a Python-ish literal into tokens. Newlines survive inside Space
/// tokens so parse errors keep their line numbers.
std::vector<Token> tokenize(std::string_view s, std::size_t first_line) {
  std::vector<Token> out;
  std::size_t line = first_line;
  for (std::size_t i = 0; i < s.size();) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      std::string ws;
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) {
        if (s[i] == '\n') ++line;
        ws += s[i++];
      }
      out.push_back({Token::Space, ws});
    } else if (c == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (c == '"' || c == '\'') {
      std::string text = "\"";
      ++i;
      bool closed = false;
      while (i < s.size()) {
        char d = s[i++];
        if (d == '\\' && i < s.size()) {
          const char e = s[i++];
          if (e == '\'') {
            text += '\'';
          } else {
            text += '\\';
            text += e;
          }
        } else if (d == c) {
          closed = true;
          break;
        } else if (d == '"') {
          text += "\\\"";
        } else if (d == '\n') {
          throw MalformedTask(line, "unterminated string in input_data");
        } else {
          text += d;
        }
      }
      if (!closed) throw MalformedTask(line, "unterminated string in input_data");
      out.push_back({Token::String, text + "\""});
    } else if (s.substr(i).starts_with("...") || s.substr(i).starts_with("…")) {
      i += s.substr(i).starts_with("...") ? 3 : std::string_view("…").size();
      out.push_back({Token::Ellipsis, ""});
    } else if (std::string_view("{}[]:,").find(c) != std::string_view::npos) {
      out.push_back({Token::Punct, std::string(1, c)});
      ++i;
    } else {
      std::string word;
      while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) &&
             std::string_view("{}[]:,#\"'").find(s[i]) == std::string_view::npos) {
        word += s[i++];
      }
      if (word.empty()) throw MalformedTask(line, fmt::format("unexpected character '{}' in input_data", c));
      if (word == "True") word = "true";
      else if (word == "False") word = "false";
      else if (word == "None") word = "null";
      out.push_back({Token::Word, word});
    }
  }
  return out;
}

std::string to_json_text(std::string_view literal, std::size_t first_line) {
  auto tokens = tokenize(literal, first_line);
  std::erase_if(tokens, [](const Token& t) { return t.kind == Token::Ellipsis; });
  // drop commas left dangling by elisions or written as trailing commas
  auto significant = [&](std::size_t from, int dir) -> const Token* {
    for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(from) + dir; k >= 0 && k < static_cast<std::ptrdiff_t>(tokens.size());
         k += dir) {
      if (tokens[static_cast<std::size_t>(k)].kind != Token::Space) return &tokens[static_cast<std::size_t>(k)];
    }
    return nullptr;
  };
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    if (t.kind == Token::Punct && t.text == ",") {
      const Token* next = significant(i, +1);
      const Token* prev = significant(i, -1);
      const bool closes = next && next->kind == Token::Punct && (next->text == "]" || next->text == "}" || next->text == ",");
      const bool opens = prev && prev->kind == Token::Punct && (prev->text == "[" || prev->text == "{");
      if (closes || opens) continue;
    }
    out += t.text;
  }
  return out;
}

/// Finds `input_data = {...}`; returns the literal and its first line (1-based).
std::optional<std::pair<std::string, std::size_t>> input_block(const std::vector<std::string_view>& lines) {
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto t = trim(lines[i]);
    if (!t.starts_with("input_data")) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw MalformedTask(i + 1, "expected '=' after input_data");
    std::string text = trim(std::string_view(t).substr(eq + 1));
    std::size_t first = i + 1;
    int depth = 0;
    char quote = 0;
    std::string literal;
    auto feed = [&](std::string_view chunk) -> bool {
      for (std::size_t k = 0; k < chunk.size(); ++k) {
        const char c = chunk[k];
        literal += c;
        if (quote) {
          if (c == '\\') {
            if (k + 1 < chunk.size()) literal += chunk[++k];
          } else if (c == quote) {
            quote = 0;
          }
          continue;
        }
        if (c == '"' || c == '\'') quote = c;
        else if (c == '{' || c == '[') ++depth;
        else if (c == '}' || c == ']') {
          if (--depth == 0) return true;
        }
      }
      return false;
    };
    bool started = false;
    for (std::size_t j = i; j < lines.size(); ++j) {
      std::string_view chunk = j == i ? std::string_view(text) : lines[j];
      if (!started) {
        const auto u = trim(chunk);
        if (u.empty()) continue;
        if (u[0] != '{') throw MalformedTask(j + 1, "input_data must be an object literal");
        started = true;
        first = j + 1;
        chunk = chunk.substr(chunk.find('{'));
      } else {
        literal += '\n';
      }
      if (feed(chunk)) return std::pair{literal, first};
    }
    throw MalformedTask(first, "input_data block is never closed");
  }
  return std::nullopt;
}

std::size_t line_of_byte(std::string_view text, std::size_t byte, std::size_t first_line) {
  byte = std::min(byte, text.size());
  return first_line + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

// --- input_data -> TaskSpec --------------------------------------------------

Value value_of(const ordered_json& j, std::size_t line, std::string_view what) {
  if (j.is_null()) return {};
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw MalformedTask(line, fmt::format("{}: expected a number, string or null", what));
}

std::string id_of(const ordered_json& j, std::size_t line, std::string_view what) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  throw MalformedTask(line, fmt::format("{}: expected a string or integer id", what));
}

const ordered_json& array_at(const ordered_json& j, std::string_view key, std::size_t line) {
  const auto& v = j.at(std::string(key));
  if (!v.is_array()) throw MalformedTask(line, fmt::format("'{}' must be a list", key));
  return v;
}

GraphInput graph_of(const ordered_json& g, std::size_t line) {
  if (!g.is_object()) throw MalformedTask(line, "'graph' must be an object");
  GraphInput out;
  std::set<std::string> seen;
  if (g.contains("nodes")) {
    for (const auto& n : array_at(g, "nodes", line)) {
      InputNode node;
      if (n.is_object()) {
        if (!n.contains("id")) throw MalformedTask(line, "graph node without 'id'");
        node.id = id_of(n.at("id"), line, "node id");
        node.label = n.contains("label") ? id_of(n.at("label"), line, "node label") : node.id;
      } else {
        node.id = id_of(n, line, "node");
        node.label = node.id;
      }
      if (!seen.insert(node.id).second) throw MalformedTask(line, "duplicate graph node '" + node.id + "'");
      out.nodes.push_back(std::move(node));
    }
  }
  if (g.contains("edges")) {
    for (const auto& e : array_at(g, "edges", line)) {
      InputEdge edge;
      if (e.is_object()) {
        if (!e.contains("from") || !e.contains("to")) throw MalformedTask(line, "graph edge needs 'from' and 'to'");
        edge.from = id_of(e.at("from"), line, "edge from");
        edge.to = id_of(e.at("to"), line, "edge to");
        if (e.contains("weight")) edge.weight = value_of(e.at("weight"), line, "edge weight");
        if (e.contains("directed")) {
          if (!e.at("directed").is_boolean()) throw MalformedTask(line, "edge 'directed' must be a boolean");
          edge.directed = e.at("directed").get<bool>();
        }
      } else if (e.is_array() && (e.size() == 2 || e.size() == 3)) {
        edge.from = id_of(e[0], line, "edge from");
        edge.to = id_of(e[1], line, "edge to");
        if (e.size() == 3) edge.weight = value_of(e[2], line, "edge weight");
      } else {
        throw MalformedTask(line, "graph edge must be an object or [from, to(, weight)]");
      }
      for (const auto* end : {&edge.from, &edge.to}) {
        if (seen.insert(*end).second) out.nodes.push_back({*end, *end});
      }
      out.edges.push_back(std::move(edge));
    }
  }
  return out;
}

TaskSpec from_input(const ordered_json& in, std::string family, std::size_t line) {
  if (!in.is_object()) throw MalformedTask(line, "input_data must be an object");
  TaskSpec t;
  t.family = std::move(family);
  int kinds = 0;
  for (const auto& [key, v] : in.items()) {
    if (key == "array") {
      ++kinds;
      t.kind = InputKind::Array;
      if (!v.is_array()) throw MalformedTask(line, "'array' must be a list");
      for (const auto& x : v) t.array.push_back(value_of(x, line, "array element"));
    } else if (key == "graph") {
      ++kinds;
      t.kind = InputKind::Graph;
      t.graph = graph_of(v, line);
    } else if (key == "matrix") {
      ++kinds;
      t.kind = InputKind::Matrix;
      if (!v.is_array()) throw MalformedTask(line, "'matrix' must be a list of rows");
      for (const auto& row : v) {
        if (!row.is_array()) throw MalformedTask(line, "'matrix' rows must be lists");
        auto& r = t.matrix.emplace_back();
        for (const auto& x : row) r.push_back(value_of(x, line, "matrix cell"));
      }
    } else if (key == "pairs") {
      ++kinds;
      t.kind = InputKind::Pairs;
      if (!v.is_array()) throw MalformedTask(line, "'pairs' must be a list");
      for (const auto& p : v) {
        if (!p.is_array() || p.size() != 2) throw MalformedTask(line, "each pair must be a two-element list");
        t.pairs.emplace_back(value_of(p[0], line, "pair key"), value_of(p[1], line, "pair value"));
      }
    } else if (key == "source") {
      t.source = id_of(v, line, "source");
    } else if (key == "target") {
      t.target = value_of(v, line, "target");
    } else if (key == "capacity") {
      if (!v.is_number_integer()) throw MalformedTask(line, "'capacity' must be an integer");
      t.capacity = v.get<std::int64_t>();
    } else {
      throw MalformedTask(line, "unknown input_data key '" + key + "'");
    }
  }
  if (kinds != 1) throw MalformedTask(line, "input_data needs exactly one of array, graph, matrix, pairs");
  if (t.source && t.kind != InputKind::Graph) throw MalformedTask(line, "'source' only applies to graph input");
  return t;
}

/// "(Graph)" at the end of a request names the family.
std::string family_hint(std::string_view text) {
  for (auto close = text.rfind(')'); close != std::string_view::npos && close > 0; close = text.rfind(')', close - 1)) {
    const auto open = text.rfind('(', close);
    if (open == std::string_view::npos) break;
    const auto inner = trim(text.substr(open + 1, close - open - 1));
    for (auto f : kFamilies) {
      if (inner == f) return inner;
    }
    if (open == 0) break;
    close = open;
  }
  return {};
}

}  // namespace

TaskSpec task_from_input(const ordered_json& input_data, std::string family) {
  return from_input(input_data, std::move(family), 0);
}

std::string peek_family(std::string_view text) {
  for (const auto line : split_lines(text)) {
    const auto t = trim(line);
    if (t.starts_with("input_data")) break;
    if (!t.starts_with("- ")) continue;
    const auto colon = t.find(':');
    if (colon != std::string::npos && trim(std::string_view(t).substr(2, colon - 2)) == "Family") {
      return trim(std::string_view(t).substr(colon + 1));
    }
  }
  return {};
}

TaskSpec parse_task_file(std::string_view text) {
  const auto lines = split_lines(text);
  if (std::all_of(lines.begin(), lines.end(), [](auto l) { return trim(l).empty(); })) {
    throw MalformedTask(1, "empty task file");
  }

  struct Meta {
    std::string key;
    std::string value;
    std::size_t line;
  };
  std::vector<Meta> meta;
  std::string title;
  std::size_t input_line = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto t = trim(lines[i]);
    if (t.empty()) continue;
    if (t.starts_with("input_data")) break;
    if (t.starts_with("Algorithm Snippet")) {
      const auto open = t.find('(');
      const auto close = t.rfind(')');
      if (open != std::string::npos && close != std::string::npos && close > open) {
        title = trim(std::string_view(t).substr(open + 1, close - open - 1));
      }
      continue;
    }
    if (t.starts_with("- ")) {
      const auto colon = t.find(':');
      if (colon == std::string::npos) throw MalformedTask(i + 1, "metadata line without ':'");
      Meta m{trim(std::string_view(t).substr(2, colon - 2)), trim(std::string_view(t).substr(colon + 1)), i + 1};
      if (m.key == "Input") input_line = i + 1;
      meta.push_back(std::move(m));
      continue;
    }
    if (!meta.empty() && std::isspace(static_cast<unsigned char>(lines[i][0]))) {
      auto& last = meta.back().value;  // wrapped continuation
      last += last.empty() ? t : " " + t;
      continue;
    }
    throw MalformedTask(i + 1, "unexpected line: " + t);
  }

  const auto block = input_block(lines);
  if (!block) throw MalformedTask(input_line ? input_line : lines.size(), "missing input_data block");
  const auto json_text = to_json_text(block->first, block->second);
  ordered_json data;
  try {
    data = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedTask(line_of_byte(json_text, e.byte > 0 ? e.byte - 1 : 0, block->second),
                        "input_data is not a valid literal");
  }

  TaskSpec task = from_input(data, {}, block->second);
  task.title = title;
  for (const auto& m : meta) {
    if (m.key == "LeetCode Problem ID" || m.key == "Problem ID") {
      std::int64_t id = 0;
      const auto* end = m.value.data() + m.value.size();
      auto [p, ec] = std::from_chars(m.value.data(), end, id);
      if (ec != std::errc{} || p != end) throw MalformedTask(m.line, "problem id must be an integer");
      task.problem_id = id;
    } else if (m.key == "Difficulty") {
      task.difficulty = m.value;
    } else if (m.key == "Family") {
      task.family = m.value;
    } else if (m.key == "Goal") {
      task.goal = m.value;
    } else if (m.key == "User Request") {
      task.request = m.value;
    } else if (m.key == "Tracker") {
      task.tracker = m.value;
    }
  }
  if (task.family.empty()) task.family = family_hint(task.request);
  if (task.family.empty()) task.family = family_hint(task.title);
  if (!task.family.empty() &&
      std::find(std::begin(kFamilies), std::end(kFamilies), task.family) == std::end(kFamilies)) {
    for (const auto& m : meta) {
      if (m.key == "Family") throw MalformedTask(m.line, "unknown family '" + task.family + "'");
    }
  }
  return task;
}

}  // namespace vta::trackers
