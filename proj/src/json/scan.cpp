#include <cctype>

#include <fmt/format.h>

#include "decoder.hpp"

namespace vta::json::detail {

namespace {

struct Frame {
  bool object = false;
  std::size_t index = 0;
  std::string key;
};

bool bare_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.' ||
         c == '_';
}

bool nonfinite_token(std::string_view t) {
  return t == "Infinity" || t == "-Infinity" || t == "+Infinity" || t == "NaN" || t == "-NaN" ||
         t == "+NaN" || t == "inf" || t == "-inf";
}

std::string current_path(const std::vector<Frame>& stack) {
  std::string path;
  for (const auto& f : stack) {
    path += f.object ? child("", f.key) : child("", f.index);
  }
  return path;
}

}  // namespace

ScanResult scan_nonfinite(std::string_view text) {
  ScanResult result;
  result.sanitized.reserve(text.size());
  std::vector<Frame> stack;
  bool expect_key = false;

  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '"') {
      const std::size_t start = i++;
      std::string decoded;
      while (i < text.size() && text[i] != '"') {
        if (text[i] == '\\' && i + 1 < text.size()) {
          const char e = text[i + 1];
          switch (e) {
            case 'n': decoded += '\n'; break;
            case 't': decoded += '\t'; break;
            case 'r': decoded += '\r'; break;
            case 'b': decoded += '\b'; break;
            case 'f': decoded += '\f'; break;
            case 'u': decoded += "\\u"; break;
            default: decoded += e; break;
          }
          i += 2;
        } else {
          decoded += text[i++];
        }
      }
      if (i < text.size()) ++i;
      result.sanitized.append(text.substr(start, i - start));
      if (!stack.empty() && stack.back().object && expect_key) {
        stack.back().key = std::move(decoded);
        expect_key = false;
      }
      continue;
    }
    if (c == '{' || c == '[') {
      stack.push_back(Frame{c == '{', 0, {}});
      expect_key = c == '{';
      result.sanitized += c;
      ++i;
      continue;
    }
    if (c == '}' || c == ']') {
      if (!stack.empty()) stack.pop_back();
      expect_key = false;
      result.sanitized += c;
      ++i;
      continue;
    }
    if (c == ',') {
      if (!stack.empty()) {
        if (stack.back().object) {
          expect_key = true;
        } else {
          ++stack.back().index;
        }
      }
      result.sanitized += c;
      ++i;
      continue;
    }
    if (bare_char(c)) {
      const std::size_t start = i;
      while (i < text.size() && bare_char(text[i])) ++i;
      const auto token = text.substr(start, i - start);
      if (nonfinite_token(token)) {
        result.nonfinite.push_back(current_path(stack));
        result.sanitized += "null";
      } else {
        result.sanitized.append(token);
      }
      continue;
    }
    result.sanitized += c;
    ++i;
  }
  return result;
}

std::optional<ordered_json> parse_document(std::string_view text, std::vector<Diagnostic>& out,
                                           bool& syntax_error) {
  Sink sink(out);
  auto scanned = scan_nonfinite(text);
  for (auto& path : scanned.nonfinite) {
    sink.error(code::kInfinityToken, std::move(path),
               "non-finite numeric token is not valid JSON; use null for undefined");
  }
  try {
    syntax_error = false;
    return ordered_json::parse(scanned.sanitized);
  } catch (const nlohmann::json::parse_error& e) {
    syntax_error = true;
    sink.error(code::kSyntaxError, "", fmt::format("malformed JSON at byte {}: {}", e.byte, e.what()));
    return std::nullopt;
  }
}

std::string_view type_name(const ordered_json& j) {
  if (j.is_number_integer()) return "integer";
  if (j.is_number_float()) return "number";
  return j.type_name();
}

}  // namespace vta::json::detail
