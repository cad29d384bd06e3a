#pragma once

// Internal decoding helpers shared by the trace reader and the RSL validator.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vta/core/value.hpp"
#include "vta/json/diagnostic.hpp"
#include "vta/json/trace.hpp"

namespace vta::json::detail {

struct ScanResult {
  std::string sanitized;               // non-finite tokens replaced by null
  std::vector<std::string> nonfinite;  // pointer of each replaced token
};

/// Lexical pass that locates bare Infinity/-Infinity/NaN tokens. Structure
/// errors are left for the real parser to report.
ScanResult scan_nonfinite(std::string_view text);

/// Parses text into a DOM, turning non-finite tokens and syntax errors into
/// diagnostics. Returns nullopt on a syntax error.
std::optional<ordered_json> parse_document(std::string_view text, std::vector<Diagnostic>& out,
                                           bool& syntax_error);

inline std::string child(const std::string& path, std::string_view key) {
  return path + "/" + pointer_token(key);
}
inline std::string child(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

std::string_view type_name(const ordered_json& j);

/// Diagnostic sink with the collection cap and a current delta context.
class Sink {
 public:
  explicit Sink(std::vector<Diagnostic>& out) : out_(out) {}

  void error(std::string_view code, std::string path, std::string message) {
    add(Severity::Error, code, std::move(path), std::move(message));
  }
  void warning(std::string_view code, std::string path, std::string message) {
    add(Severity::Warning, code, std::move(path), std::move(message));
  }
  std::size_t error_count() const { return errors_; }
  void set_delta(std::optional<std::size_t> d) { delta_ = d; }

 private:
  void add(Severity s, std::string_view code, std::string path, std::string message) {
    if (s == Severity::Error) ++errors_;
    if (out_.size() >= kDiagnosticCap) return;
    out_.push_back(Diagnostic{s, std::string(code), std::move(path), std::move(message), delta_});
  }

  std::vector<Diagnostic>& out_;
  std::optional<std::size_t> delta_;
  std::size_t errors_ = 0;
};

/// Field access over one JSON object with missing/unknown key reporting.
class Fields {
 public:
  /// `strict` objects report unknown keys as errors with `code`; others emit
  /// an UNKNOWN_FIELD warning.
  Fields(Sink& sink, const ordered_json& obj, std::string path, std::string_view code, bool strict)
      : sink_(sink), obj_(obj), path_(std::move(path)), code_(code), strict_(strict) {}

  const ordered_json* required(std::string_view key) {
    seen_.emplace_back(key);
    auto it = obj_.find(std::string(key));
    if (it == obj_.end()) {
      sink_.error(strict_ ? code_ : code::kMissingField, path_,
                  "missing required field '" + std::string(key) + "'");
      ok_ = false;
      return nullptr;
    }
    return &*it;
  }

  const ordered_json* optional(std::string_view key) {
    seen_.emplace_back(key);
    auto it = obj_.find(std::string(key));
    return it == obj_.end() ? nullptr : &*it;
  }

  std::string path(std::string_view key) const { return child(path_, key); }
  const std::string& path() const { return path_; }

  void finish() {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      bool known = false;
      for (const auto& k : seen_) known = known || k == it.key();
      if (known) continue;
      if (strict_) {
        sink_.error(code_, child(path_, it.key()), "unexpected field '" + it.key() + "'");
        ok_ = false;
      } else {
        sink_.warning(code::kUnknownField, child(path_, it.key()),
                      "field '" + it.key() + "' is ignored");
      }
    }
  }

  bool ok() const { return ok_; }
  void fail() { ok_ = false; }

 private:
  Sink& sink_;
  const ordered_json& obj_;
  std::string path_;
  std::string_view code_;
  bool strict_;
  bool ok_ = true;
  std::vector<std::string> seen_;
};

inline bool expect_object(Sink& sink, const ordered_json& j, const std::string& path,
                          std::string_view code) {
  if (j.is_object()) return true;
  sink.error(code, path, "expected object, found " + std::string(type_name(j)));
  return false;
}

inline bool expect_array(Sink& sink, const ordered_json& j, const std::string& path,
                         std::string_view code) {
  if (j.is_array()) return true;
  sink.error(code, path, "expected array, found " + std::string(type_name(j)));
  return false;
}

inline std::optional<std::string> read_string(Sink& sink, const ordered_json& j,
                                              const std::string& path, std::string_view code) {
  if (j.is_string()) return j.get<std::string>();
  sink.error(code, path, "expected string, found " + std::string(type_name(j)));
  return std::nullopt;
}

inline std::optional<std::int64_t> read_int(Sink& sink, const ordered_json& j,
                                            const std::string& path, std::string_view code) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  sink.error(code, path, "expected integer, found " + std::string(type_name(j)));
  return std::nullopt;
}

inline std::optional<double> read_number(Sink& sink, const ordered_json& j,
                                         const std::string& path, std::string_view code) {
  if (j.is_number_integer()) return static_cast<double>(j.get<std::int64_t>());
  if (j.is_number_float()) {
    const double d = j.get<double>();
    if (!std::isfinite(d)) {
      sink.error(code::kInfinityToken, path, "non-finite number; use null for undefined");
      return std::nullopt;
    }
    return d;
  }
  sink.error(code, path, "expected number, found " + std::string(type_name(j)));
  return std::nullopt;
}

inline std::optional<bool> read_bool(Sink& sink, const ordered_json& j, const std::string& path,
                                     std::string_view code) {
  if (j.is_boolean()) return j.get<bool>();
  sink.error(code, path, "expected boolean, found " + std::string(type_name(j)));
  return std::nullopt;
}

/// null, integer, finite real, or string.
inline std::optional<core::Value> read_value(Sink& sink, const ordered_json& j,
                                             const std::string& path, std::string_view code) {
  if (j.is_null()) return core::Value{};
  if (j.is_number_integer()) return core::Value{j.get<std::int64_t>()};
  if (j.is_number_float()) {
    const double d = j.get<double>();
    if (!std::isfinite(d)) {
      sink.error(code::kInfinityToken, path, "non-finite number; use null for undefined");
      return std::nullopt;
    }
    return core::Value{d};
  }
  if (j.is_string()) return core::Value{j.get<std::string>()};
  sink.error(code, path,
             "expected number, string or null, found " + std::string(type_name(j)));
  return std::nullopt;
}

}  // namespace vta::json::detail
