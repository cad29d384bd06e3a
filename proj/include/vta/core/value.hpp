#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace vta::core {

/// Scalar payload carried by view elements: null, integer, real, or text.
///
/// Integers and reals are kept apart so that a document round-trips without
/// turning `4` into `4.0`. Non-finite reals never appear; the reader rejects them.
using Value = std::variant<std::monostate, std::int64_t, double, std::string>;

using PropertyMap = std::map<std::string, Value>;

inline bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }

inline bool is_number(const Value& v) {
  return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v);
}

/// Numeric view of a value; nullopt for null and text.
std::optional<double> as_number(const Value& v);

/// Display text for a value. `null_glyph` is substituted for null.
std::string display(const Value& v, std::string_view null_glyph);

/// Textual form used where a value acts as an element identifier
/// (hash-table keys as comment anchors, placement ids).
std::string key_text(const Value& v);

}  // namespace vta::core
