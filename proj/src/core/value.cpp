#include "vta/core/value.hpp"

#include <fmt/format.h>

namespace vta::core {

std::optional<double> as_number(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  return std::nullopt;
}

std::string display(const Value& v, std::string_view null_glyph) {
  struct Visitor {
    std::string_view null_glyph;
    std::string operator()(std::monostate) const { return std::string(null_glyph); }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return fmt::format("{}", d); }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{null_glyph}, v);
}

std::string key_text(const Value& v) { return display(v, "null"); }

}  // namespace vta::core
