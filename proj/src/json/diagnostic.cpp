#include "vta/json/diagnostic.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <json.hpp>

namespace vta::json {

std::string_view to_string(Severity s) { return s == Severity::Error ? "error" : "warning"; }

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(
      std::count_if(diagnostics.begin(), diagnostics.end(), [](const auto& d) { return d.is_error(); }));
}

std::vector<Diagnostic> ValidationReport::errors() const {
  std::vector<Diagnostic> out;
  std::copy_if(diagnostics.begin(), diagnostics.end(), std::back_inserter(out),
               [](const auto& d) { return d.is_error(); });
  return out;
}

bool ValidationReport::has_code(std::string_view c) const {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [&](const auto& d) { return d.code == c; });
}

ValidationReport make_report(std::vector<Diagnostic> diagnostics) {
  ValidationReport r;
  r.diagnostics = std::move(diagnostics);
  r.valid = r.error_count() == 0;
  return r;
}

std::string format_repair_block(std::span<const Diagnostic> diagnostics, std::size_t limit) {
  if (diagnostics.empty()) return {};
  limit = std::max<std::size_t>(limit, 1);
  std::string out = "[Previous Error]\n";
  const auto shown = std::min(limit, diagnostics.size());
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& d = diagnostics[i];
    out += fmt::format("{}: {}\n", d.code, d.message);
    const std::string where = d.path.empty() ? "(document root)" : d.path;
    if (d.delta_index) {
      out += fmt::format("Location: {}, delta {}\n", where, *d.delta_index);
    } else {
      out += fmt::format("Location: {}\n", where);
    }
  }
  if (diagnostics.size() > shown) out += fmt::format("+{} more\n", diagnostics.size() - shown);
  return out;
}

std::string diagnostics_to_json(std::span<const Diagnostic> diagnostics) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& d : diagnostics) {
    nlohmann::ordered_json j;
    j["severity"] = to_string(d.severity);
    j["code"] = d.code;
    j["path"] = d.path;
    j["message"] = d.message;
    j["delta_index"] = d.delta_index ? nlohmann::ordered_json(*d.delta_index) : nullptr;
    arr.push_back(std::move(j));
  }
  return arr.dump(2, ' ', false) + "\n";
}

std::vector<Diagnostic> diagnostics_from_json(std::string_view text) {
  const auto arr = nlohmann::json::parse(text);
  std::vector<Diagnostic> out;
  for (const auto& j : arr) {
    Diagnostic d;
    d.severity = j.at("severity").get<std::string>() == "error" ? Severity::Error : Severity::Warning;
    d.code = j.at("code").get<std::string>();
    d.path = j.at("path").get<std::string>();
    d.message = j.at("message").get<std::string>();
    if (!j.at("delta_index").is_null()) d.delta_index = j.at("delta_index").get<std::size_t>();
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace vta::json
