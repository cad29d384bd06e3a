#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vta::json {

enum class Severity { Error, Warning };

std::string_view to_string(Severity s);

/// Stable diagnostic codes. Consumers match on these strings.
namespace code {
inline constexpr std::string_view kSyntaxError = "SYNTAX_ERROR";
inline constexpr std::string_view kVersionNotString = "VERSION_NOT_STRING";
inline constexpr std::string_view kVersionMismatch = "VERSION_MISMATCH";
inline constexpr std::string_view kOpsNot2D = "OPS_NOT_2D";
inline constexpr std::string_view kInfinityToken = "INFINITY_TOKEN";
inline constexpr std::string_view kDanglingEdge = "DANGLING_EDGE";
inline constexpr std::string_view kBadHighlightType = "BAD_HIGHLIGHT_TYPE";
inline constexpr std::string_view kHighlightOutOfRange = "HIGHLIGHT_OUT_OF_RANGE";
inline constexpr std::string_view kUnknownOp = "UNKNOWN_OP";
inline constexpr std::string_view kBadParams = "BAD_PARAMS";
inline constexpr std::string_view kUnknownExtension = "UNKNOWN_EXTENSION";
inline constexpr std::string_view kStepApplyFailed = "STEP_APPLY_FAILED";
inline constexpr std::string_view kMissingField = "MISSING_FIELD";
inline constexpr std::string_view kBadType = "BAD_TYPE";
inline constexpr std::string_view kUnknownViewType = "UNKNOWN_VIEW_TYPE";
inline constexpr std::string_view kDuplicateId = "DUPLICATE_ID";
inline constexpr std::string_view kBadState = "BAD_STATE";
inline constexpr std::string_view kOutOfBounds = "OUT_OF_BOUNDS";
inline constexpr std::string_view kBadEnum = "BAD_ENUM";
inline constexpr std::string_view kBadColor = "BAD_COLOR";
// warnings
inline constexpr std::string_view kUnknownStyle = "UNKNOWN_STYLE";
inline constexpr std::string_view kMissingIdleStyle = "MISSING_IDLE_STYLE";
inline constexpr std::string_view kMissingExtension = "MISSING_EXTENSION";
inline constexpr std::string_view kSameTarget = "SAME_TARGET";
inline constexpr std::string_view kUnknownField = "UNKNOWN_FIELD";
}  // namespace code

/// A structured finding. `path` is a JSON pointer into the source document.
struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string path;
  std::string message;
  std::optional<std::size_t> delta_index;

  bool is_error() const { return severity == Severity::Error; }
  bool operator==(const Diagnostic&) const = default;
};

struct ValidationReport {
  bool valid = true;
  std::vector<Diagnostic> diagnostics;

  std::size_t error_count() const;
  std::vector<Diagnostic> errors() const;
  bool has_code(std::string_view c) const;
};

ValidationReport make_report(std::vector<Diagnostic> diagnostics);

inline constexpr std::size_t kDiagnosticCap = 100;
inline constexpr std::size_t kRepairBlockDefaultLimit = 3;

/// Plain-text error block for an external repair agent:
///
///     [Previous Error]
///     CODE: message
///     Location: /json/pointer, delta 3
///
/// At most `limit` entries; remaining ones are summarized as "+N more".
/// Empty input yields an empty string.
std::string format_repair_block(std::span<const Diagnostic> diagnostics,
                                std::size_t limit = kRepairBlockDefaultLimit);

/// diagnostics.json: an array of {severity, code, path, message, delta_index}.
std::string diagnostics_to_json(std::span<const Diagnostic> diagnostics);
std::vector<Diagnostic> diagnostics_from_json(std::string_view text);

}  // namespace vta::json
