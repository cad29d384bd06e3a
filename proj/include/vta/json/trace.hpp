#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vta/core/operation.hpp"
#include "vta/core/state.hpp"
#include "vta/json/diagnostic.hpp"

namespace vta::json {

using ordered_json = nlohmann::ordered_json;

inline constexpr std::string_view kVtaVersion = "5.0";

/// One extension per state sort.
inline constexpr std::array<std::string_view, 5> kKnownExtensions = {
    "vta-ext-primitive-array", "vta-ext-primitive-graph", "vta-ext-primitive-tree",
    "vta-ext-primitive-hashtable", "vta-ext-primitive-table"};

std::string_view extension_for(core::ViewSort sort);

struct Algorithm {
  std::string name;
  std::string family;
  bool operator==(const Algorithm&) const = default;
};

/// A trace (s0, w) as carried by a VTA-JSON 5.0 document.
///
/// `initial` holds the decoded initial frame; its highlight and comment lists
/// are always empty. `data_schema` is kept verbatim and never interpreted.
struct Trace {
  std::string vta_version{kVtaVersion};
  Algorithm algorithm;
  std::optional<ordered_json> data_schema;
  core::VisualState initial;
  std::vector<core::Delta> deltas;
  std::vector<std::string> required_extensions;
  bool operator==(const Trace&) const = default;
};

struct ParseResult {
  std::optional<Trace> trace;  // set iff no error diagnostics
  std::vector<Diagnostic> diagnostics;
  bool syntax_error = false;  // bytes are not JSON at all
};

/// Decodes a document. Non-finite numeric tokens (Infinity, -Infinity, NaN)
/// are reported as INFINITY_TOKEN and never coerced. Collection stops after
/// kDiagnosticCap findings.
ParseResult parse_trace(std::string_view document);

/// Canonical form: two-space indentation, fixed key order per object type,
/// LF line endings, one trailing newline.
std::string serialize_trace(const Trace& trace);

/// Semantic checks over a decoded trace: version value, state invariants,
/// highlight ranges, extensions, style references, same-target groups, and
/// dynamic referential integrity by replaying every delta.
ValidationReport validate_trace(const Trace& trace);

/// parse_trace followed by validate_trace when decoding succeeded.
ValidationReport validate_document(std::string_view document);

/// Raised by replay_trace when a transformer is undefined (only possible on a
/// trace that skipped validation). Carries a STEP_APPLY_FAILED diagnostic.
class ReplayError : public std::runtime_error {
 public:
  explicit ReplayError(Diagnostic d) : std::runtime_error(d.message), diagnostic_(std::move(d)) {}
  const Diagnostic& diagnostic() const { return diagnostic_; }

 private:
  Diagnostic diagnostic_;
};

/// States s0..sn, one per delta boundary. State i > 0 carries delta i-1's
/// code_highlight as its highlight set.
std::vector<core::VisualState> replay_trace(const Trace& trace);

// Encoders shared by the trace writer, state export and tests.
ordered_json encode_value(const core::Value& v);
ordered_json encode_operation(const core::Operation& op);
ordered_json encode_data_state(const core::MainView& view);
ordered_json encode_state(const core::VisualState& state);

/// Replay snapshot export (state_%03d.json).
std::string serialize_state(const core::VisualState& state, std::size_t frame_index);

/// Decodes one operation object; diagnostics are appended for failures.
std::optional<core::Operation> decode_operation(const ordered_json& j, const std::string& path,
                                                std::vector<Diagnostic>& diagnostics);

/// Escapes one JSON-pointer reference token.
std::string pointer_token(std::string_view token);

}  // namespace vta::json
