#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>

#include "decoder.hpp"
#include "vta/core/algebra.hpp"
#include "vta/json/trace.hpp"

namespace vta::json {

using namespace vta::core;
using detail::Sink;

namespace {

std::string_view code_for(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::DuplicateId: return code::kDuplicateId;
    case ViolationKind::DanglingEdge: return code::kDanglingEdge;
    case ViolationKind::BadStructure: return code::kBadState;
    case ViolationKind::HighlightOutOfRange: return code::kHighlightOutOfRange;
    case ViolationKind::MissingIdleStyle: return code::kMissingIdleStyle;
    case ViolationKind::UnknownStyle: return code::kUnknownStyle;
  }
  return code::kBadState;
}

std::string op_path(std::size_t d, std::size_t g, std::size_t k) {
  return fmt::format("/deltas/{}/operations/{}/{}", d, g, k);
}

/// styleKey parameters of an op, with their pointer inside the op encoding.
std::vector<std::pair<std::string, std::string>> style_refs(const Operation& op) {
  std::vector<std::pair<std::string, std::string>> out;
  if (const auto* o = op.get<op::UpdateStyle>()) out.emplace_back(o->style_key, "/params/styleKey");
  if (const auto* o = op.get<op::UpdateNodeStyle>()) out.emplace_back(o->style_key, "/params/styleKey");
  if (const auto* o = op.get<op::UpdateEdgeStyle>()) out.emplace_back(o->style_key, "/params/styleKey");
  if (const auto* o = op.get<op::HighlightCollision>()) out.emplace_back(o->style_key, "/params/styleKey");
  if (const auto* o = op.get<op::HighlightTableCell>()) out.emplace_back(o->style_key, "/params/styleKey");
  if (const auto* o = op.get<op::AddNode>()) out.emplace_back(o->node.style_key, "/params/node/styleKey");
  if (const auto* o = op.get<op::AddChild>()) out.emplace_back(o->node.style_key, "/params/node/styleKey");
  if (const auto* o = op.get<op::AppendToList>()) out.emplace_back(o->entry.style_key, "/params/entry/styleKey");
  return out;
}

void check_static(Sink& sink, const Trace& trace) {
  if (trace.vta_version != kVtaVersion) {
    sink.error(code::kVersionMismatch, "/vta_version",
               fmt::format("vta_version must be \"{}\", found \"{}\"", kVtaVersion, trace.vta_version));
  }

  for (const auto& v : invariant_violations(trace.initial)) {
    const auto pointer = "/initial_frame" + v.pointer;
    if (v.is_error()) {
      sink.error(code_for(v.kind), pointer, v.message);
    } else {
      sink.warning(code_for(v.kind), pointer, v.message);
    }
  }

  const auto lines = static_cast<int>(trace.initial.pseudocode.size());
  for (std::size_t d = 0; d < trace.deltas.size(); ++d) {
    sink.set_delta(d);
    const auto& h = trace.deltas[d].code_highlight;
    for (std::size_t i = 0; i < h.size(); ++i) {
      const bool bad = h[i] < 1 || (lines > 0 && h[i] > lines);
      if (!bad) continue;
      auto path = fmt::format("/deltas/{}/code_highlight", d);
      if (h.size() > 1) path += fmt::format("/{}", i);
      sink.error(code::kHighlightOutOfRange, path,
                 lines > 0 ? fmt::format("code_highlight {} outside pseudocode lines [1, {}]", h[i], lines)
                           : fmt::format("code_highlight {} must be a positive line number", h[i]));
    }
  }
  sink.set_delta(std::nullopt);

  std::set<std::string_view> known(kKnownExtensions.begin(), kKnownExtensions.end());
  for (std::size_t i = 0; i < trace.required_extensions.size(); ++i) {
    if (!known.contains(trace.required_extensions[i])) {
      sink.error(code::kUnknownExtension, fmt::format("/required_extensions/{}", i),
                 fmt::format("unknown extension '{}'", trace.required_extensions[i]));
    }
  }
  const auto needed = extension_for(sort_of(trace.initial.main));
  if (std::find(trace.required_extensions.begin(), trace.required_extensions.end(), needed) ==
      trace.required_extensions.end()) {
    sink.warning(code::kMissingExtension, "/required_extensions",
                 fmt::format("'{}' should be listed for a {} trace", needed,
                             to_string(sort_of(trace.initial.main))));
  }

  for (std::size_t d = 0; d < trace.deltas.size(); ++d) {
    sink.set_delta(d);
    const auto& groups = trace.deltas[d].operations;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      std::map<std::string, std::size_t> writers;
      for (std::size_t k = 0; k < groups[g].size(); ++k) {
        const auto& op = groups[g][k];
        for (const auto& [key, pointer] : style_refs(op)) {
          if (!trace.initial.styles.contains(key)) {
            sink.warning(code::kUnknownStyle, op_path(d, g, k) + pointer,
                         fmt::format("styleKey '{}' is not defined; rendered as '{}'", key, kIdleStyle));
          }
        }
        std::set<std::string> reported;
        for (const auto& target : write_targets(op)) {
          auto [it, fresh] = writers.emplace(target, k);
          if (!fresh && it->second != k && reported.insert(target).second) {
            sink.warning(code::kSameTarget, op_path(d, g, k),
                         fmt::format("op {} in this group also writes '{}'; applied in listed order",
                                     it->second, target));
          }
        }
      }
    }
  }
  sink.set_delta(std::nullopt);
}

void check_dynamic(Sink& sink, const Trace& trace) {
  VisualState state = trace.initial;
  for (std::size_t d = 0; d < trace.deltas.size(); ++d) {
    const auto& groups = trace.deltas[d].operations;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (std::size_t k = 0; k < groups[g].size(); ++k) {
        try {
          state = apply_operation(state, groups[g][k]);
        } catch (const ApplyError& e) {
          sink.set_delta(d);
          const auto where = op_path(d, g, k) + e.param_pointer();
          if (e.dangling_edge()) {
            sink.error(code::kDanglingEdge, where, e.what());
          } else {
            sink.error(code::kStepApplyFailed, where,
                       fmt::format("{} ({}) while applying {}", e.what(), to_string(e.kind()),
                                   to_string(groups[g][k].code())));
          }
          sink.set_delta(std::nullopt);
          return;
        }
      }
    }
  }
}

}  // namespace

ValidationReport validate_trace(const Trace& trace) {
  std::vector<Diagnostic> diagnostics;
  Sink sink(diagnostics);
  check_static(sink, trace);
  // Replaying from a broken initial state would only echo the same faults.
  if (sink.error_count() == 0) check_dynamic(sink, trace);
  return make_report(std::move(diagnostics));
}

ValidationReport validate_document(std::string_view document) {
  auto parsed = parse_trace(document);
  if (!parsed.trace) return make_report(std::move(parsed.diagnostics));
  auto report = validate_trace(*parsed.trace);
  auto diagnostics = std::move(parsed.diagnostics);
  for (auto& d : report.diagnostics) {
    if (diagnostics.size() >= kDiagnosticCap) break;
    diagnostics.push_back(std::move(d));
  }
  return make_report(std::move(diagnostics));
}

std::vector<VisualState> replay_trace(const Trace& trace) {
  std::vector<VisualState> states;
  states.reserve(trace.deltas.size() + 1);
  states.push_back(trace.initial);
  states.back().highlight.clear();
  for (std::size_t d = 0; d < trace.deltas.size(); ++d) {
    VisualState next = states.back();
    const auto& groups = trace.deltas[d].operations;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (std::size_t k = 0; k < groups[g].size(); ++k) {
        try {
          next = apply_operation(next, groups[g][k]);
        } catch (const ApplyError& e) {
          throw ReplayError(Diagnostic{Severity::Error, std::string(code::kStepApplyFailed),
                                       op_path(d, g, k) + e.param_pointer(),
                                       fmt::format("{} (op position {} in delta)", e.what(), k), d});
        }
      }
    }
    auto h = trace.deltas[d].code_highlight;
    std::sort(h.begin(), h.end());
    h.erase(std::unique(h.begin(), h.end()), h.end());
    next.highlight = std::move(h);
    states.push_back(std::move(next));
  }
  return states;
}

}  // namespace vta::json
