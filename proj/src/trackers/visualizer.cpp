#include <fmt/format.h>

#include "vta/core/algebra.hpp"
#include "vta/trackers/trackers.hpp"

namespace vta::trackers {

Visualizer::Visualizer(std::string name, std::string family, std::vector<std::string> pseudocode,
                       core::MainView initial, std::map<std::string, core::StyleDef> styles) {
  trace_.algorithm = {std::move(name), std::move(family)};
  trace_.required_extensions = {std::string(json::extension_for(core::sort_of(initial)))};
  trace_.initial.main = std::move(initial);
  trace_.initial.pseudocode = std::move(pseudocode);
  trace_.initial.styles = std::move(styles);
  if (!trace_.initial.styles.contains(std::string(core::kIdleStyle))) {
    trace_.initial.styles[std::string(core::kIdleStyle)] = core::default_styles().at(std::string(core::kIdleStyle));
  }
  current_ = trace_.initial;
}

void Visualizer::add_aux(core::AuxView view) {
  if (started_) throw InternalInstrumentationFault("auxiliary views must be added before the first step");
  trace_.initial.auxiliary_views.push_back(view);
  current_.auxiliary_views.push_back(std::move(view));
}

void Visualizer::step(std::string caption, std::vector<int> lines, std::vector<core::OpGroup> groups) {
  started_ = true;
  const auto n = static_cast<int>(trace_.initial.pseudocode.size());
  for (int line : lines) {
    if (line < 1 || line > n) {
      throw InternalInstrumentationFault(fmt::format("{}: highlight {} outside pseudocode 1..{}",
                                                     trace_.algorithm.name, line, n));
    }
  }
  for (const auto& group : groups) {
    for (const auto& op : group) {
      try {
        current_ = core::apply_operation(current_, op);
      } catch (const core::ApplyError& e) {
        throw InternalInstrumentationFault(fmt::format("{}: delta {} ({}): {} failed: {}", trace_.algorithm.name,
                                                       trace_.deltas.size(), caption, core::to_string(op.code()),
                                                       e.what()));
      }
    }
  }
  trace_.deltas.push_back(core::Delta{std::move(caption), std::move(lines), std::move(groups)});
}

json::Trace Visualizer::finish() {
  if (!snapshots_.empty() && snapshots_.size() != trace_.deltas.size() + 1) {
    throw InternalInstrumentationFault(fmt::format("{}: {} snapshots for {} delta boundaries", trace_.algorithm.name,
                                                   snapshots_.size(), trace_.deltas.size() + 1));
  }
  const auto report = json::validate_trace(trace_);
  if (!report.valid) {
    throw InternalInstrumentationFault(trace_.algorithm.name + " emitted an invalid trace:\n" +
                                       json::format_repair_block(report.diagnostics));
  }
  return trace_;
}

}  // namespace vta::trackers
