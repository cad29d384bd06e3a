#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vta/core/operation.hpp"
#include "vta/core/state.hpp"
#include "vta/json/trace.hpp"
#include "vta/layout/layout.hpp"
#include "vta/rsl/rsl.hpp"

namespace vta::backends {

namespace fs = std::filesystem;

class IoFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingPlayerAssets : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a trace with error diagnostics is handed to a backend.
class ValidationGateError : public std::runtime_error {
 public:
  explicit ValidationGateError(json::ValidationReport report)
      : std::runtime_error("trace failed validation; rendering refused"), report_(std::move(report)) {}
  const json::ValidationReport& report() const { return report_; }

 private:
  json::ValidationReport report_;
};

/// Cell-to-cell arrow drawn on exactly one frame.
struct Dependency {
  core::CellRef from;
  core::CellRef to;
  bool operator==(const Dependency&) const = default;
};

struct Frame {
  std::size_t index = 0;
  core::VisualState state;
  layout::Placement placement;
  std::string caption;                  // action_description of the delta that produced it
  std::vector<core::Operation> ops;     // that delta's ops, flattened
  std::vector<Dependency> dependencies;
};

struct FrameSet {
  std::string title;
  std::vector<Frame> frames;
  std::string trace_json;  // canonical trace.json written next to the frames
  std::string rsl_json;    // canonical rsl.json of the config in use
};

/// Replays, lays out and captions a trace. Refuses traces that do not validate.
FrameSet build_frames(const json::Trace& trace, const rsl::RslConfig& rsl, const rsl::RenderConfig& config);

struct ManifestEntry {
  std::string path;  // relative, '/'-separated
  std::size_t bytes = 0;
  std::string digest;  // sha256 hex
  bool operator==(const ManifestEntry&) const = default;
};

struct Bundle {
  fs::path dir;
  std::vector<ManifestEntry> files;  // sorted by path; manifest.json itself excluded
};

std::string sha256_hex(std::string_view bytes);

/// frame_%03d.tex per frame plus index.tex, trace.json, rsl.json, manifest.json.
Bundle emit_tikz(const FrameSet& frames, const rsl::RenderConfig& config, const fs::path& out_dir);

/// frame_%03d.svg per frame plus an index.html flipbook.
Bundle emit_svg(const FrameSet& frames, const rsl::RenderConfig& config, const fs::path& out_dir);

/// trace.json + rsl.json + the prebuilt player assets. `assets` defaults to
/// $VTA_PLAYER_ASSETS; the directory must contain index.html.
Bundle emit_player_bundle(const json::Trace& trace, const rsl::RslConfig& rsl, const fs::path& out_dir,
                          std::optional<fs::path> assets = std::nullopt);

/// Text of one TikZ / SVG frame (exposed for tests).
std::string tikz_frame(const FrameSet& frames, std::size_t index, const rsl::RenderConfig& config);
std::string svg_frame(const FrameSet& frames, std::size_t index, const rsl::RenderConfig& config);

/// Flipbook metadata embedded in index.html.
json::ordered_json flipbook_metadata(const FrameSet& frames, const rsl::RenderConfig& config);

std::vector<ManifestEntry> read_manifest(const fs::path& dir);

}  // namespace vta::backends
