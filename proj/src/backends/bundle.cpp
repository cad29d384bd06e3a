#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "scene.hpp"
#include "vta/core/algebra.hpp"

namespace vta::backends {

namespace detail {

BundleWriter::BundleWriter(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw IoFailure(fmt::format("cannot create {}: {}", dir_.string(), ec.message()));
}

void BundleWriter::write(const std::string& relative, std::string_view bytes) {
  const fs::path target = dir_ / fs::path(relative);
  std::error_code ec;
  if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw IoFailure("cannot write " + target.string());
  files_.push_back({relative, bytes.size(), sha256_hex(bytes)});
}

Bundle BundleWriter::finish() {
  std::sort(files_.begin(), files_.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
  auto list = json::ordered_json::array();
  for (const auto& f : files_) {
    list.push_back({{"path", f.path}, {"bytes", f.bytes}, {"sha256", f.digest}});
  }
  json::ordered_json manifest;
  manifest["files"] = std::move(list);
  const std::string text = manifest.dump(2, ' ', false) + "\n";
  const fs::path target = dir_ / "manifest.json";
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) throw IoFailure("cannot write " + target.string());
  return {dir_, files_};
}

}  // namespace detail

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
  return out;
}

std::vector<ManifestEntry> read_manifest(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json", std::ios::binary);
  if (!in) throw IoFailure("cannot read " + (dir / "manifest.json").string());
  const auto j = json::ordered_json::parse(in);
  std::vector<ManifestEntry> out;
  for (const auto& f : j.at("files")) {
    out.push_back({f.at("path").get<std::string>(), f.at("bytes").get<std::size_t>(), f.at("sha256").get<std::string>()});
  }
  return out;
}

FrameSet build_frames(const json::Trace& trace, const rsl::RslConfig& rsl, const rsl::RenderConfig& config) {
  auto report = json::validate_trace(trace);
  if (!report.valid) throw ValidationGateError(std::move(report));

  const auto states = json::replay_trace(trace);
  auto placements = layout::layout_frames(states, config);

  FrameSet set;
  set.title = trace.algorithm.name;
  set.trace_json = json::serialize_trace(trace);
  set.rsl_json = rsl::serialize_rsl(rsl);
  for (std::size_t i = 0; i < states.size(); ++i) {
    Frame f;
    f.index = i;
    f.state = states[i];
    f.placement = std::move(placements[i]);
    if (i > 0) {
      const auto& delta = trace.deltas[i - 1];
      f.caption = delta.action_description;
      f.ops = core::flatten_delta(delta);
      // dependency arrows live for the frame that shows them only
      for (const auto& op : f.ops) {
        if (const auto* d = op.get<core::op::ShowDependency>()) f.dependencies.push_back({d->from, d->to});
      }
    }
    set.frames.push_back(std::move(f));
  }
  return set;
}

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoFailure("cannot read " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

Bundle emit_player_bundle(const json::Trace& trace, const rsl::RslConfig& rsl, const fs::path& out_dir,
                          std::optional<fs::path> assets) {
  auto report = json::validate_trace(trace);
  if (!report.valid) throw ValidationGateError(std::move(report));

  if (!assets) {
    if (const char* env = std::getenv("VTA_PLAYER_ASSETS"); env && *env) assets = fs::path(env);
  }
  if (!assets || !fs::is_regular_file(*assets / "index.html")) {
    throw MissingPlayerAssets(assets ? "no index.html in player assets at " + assets->string()
                                     : "player assets not found; set VTA_PLAYER_ASSETS or pass an assets directory");
  }

  std::vector<std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(*assets)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), *assets).generic_string();
    if (rel == "trace.json" || rel == "rsl.json" || rel == "manifest.json") continue;
    files.push_back(rel);
  }
  std::sort(files.begin(), files.end());

  detail::BundleWriter writer(out_dir);
  for (const auto& rel : files) writer.write(rel, read_file(*assets / rel));
  writer.write("trace.json", json::serialize_trace(trace));
  writer.write("rsl.json", rsl::serialize_rsl(rsl));
  return writer.finish();
}

}  // namespace vta::backends
