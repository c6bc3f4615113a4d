#include "ufo/sequence.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "ufo/error.hpp"
#include "ufo/image_io.hpp"
#include "ufo/overlay.hpp"
#include "ufo/records.hpp"
#include "ufo/version.hpp"

namespace ufo {

namespace fs = std::filesystem;

namespace {

bool is_raster(const fs::path& p) {
  std::string ext = p.extension().string();
  std::ranges::transform(ext, ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".ppm" || ext == ".pgm" || ext == ".pnm";
}

void ensure_writable(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::IoError, "cannot create output directory " + dir.string());
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream os(probe);
    if (!os) throw Error(ErrorCode::IoError, "output directory is not writable: " + dir.string());
  }
  fs::remove(probe, ec);
}

}  // namespace

std::vector<fs::path> list_frames(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::FileUnreadable, "not a directory: " + dir.string());
  std::vector<fs::path> frames;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_raster(entry.path())) frames.push_back(entry.path());
  }
  std::ranges::sort(frames, [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return frames;
}

std::vector<FrameResult> run_sequence(const fs::path& input_dir, const PipelineConfig& cfg, const fs::path& output_dir,
                                      const SequenceOptions& opts) {
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw Error(e.code(), std::string("config: ") + e.what());
  }
  const auto frames = list_frames(input_dir);
  if (frames.empty()) throw Error(ErrorCode::InvalidArgument, "input: no frames in " + input_dir.string());
  ensure_writable(output_dir);

  nlohmann::json names = nlohmann::json::array();
  for (const auto& f : frames) names.push_back(f.filename().string());
  write_json(output_dir / kManifestName,
             {{"version", kVersion}, {"seed", cfg.seed}, {"config", to_json(cfg)}, {"frames", names}});

  std::vector<FrameResult> results;
  LevelDictionaries dicts;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const std::string id = frames[i].stem().string();
    ImageBuffer img;
    try {
      img = load_frame(frames[i]);
    } catch (const Error& e) {
      throw Error(e.code(), "load " + frames[i].filename().string() + ": " + e.what());
    }
    if (i % static_cast<std::size_t>(cfg.reuse_dict) == 0) dicts.clear();
    FrameResult r = run_frame(img, cfg, frame_seed(cfg.seed, id), &dicts);
    r.frame_id = id;
    write_json(output_dir / (id + ".json"), frame_record(r, opts.write_timing));
    if (opts.overlay) save_png(output_dir / (id + "_overlay.png"), render_overlay(img, r.boxes));
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace ufo
