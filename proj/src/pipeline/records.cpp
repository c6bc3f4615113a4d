#include "ufo/records.hpp"

#include <algorithm>
#include <fstream>

#include "ufo/error.hpp"

namespace ufo {

namespace fs = std::filesystem;

nlohmann::json frame_record(const FrameResult& result, bool with_timing) {
  nlohmann::json boxes = nlohmann::json::array();
  for (const auto& b : result.boxes) {
    boxes.push_back({{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}, {"log_nfa", b.score}});
  }
  nlohmann::json j = {{"frame", result.frame_id}, {"boxes", boxes}};
  if (with_timing) j["timing_ms"] = result.timing_ms;
  return j;
}

FrameResult parse_frame_record(const nlohmann::json& j) {
  try {
    FrameResult r;
    r.frame_id = j.at("frame").get<std::string>();
    for (const auto& b : j.at("boxes")) {
      r.boxes.push_back({b.at("x").get<int>(), b.at("y").get<int>(), b.at("w").get<int>(), b.at("h").get<int>(),
                         b.value("log_nfa", 0.0)});
    }
    if (j.contains("timing_ms")) r.timing_ms = j.at("timing_ms").get<std::map<std::string, double>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::DecodeError, std::string("malformed detection record: ") + e.what());
  }
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  os << j.dump(2) << '\n';
  if (!os) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::FileUnreadable, "cannot read " + path.string());
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::DecodeError, path.string() + ": " + e.what());
  }
}

std::vector<FrameResult> read_result_dir(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::FileUnreadable, "not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto& p = entry.path();
    if (entry.is_regular_file() && p.extension() == ".json" && p.filename() != kManifestName) files.push_back(p);
  }
  std::ranges::sort(files);
  std::vector<FrameResult> out;
  for (const auto& f : files) out.push_back(parse_frame_record(read_json(f)));
  return out;
}

}  // namespace ufo
