#include "ufo/evaluate.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <tuple>

#include "ufo/error.hpp"
#include "ufo/records.hpp"

namespace ufo {

GroundTruth parse_ground_truth(const nlohmann::json& j) {
  GroundTruth gt;
  try {
    for (const auto& [id, boxes] : j.at("frames").items()) {
      auto& list = gt.frames[id];
      for (const auto& b : boxes) {
        BoundingBox box{b.at("x").get<int>(), b.at("y").get<int>(), b.at("w").get<int>(), b.at("h").get<int>(), 0.0};
        if (box.x < 0 || box.y < 0 || box.w <= 0 || box.h <= 0) {
          throw Error(ErrorCode::InvalidArgument, "ground truth box of frame '" + id + "' is out of bounds or empty");
        }
        list.push_back(box);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::DecodeError, std::string("malformed ground truth: ") + e.what());
  }
  return gt;
}

GroundTruth read_ground_truth(const std::filesystem::path& path) { return parse_ground_truth(read_json(path)); }

std::optional<double> detection_rate(long tp, long fn) {
  if (tp + fn <= 0) return std::nullopt;
  return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

std::optional<double> false_alarm_rate(long tp, long fp) {
  if (tp + fp <= 0) return std::nullopt;
  return static_cast<double>(fp) / static_cast<double>(tp + fp);
}

namespace {

bool centre_inside(const BoundingBox& p, const BoundingBox& g) {
  const double cx = p.x + 0.5 * p.w, cy = p.y + 0.5 * p.h;
  return cx >= g.x && cx < g.right() && cy >= g.y && cy < g.bottom();
}

}  // namespace

MatchCounts match_frame(const std::vector<BoundingBox>& predicted, const std::vector<BoundingBox>& truth,
                        double iou_threshold) {
  struct Pair {
    double iou;
    std::size_t p, g;
  };
  std::vector<Pair> pairs;
  for (std::size_t p = 0; p < predicted.size(); ++p) {
    for (std::size_t g = 0; g < truth.size(); ++g) {
      const double v = iou(predicted[p], truth[g]);
      if (v >= iou_threshold || centre_inside(predicted[p], truth[g])) pairs.push_back({v, p, g});
    }
  }
  std::ranges::sort(pairs, [](const Pair& a, const Pair& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    return std::tie(a.p, a.g) < std::tie(b.p, b.g);
  });
  std::vector<bool> used_p(predicted.size()), used_g(truth.size());
  MatchCounts m;
  for (const auto& pr : pairs) {
    if (used_p[pr.p] || used_g[pr.g]) continue;
    used_p[pr.p] = used_g[pr.g] = true;
    ++m.tp;
  }
  m.fp = static_cast<long>(predicted.size()) - m.tp;
  m.fn = static_cast<long>(truth.size()) - m.tp;
  return m;
}

EvalReport evaluate(const std::vector<FrameResult>& results, const GroundTruth& gt, double iou_threshold) {
  for (const auto& [id, boxes] : gt.frames) {
    const bool present = std::ranges::any_of(results, [&](const FrameResult& r) { return r.frame_id == id; });
    if (!present) throw Error(ErrorCode::UnknownFrame, "ground truth frame '" + id + "' has no detection result");
  }
  static const std::vector<BoundingBox> kNone;
  EvalReport report;
  for (const auto& r : results) {
    const auto it = gt.frames.find(r.frame_id);
    const MatchCounts m = match_frame(r.boxes, it == gt.frames.end() ? kNone : it->second, iou_threshold);
    report.frames.push_back({r.frame_id, m});
    report.totals.tp += m.tp;
    report.totals.fp += m.fp;
    report.totals.fn += m.fn;
  }
  report.detection_rate = detection_rate(report.totals.tp, report.totals.fn);
  report.false_alarm_rate = false_alarm_rate(report.totals.tp, report.totals.fp);
  return report;
}

nlohmann::json to_json(const EvalReport& report) {
  auto rate = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json frames = nlohmann::json::array();
  for (const auto& f : report.frames) {
    frames.push_back({{"frame", f.frame}, {"tp", f.counts.tp}, {"fp", f.counts.fp}, {"fn", f.counts.fn}});
  }
  return {{"tp", report.totals.tp},
          {"fp", report.totals.fp},
          {"fn", report.totals.fn},
          {"dr", rate(report.detection_rate)},
          {"far", rate(report.false_alarm_rate)},
          {"frames", frames}};
}

std::string format_table(const EvalReport& report) {
  auto rate = [](const std::optional<double>& v) {
    if (!v) return std::string("undefined");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", *v);
    return std::string(buf);
  };
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-24s %8s %8s %8s\n", "frame", "TP", "FP", "FN");
  os << line;
  for (const auto& f : report.frames) {
    std::snprintf(line, sizeof line, "%-24s %8ld %8ld %8ld\n", f.frame.c_str(), f.counts.tp, f.counts.fp, f.counts.fn);
    os << line;
  }
  std::snprintf(line, sizeof line, "%-24s %8ld %8ld %8ld\n", "total", report.totals.tp, report.totals.fp,
                report.totals.fn);
  os << line;
  os << "DR  = " << rate(report.detection_rate) << '\n';
  os << "FAR = " << rate(report.false_alarm_rate) << '\n';
  return os.str();
}

}  // namespace ufo
