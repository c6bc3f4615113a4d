#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ufo/boxes.hpp"
#include "ufo/pipeline.hpp"

namespace ufo {

struct GroundTruth {
  std::map<std::string, std::vector<BoundingBox>> frames;
};

// {"frames": {"<id>": [{"x", "y", "w", "h"}, ...]}}
GroundTruth parse_ground_truth(const nlohmann::json& j);
GroundTruth read_ground_truth(const std::filesystem::path& path);

struct MatchCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
};

struct FrameEval {
  std::string frame;
  MatchCounts counts;
};

struct EvalReport {
  MatchCounts totals;
  std::optional<double> detection_rate;     // TP / (TP + FN)
  std::optional<double> false_alarm_rate;   // FP / (TP + FP)
  std::vector<FrameEval> frames;
};

std::optional<double> detection_rate(long tp, long fn);
std::optional<double> false_alarm_rate(long tp, long fp);

// A prediction may match a GT box when IoU >= iou_threshold or its centre lies
// inside the GT box. Pairs are taken greedily by descending IoU, one to one.
MatchCounts match_frame(const std::vector<BoundingBox>& predicted, const std::vector<BoundingBox>& truth,
                        double iou_threshold);

// Throws UnknownFrame when the GT names a frame without a result. Result
// frames missing from the GT are scored against an empty annotation.
EvalReport evaluate(const std::vector<FrameResult>& results, const GroundTruth& gt, double iou_threshold = 0.1);

nlohmann::json to_json(const EvalReport& report);
std::string format_table(const EvalReport& report);

}  // namespace ufo
