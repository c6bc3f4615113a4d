// Command-line front end: `detect` runs the pipeline over a frame directory,
// `eval` scores detection records against ground truth.
#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "ufo/error.hpp"
#include "ufo/evaluate.hpp"
#include "ufo/parallel.hpp"
#include "ufo/records.hpp"
#include "ufo/sequence.hpp"
#include "ufo/version.hpp"

namespace {

struct DetectArgs {
  std::string input, output;
  ufo::PipelineConfig cfg;
  double lambda = 0.0, sigma = 0.0;
  bool no_refine = false;
  int threads = 0;
  std::string config;  // consumed before parsing
  ufo::SequenceOptions opts;
};

struct EvalArgs {
  std::string results, gt;
  double iou = 0.1;
};

void add_detect(CLI::App& app, DetectArgs& a) {
  auto* cmd = app.add_subcommand("detect", "detect floating objects in a directory of frames");
  auto& c = a.cfg;
  cmd->add_option("--input", a.input, "directory of PNG/PPM/PGM frames")->required();
  cmd->add_option("--output", a.output, "directory for detection records")->required();
  cmd->add_option("--log-eps", c.log_eps, "log10 of the NFA threshold");
  cmd->add_option("--scales", c.n_scales, "number of pyramid scales")->check(CLI::PositiveNumber);
  cmd->add_option("--patch-side", c.denoise.patch_side, "patch side length")->check(CLI::PositiveNumber);
  cmd->add_option("--dict-size", c.denoise.dict_size, "dictionary atoms")->check(CLI::PositiveNumber);
  cmd->add_option("--ksvd-iters", c.denoise.k_iter, "K-SVD iterations")->check(CLI::NonNegativeNumber);
  cmd->add_option("--ormp-eps", c.denoise.ormp_epsilon, "ORMP residual tolerance");
  cmd->add_option("--lambda", a.lambda, "fidelity weight (default 30 / sigma)");
  cmd->add_option("--sigma", a.sigma, "noise level (default: estimated)");
  cmd->add_option("--radii", c.radii, "disk radii, e.g. 1,2,3")->delimiter(',');
  cmd->add_flag("--no-refine", a.no_refine, "skip keypoint refinement");
  cmd->add_option("--stride", c.denoise.stride, "patch sampling stride")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--reuse-dict", c.reuse_dict, "frames sharing one learned dictionary set")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-atoms", a.cfg.denoise.max_atoms, "ORMP atom limit (default patch_dim / 2)");
  cmd->add_flag("--overlay", a.opts.overlay, "write <frame>_overlay.png");
  cmd->add_flag("--timing", a.opts.write_timing, "include per-stage timing in the records");
  cmd->add_option("--threads", a.threads, "worker threads (0: all cores); results do not depend on it")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--config", a.config, "key=value file using the long option names; flags take precedence");
}

void add_eval(CLI::App& app, EvalArgs& a) {
  auto* cmd = app.add_subcommand("eval", "score detection records against ground truth");
  cmd->add_option("--results", a.results, "directory written by detect")->required();
  cmd->add_option("--gt", a.gt, "ground-truth JSON file")->required();
  cmd->add_option("--iou", a.iou, "IoU threshold")->check(CLI::Range(0.0, 1.0));
}

int run_detect(DetectArgs& a, const CLI::App& cmd) {
  if (cmd.count("--lambda")) a.cfg.denoise.lambda = a.lambda;
  if (cmd.count("--sigma")) a.cfg.denoise.sigma = a.sigma;
  a.cfg.refine_keypoints = !a.no_refine;
  ufo::set_thread_count(a.threads);
  const auto results = ufo::run_sequence(a.input, a.cfg, a.output, a.opts);
  std::size_t boxes = 0;
  for (const auto& r : results) boxes += r.boxes.size();
  std::cout << results.size() << " frames, " << boxes << " boxes -> " << a.output << '\n';
  return 0;
}

int run_eval(const EvalArgs& a) {
  const auto report = ufo::evaluate(ufo::read_result_dir(a.results), ufo::read_ground_truth(a.gt), a.iou);
  std::cout << ufo::to_json(report).dump(2) << '\n' << ufo::format_table(report);
  return 0;
}

std::string trim(std::string s) {
  const auto ws = [](unsigned char ch) { return std::isspace(ch) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

bool given(const std::vector<std::string>& args, const std::string& flag) {
  return std::ranges::any_of(args, [&](const std::string& a) { return a == flag || a.starts_with(flag + "="); });
}

// Inserts the settings of the detect config file ahead of the command-line
// arguments, skipping any option that the command line sets itself.
std::vector<std::string> expand_config(std::vector<std::string> args, const CLI::App& detect) {
  const auto sub = std::ranges::find(args, std::string("detect"));
  if (sub == args.end()) return args;
  std::string path;
  for (auto it = sub + 1; it != args.end(); ++it) {
    if (*it == "--config" && it + 1 != args.end()) path = *(it + 1);
    if (it->starts_with("--config=")) path = it->substr(9);
  }
  if (path.empty()) return args;
  std::ifstream is(path);
  if (!is) throw ufo::Error(ufo::ErrorCode::FileUnreadable, "config: cannot read " + path);

  std::vector<std::string> extra;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';' || line[0] == '[') continue;
    const auto eq = line.find('=');
    const std::string where = "config: " + path + ":" + std::to_string(line_no);
    if (eq == std::string::npos) throw ufo::Error(ufo::ErrorCode::InvalidArgument, where + ": expected key=value");
    const std::string flag = "--" + trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && ((value.front() == '"' && value.back() == '"') ||
                              (value.front() == '[' && value.back() == ']'))) {
      value = trim(value.substr(1, value.size() - 2));
    }
    const CLI::Option* opt = detect.get_option_no_throw(flag);
    if (!opt || flag == "--config" || flag == "--input" || flag == "--output") {
      throw ufo::Error(ufo::ErrorCode::InvalidArgument, where + ": unknown key '" + flag.substr(2) + "'");
    }
    if (given(args, flag)) continue;
    if (opt->get_type_size() == 0) {
      if (value == "true" || value == "1" || value == "on") extra.push_back(flag);
    } else {
      extra.push_back(flag);
      extra.push_back(value);
    }
  }
  args.insert(sub + 1, extra.begin(), extra.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"floating object detector"};
  app.set_version_flag("--version", ufo::kVersion);
  app.require_subcommand(1);
  DetectArgs detect_args;
  EvalArgs eval_args;
  add_detect(app, detect_args);
  add_eval(app, eval_args);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config(std::move(args), *app.get_subcommand("detect"));
  } catch (const ufo::Error& e) {
    std::cerr << "error [" << ufo::to_string(e.code()) << "] " << e.what() << '\n';
    return 2;
  }
  std::ranges::reverse(args);
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (app.got_subcommand("detect")) return run_detect(detect_args, *app.get_subcommand("detect"));
    return run_eval(eval_args);
  } catch (const ufo::Error& e) {
    std::cerr << "error [" << ufo::to_string(e.code()) << "] " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
