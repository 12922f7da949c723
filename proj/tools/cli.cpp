// Copyright 2026 The comot Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "comot/config.hpp"
#include "comot/metrics.hpp"
#include "comot/mot_io.hpp"
#include "comot/pipeline.hpp"
#include "comot/simulator.hpp"
#include "comot/tracker.hpp"

namespace comot::cli {
namespace {

void report(std::ostream& err, std::string msg) {
  for (char& ch : msg) {
    if (ch == '\n') ch = ' ';
  }
  err << "comot: error: " << msg << "\n";
}

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << contents;
}

std::string fixed(double value, int precision) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}

// Options shared by every subcommand that resolves a RunConfig.
struct ConfigOptions {
  std::string config_path;
  std::vector<std::string> settings;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "flat key = value config file")->check(CLI::ExistingFile);
    app->add_option("--set", settings, "override one config key, e.g. --set shadow.ns=5");
    app->add_option("--seed", seed, "master seed (overrides the config file)");
  }

  RunConfig resolve(const std::optional<SceneConfig>& scene) const {
    RunConfig cfg;
    if (!config_path.empty()) {
      cfg = load_run_config(config_path);
    }
    if (scene) {
      cfg.scene = *scene;
    }
    for (const std::string& s : settings) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("--set expects key=value, got '" + s + "'");
      }
      apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (seed) {
      cfg.seed = *seed;
    }
    return cfg;
  }
};

// Inference / assignment knobs exposed as first-class flags.
struct ShadowOptions {
  std::optional<int> ns;
  std::optional<std::string> lambda;
  std::optional<std::string> phi;
  std::optional<double> tau;
  std::optional<int> patience;
  std::optional<std::string> init;
  bool tala = false;
  bool cola = false;

  void attach(CLI::App* app, bool inference) {
    app->add_option("--ns", ns, "shadows per set");
    app->add_option("--lambda", lambda, "training cost reduction: min, mean, max");
    app->add_option("--init", init, "shadow initialization: rand, copy, noise");
    if (inference) {
      app->add_option("--phi", phi, "inference score reduction: min, mean, max");
      app->add_option("--tau", tau, "confidence threshold");
      app->add_option("--patience", patience, "frames a track may stay below tau");
    }
    auto* t = app->add_flag("--tala", tala, "TALA training targets");
    auto* c = app->add_flag("--cola", cola, "COLA training targets (default)");
    t->excludes(c);
  }

  void apply(RunConfig& cfg) const {
    auto& s = cfg.tracker.shadow;
    if (ns) s.n_shadows = *ns;
    if (lambda) s.lambda = parse_reduction(*lambda);
    if (phi) s.phi = parse_reduction(*phi);
    if (tau) s.tau = *tau;
    if (init) s.init = parse_init_method(*init);
    if (patience) cfg.tracker.patience = *patience;
    if (tala) cfg.tracker.mode = LabelMode::kTala;
    if (cola) cfg.tracker.mode = LabelMode::kCola;
  }
};

Scene load_scene(const std::string& path) { return scene_from_json(read_file(path)); }

ordered_json config_json(const RunConfig& cfg) {
  ordered_json j = ordered_json::object();
  for (const auto& [key, value] : flatten(cfg)) {
    j[key] = value;
  }
  return j;
}

int cmd_simulate(const ConfigOptions& co, const std::string& out_path, std::string gt_path,
                 std::ostream& out) {
  RunConfig cfg = co.resolve(std::nullopt);
  cfg.validate();
  SceneConfig sc = cfg.scene;
  sc.seed = cfg.seed;
  const Scene scene = generate_scene(sc);
  write_file(out_path, scene_to_json(scene));
  if (gt_path.empty()) {
    gt_path = (fs::path(out_path).parent_path() / "gt.txt").string();
  }
  write_mot(scene.ground_truth(), sc.image, gt_path);
  out << "wrote " << out_path << " and " << gt_path << " (" << scene.tracks.size()
      << " objects, " << sc.frames << " frames)\n";
  return 0;
}

int cmd_track(const ConfigOptions& co, const ShadowOptions& so, const std::string& scene_path,
              const std::string& out_path, std::string manifest_path, std::ostream& out) {
  const Scene scene = load_scene(scene_path);
  RunConfig cfg = co.resolve(scene.config);
  so.apply(cfg);
  cfg.validate();
  const PipelineResult run = run_pipeline(scene, cfg);
  write_mot(run.tracklets, scene.config.image, out_path);

  ordered_json manifest;
  manifest["version"] = 1;
  manifest["command"] = "track";
  manifest["scene"] = scene_path;
  manifest["seed"] = cfg.seed;
  manifest["config"] = config_json(cfg);
  ordered_json targets = ordered_json::array();
  for (const LayerTargetStats& s : run.training_targets) {
    targets.push_back({{"layer", s.layer},
                       {"positives_per_frame", s.positives_per_frame},
                       {"mean_matched_cost", s.mean_matched_cost},
                       {"matched", s.matched}});
  }
  manifest["training_targets"] = targets;
  if (manifest_path.empty()) {
    manifest_path = fs::path(out_path).replace_extension(".manifest.json").string();
  }
  write_file(manifest_path, manifest.dump(2) + "\n");
  out << "wrote " << out_path << " (" << run.tracklets.size() << " tracks, "
      << box_count(run.tracklets) << " boxes) and " << manifest_path << "\n";
  return 0;
}

int cmd_eval(const std::string& gt_path, const std::string& results_path,
             const std::string& out_path, const std::string& scene_path, ImageSize image,
             double iou_threshold, std::ostream& out) {
  if (!scene_path.empty()) {
    image = load_scene(scene_path).config.image;
  }
  const Tracklets gt = read_mot(gt_path, image);
  const Tracklets pred = read_mot(results_path, image);
  const MetricsReport report = evaluate(gt, pred, image, iou_threshold);
  if (!out_path.empty()) {
    write_file(out_path, report_to_json(report));
  }
  out << report_to_table(report);
  return 0;
}

int cmd_ablate(const ConfigOptions& co, const ShadowOptions& so, const std::string& scene_path,
               const std::string& grid_spec, int trials, const std::string& out_path,
               std::ostream& out) {
  const Scene scene = load_scene(scene_path);
  RunConfig cfg = co.resolve(scene.config);
  so.apply(cfg);
  cfg.validate();
  const AblationGrid grid = parse_ablation_grid(grid_spec, cfg);
  const auto rows = run_ablation(scene, cfg, grid, trials);
  write_file(out_path, ablation_csv(rows));
  out << "wrote " << out_path << " (" << rows.size() << " configurations x " << trials
      << " trials)\n";
  return 0;
}

int cmd_assign_debug(const ConfigOptions& co, const ShadowOptions& so,
                     const std::string& scene_path, int frame, int layer, std::ostream& out) {
  const Scene scene = load_scene(scene_path);
  RunConfig cfg = co.resolve(scene.config);
  so.apply(cfg);
  cfg.validate();
  if (frame < 1 || frame > scene.frames()) {
    throw std::out_of_range("--frame " + std::to_string(frame) + " outside [1, " +
                            std::to_string(scene.frames()) + "]");
  }
  const int layers = cfg.tracker.layers;
  if (layer < 1 || layer > layers) {
    throw std::out_of_range("--layer " + std::to_string(layer) + " outside [1, " +
                            std::to_string(layers) + "]");
  }

  Tracker tracker(cfg.tracker, cfg.seed);
  for (int f = 1; f < frame; ++f) {
    const DecodedFrame d = oracle_decode(scene, f, tracker.tracks(), tracker.detection_bank(),
                                         cfg.oracle, layers, cfg.seed);
    tracker.step(d.final_layer());
  }
  const DecodedFrame decoded = oracle_decode(scene, frame, tracker.tracks(),
                                             tracker.detection_bank(), cfg.oracle, layers, cfg.seed);
  std::vector<std::optional<TrackId>> held;
  std::vector<TrackId> tracked;
  for (const ShadowSet& s : tracker.tracks()) {
    held.push_back(s.latent);
    if (s.latent) tracked.push_back(*s.latent);
  }
  const FrameGroundTruth gt = emit_training_targets(scene, frame, tracked);
  const auto n_shadows = static_cast<std::size_t>(cfg.tracker.shadow.n_shadows);
  const LabelAssignment a = assign_layer(cfg.tracker.mode, gt, held, decoded.detection_layer(layer),
                                         n_shadows, layer, layers, cfg.cost,
                                         cfg.tracker.shadow.lambda);

  const auto ids = [](const std::vector<GroundTruthObject>& objs) {
    std::string s;
    for (const auto& o : objs) s += " " + std::to_string(o.id);
    return s.empty() ? std::string(" (none)") : s;
  };
  out << "frame " << frame << " layer " << layer << "/" << layers << " mode "
      << to_string(cfg.tracker.mode) << " lambda " << to_string(cfg.tracker.shadow.lambda)
      << " ns " << n_shadows << "\n";
  out << "tracking sets (track id -> object):";
  for (const ShadowSet& s : tracker.tracks()) {
    out << " " << *s.identity << "->" << (s.latent ? std::to_string(*s.latent) : "none");
  }
  out << (tracker.tracks().empty() ? " (none)\n" : "\n");
  out << "tracked objects:" << ids(gt.tracked) << "\n";
  out << "newborn objects:" << ids(gt.newborn) << "\n";
  out << "detection candidates:" << ids(a.targets.detection_candidates) << "\n";
  out << "track targets:";
  for (const TrackTarget& t : a.targets.track_targets) {
    out << " " << t.track << "->" << t.target.describe();
  }
  out << (a.targets.track_targets.empty() ? " (none)\n" : "\n");

  const CostMatrix& m = a.detection_match.reduced;
  out << "reduced cost matrix (" << m.rows() << " detection sets x " << m.cols()
      << " candidates, lambda = " << to_string(cfg.tracker.shadow.lambda) << ")\n";
  constexpr int kWidth = 10;
  const auto pad = [](std::string s, std::size_t w) {
    return std::string(w > s.size() ? w - s.size() : 0, ' ') + s;
  };
  out << pad("", 5);
  for (const std::string& c : m.col_labels) out << pad(c, kWidth);
  out << "\n";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << pad(m.row_labels[r], 5);
    for (std::size_t c = 0; c < m.cols(); ++c) out << pad(fixed(m(r, c), 4), kWidth);
    out << "\n";
  }
  out << "assignment:";
  for (const auto& [r, c] : a.detection_match.assignment.pairs) {
    out << " " << m.row_labels[r] << "->" << m.col_labels[c];
  }
  out << (a.detection_match.assignment.pairs.empty() ? " (none)\n" : "\n");
  out << "total matched cost: " << fixed(a.detection_match.assignment.total_cost(m), 6) << "\n";
  out << "background detection sets: " << a.detection_match.assignment.unmatched_rows.size()
      << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"comot: shadow-set label assignment, oracle-driven tracking and MOT evaluation"};
  app.name("comot");
  app.footer("\n" + config_reference());
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "generate a synthetic scene and its gt.txt");
  ConfigOptions sim_cfg;
  sim_cfg.attach(simulate);
  std::string sim_out, sim_gt;
  simulate->add_option("-o,--output", sim_out, "scene JSON path")->required();
  simulate->add_option("--gt", sim_gt, "ground-truth MOT path (default: gt.txt next to -o)");

  // track
  auto* track = app.add_subcommand("track", "run oracle decoder + tracker on a scene");
  ConfigOptions track_cfg;
  ShadowOptions track_shadow;
  track_cfg.attach(track);
  track_shadow.attach(track, true);
  std::string track_scene, track_out, track_manifest;
  track->add_option("--scene", track_scene, "scene JSON")->required()->check(CLI::ExistingFile);
  track->add_option("-o,--output", track_out, "MOT results path")->required();
  track->add_option("--manifest", track_manifest,
                    "run manifest path (default: results path with .manifest.json)");

  // eval
  auto* eval = app.add_subcommand("eval", "score MOT results against ground truth");
  std::string eval_gt, eval_results, eval_out, eval_scene;
  ImageSize eval_image;
  double eval_iou = 0.5;
  eval->add_option("--gt", eval_gt, "ground-truth MOT file")->required()->check(CLI::ExistingFile);
  eval->add_option("--results", eval_results, "result MOT file")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("-o,--output", eval_out, "metrics report JSON path");
  eval->add_option("--scene", eval_scene, "take the image size from this scene JSON")
      ->check(CLI::ExistingFile);
  eval->add_option("--width", eval_image.width, "image width in pixels")->capture_default_str();
  eval->add_option("--height", eval_image.height, "image height in pixels")->capture_default_str();
  eval->add_option("--iou", eval_iou, "IoU gate for CLEAR-MOT and IDF1")->capture_default_str();

  // ablate
  auto* ablate = app.add_subcommand("ablate", "sweep shadow-set configurations on a scene");
  ConfigOptions ablate_cfg;
  ShadowOptions ablate_shadow;
  ablate_cfg.attach(ablate);
  ablate_shadow.attach(ablate, true);
  std::string ablate_scene, ablate_out, ablate_grid = "lambda x phi";
  int ablate_trials = 3;
  ablate->add_option("--scene", ablate_scene, "scene JSON")->required()->check(CLI::ExistingFile);
  ablate->add_option("--grid", ablate_grid, "axes to sweep, e.g. lambda×phi, ns, init")
      ->capture_default_str();
  ablate->add_option("--trials", ablate_trials, "seeded trials per configuration")
      ->capture_default_str();
  ablate->add_option("-o,--output", ablate_out, "CSV path")->required();

  // assign-debug
  auto* debug = app.add_subcommand("assign-debug", "show label assignment at one frame/layer");
  ConfigOptions debug_cfg;
  ShadowOptions debug_shadow;
  debug_cfg.attach(debug);
  debug_shadow.attach(debug, false);
  std::string debug_scene;
  int debug_frame = 1;
  int debug_layer = 1;
  debug->add_option("--scene", debug_scene, "scene JSON")->required()->check(CLI::ExistingFile);
  debug->add_option("--frame", debug_frame, "1-based frame")->required();
  debug->add_option("--layer", debug_layer, "1-based decoder layer")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report(err, e.what());
    return 2;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim_cfg, sim_out, sim_gt, out);
    if (track->parsed()) {
      return cmd_track(track_cfg, track_shadow, track_scene, track_out, track_manifest, out);
    }
    if (eval->parsed()) {
      return cmd_eval(eval_gt, eval_results, eval_out, eval_scene, eval_image, eval_iou, out);
    }
    if (ablate->parsed()) {
      return cmd_ablate(ablate_cfg, ablate_shadow, ablate_scene, ablate_grid, ablate_trials,
                        ablate_out, out);
    }
    if (debug->parsed()) {
      return cmd_assign_debug(debug_cfg, debug_shadow, debug_scene, debug_frame, debug_layer, out);
    }
  } catch (const std::exception& e) {
    report(err, e.what());
    return 1;
  }
  return 1;
}

}  // namespace comot::cli
