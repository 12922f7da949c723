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

#include "comot/pipeline.hpp"

#include <future>
#include <set>
#include <sstream>
#include <stdexcept>

#include "comot/mot_io.hpp"
#include "comot/random.hpp"

namespace comot {

PipelineResult run_pipeline(const Scene& scene, const RunConfig& cfg, bool with_training_targets) {
  cfg.tracker.validate();
  cfg.oracle.validate();
  cfg.cost.validate();
  const int layers = cfg.tracker.layers;
  const auto n_shadows = static_cast<std::size_t>(cfg.tracker.shadow.n_shadows);

  Tracker tracker(cfg.tracker, cfg.seed);
  PipelineResult result;
  std::vector<double> positives(static_cast<std::size_t>(layers), 0.0);
  std::vector<double> cost_sum(static_cast<std::size_t>(layers), 0.0);
  std::vector<std::size_t> matched(static_cast<std::size_t>(layers), 0);

  for (int frame = 1; frame <= scene.frames(); ++frame) {
    const DecodedFrame decoded = oracle_decode(scene, frame, tracker.tracks(),
                                               tracker.detection_bank(), cfg.oracle, layers,
                                               cfg.seed);
    if (with_training_targets) {
      // Tracked identities are the scene objects the live tracking sets hold.
      std::vector<std::optional<TrackId>> held;
      std::vector<TrackId> tracked;
      for (const ShadowSet& set : tracker.tracks()) {
        held.push_back(set.latent);
        if (set.latent) tracked.push_back(*set.latent);
      }
      const FrameGroundTruth gt = emit_training_targets(scene, frame, tracked);
      for (int l = 1; l <= layers; ++l) {
        const LabelAssignment a =
            assign_layer(cfg.tracker.mode, gt, held, decoded.detection_layer(l), n_shadows, l,
                         layers, cfg.cost, cfg.tracker.shadow.lambda);
        const auto idx = static_cast<std::size_t>(l - 1);
        matched[idx] += a.detection_match.assignment.pairs.size();
        cost_sum[idx] += a.detection_match.assignment.total_cost(a.detection_match.reduced);
      }
    }
    append(result.tracklets, tracker.step(decoded.final_layer()));
  }

  if (with_training_targets) {
    for (int l = 1; l <= layers; ++l) {
      const auto idx = static_cast<std::size_t>(l - 1);
      LayerTargetStats s;
      s.layer = l;
      s.matched = matched[idx];
      s.positives_per_frame = static_cast<double>(matched[idx]) / scene.frames();
      s.mean_matched_cost = matched[idx] > 0 ? cost_sum[idx] / static_cast<double>(matched[idx]) : 0.0;
      result.training_targets.push_back(s);
    }
  }
  return result;
}

AblationGrid parse_ablation_grid(std::string_view spec, const RunConfig& base) {
  std::string normalized;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    // U+00D7 MULTIPLICATION SIGN is two bytes in UTF-8.
    if (spec.substr(i, 2) == "\xc3\x97") {
      normalized += ',';
      ++i;
    } else if (spec[i] == 'x' || spec[i] == '*' || spec[i] == ',') {
      normalized += ',';
    } else if (spec[i] != ' ' && spec[i] != '\t') {
      normalized += spec[i];
    }
  }
  const auto& shadow = base.tracker.shadow;
  AblationGrid grid{{}, {shadow.lambda}, {shadow.phi}, {shadow.n_shadows}, {shadow.init}};
  std::istringstream in(normalized);
  std::string axis;
  std::set<std::string> seen;
  while (std::getline(in, axis, ',')) {
    if (axis.empty()) continue;
    if (!seen.insert(axis).second) {
      throw std::invalid_argument("ablation axis '" + axis + "' named twice");
    }
    if (axis == "lambda") {
      grid.axes.push_back(AblationAxis::kLambda);
      grid.lambdas = {Reduction::kMin, Reduction::kMean, Reduction::kMax};
    } else if (axis == "phi") {
      grid.axes.push_back(AblationAxis::kPhi);
      grid.phis = {Reduction::kMin, Reduction::kMean, Reduction::kMax};
    } else if (axis == "ns") {
      grid.axes.push_back(AblationAxis::kShadows);
      grid.shadows = {1, 2, 3, 4, 5, 6};
    } else if (axis == "init") {
      grid.axes.push_back(AblationAxis::kInit);
      grid.inits = {InitMethod::kRand, InitMethod::kCopy, InitMethod::kNoise};
    } else {
      throw std::invalid_argument("unknown ablation axis '" + axis +
                                  "' (expected lambda, phi, ns or init)");
    }
  }
  if (grid.axes.empty()) {
    throw std::invalid_argument("ablation grid names no axis");
  }
  return grid;
}

namespace {

AblationRow run_cell(const Scene& scene, RunConfig cfg, int trials) {
  AblationRow row;
  const auto& s = cfg.tracker.shadow;
  row.lambda = s.lambda;
  row.phi = s.phi;
  row.shadows = s.n_shadows;
  row.init = s.init;
  row.trials = trials;
  const std::uint64_t base_seed = cfg.seed;
  double mid_layers = 0.0;
  for (int t = 0; t < trials; ++t) {
    cfg.seed = Rng::derive(base_seed, {stream::kAblationTrial, static_cast<std::uint64_t>(t)})
                   .next_u64();
    const PipelineResult run = run_pipeline(scene, cfg);
    const MetricsReport m =
        evaluate(scene.ground_truth(), run.tracklets, scene.config.image, cfg.iou_threshold);
    row.hota += m.hota.value_or(0.0);
    row.deta += m.deta.value_or(0.0);
    row.assa += m.assa.value_or(0.0);
    row.mota += m.mota.value_or(0.0);
    row.idf1 += m.idf1;
    row.ids += static_cast<double>(m.ids);
    row.fp += static_cast<double>(m.fp);
    row.fn += static_cast<double>(m.fn);
    double cost = 0.0;
    for (const LayerTargetStats& l : run.training_targets) {
      if (l.layer < cfg.tracker.layers) {
        row.train_positives_mid += l.positives_per_frame;
        mid_layers += 1.0;
      } else {
        row.train_positives_last += l.positives_per_frame;
      }
      cost += l.mean_matched_cost;
    }
    row.train_cost += cost / static_cast<double>(run.training_targets.size());
  }
  const double n = static_cast<double>(trials);
  for (double* v : {&row.hota, &row.deta, &row.assa, &row.mota, &row.idf1, &row.ids, &row.fp,
                    &row.fn, &row.train_positives_last, &row.train_cost}) {
    *v /= n;
  }
  row.train_positives_mid = mid_layers > 0.0 ? row.train_positives_mid / mid_layers : 0.0;
  return row;
}

}  // namespace

std::vector<AblationRow> run_ablation(const Scene& scene, const RunConfig& base,
                                      const AblationGrid& grid, int trials) {
  if (trials < 1) {
    throw std::invalid_argument("ablation needs at least one trial");
  }
  std::vector<RunConfig> cells;
  for (Reduction lambda : grid.lambdas) {
    for (Reduction phi : grid.phis) {
      for (int ns : grid.shadows) {
        for (InitMethod init : grid.inits) {
          RunConfig cfg = base;
          cfg.tracker.shadow.lambda = lambda;
          cfg.tracker.shadow.phi = phi;
          cfg.tracker.shadow.n_shadows = ns;
          cfg.tracker.shadow.init = init;
          cells.push_back(cfg);
        }
      }
    }
  }
  // Cells are independent; results are collected in grid order.
  std::vector<std::future<AblationRow>> pending;
  pending.reserve(cells.size());
  for (const RunConfig& cfg : cells) {
    pending.push_back(std::async(std::launch::async, run_cell, std::cref(scene), cfg, trials));
  }
  std::vector<AblationRow> rows;
  rows.reserve(pending.size());
  for (auto& f : pending) {
    rows.push_back(f.get());
  }
  return rows;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::string out =
      "lambda,phi,ns,init,trials,hota,deta,assa,mota,idf1,ids,fp,fn,"
      "train_pos_mid,train_pos_last,train_cost\n";
  for (const AblationRow& r : rows) {
    out += std::string(to_string(r.lambda)) + "," + std::string(to_string(r.phi)) + "," +
           std::to_string(r.shadows) + "," + std::string(to_string(r.init)) + "," +
           std::to_string(r.trials);
    for (double v : {r.hota, r.deta, r.assa, r.mota, r.idf1, r.ids, r.fp, r.fn,
                     r.train_positives_mid, r.train_positives_last, r.train_cost}) {
      out += "," + format_real(v);
    }
    out += "\n";
  }
  return out;
}

}  // namespace comot
