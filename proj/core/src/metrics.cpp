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

#include "comot/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <unordered_map>

#include "comot/matching.hpp"

namespace comot {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct FrameView {
  std::vector<std::size_t> gt;    // dense gt indices
  std::vector<std::size_t> pred;  // dense pred indices
  std::vector<PixelBox> gt_boxes;
  std::vector<PixelBox> pred_boxes;

  double similarity(std::size_t i, std::size_t j) const {
    return pixel_iou(gt_boxes[i], pred_boxes[j]);
  }
};

// Dense per-frame layout shared by every metric.
struct Sequence {
  std::vector<TrackId> gt_ids;
  std::vector<TrackId> pred_ids;
  std::vector<FrameView> frames;  // ascending frame index; frames with no boxes omitted
  std::size_t gt_boxes = 0;
  std::size_t pred_boxes = 0;
};

Sequence layout(const Tracklets& gt, const Tracklets& pred, const ImageSize& image) {
  validate(gt);
  validate(pred);
  Sequence seq;
  std::map<int, FrameView> frames;
  for (const auto& [id, points] : gt) {
    const std::size_t dense = seq.gt_ids.size();
    seq.gt_ids.push_back(id);
    for (const TrackPoint& p : points) {
      FrameView& f = frames[p.frame];
      f.gt.push_back(dense);
      f.gt_boxes.push_back(to_pixel(p.box, image));
      ++seq.gt_boxes;
    }
  }
  for (const auto& [id, points] : pred) {
    const std::size_t dense = seq.pred_ids.size();
    seq.pred_ids.push_back(id);
    for (const TrackPoint& p : points) {
      FrameView& f = frames[p.frame];
      f.pred.push_back(dense);
      f.pred_boxes.push_back(to_pixel(p.box, image));
      ++seq.pred_boxes;
    }
  }
  for (auto& [frame, view] : frames) {
    seq.frames.push_back(std::move(view));
  }
  return seq;
}

// Maximum-score matching via the min-cost solver.
Assignment maximize(const std::vector<double>& scores, std::size_t rows, std::size_t cols) {
  CostMatrix cost(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      cost(i, j) = -scores[i * cols + j];
    }
  }
  return hungarian(cost);
}

std::string fixed(double value, int precision) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}

}  // namespace

ClearMotResult clear_mot(const Tracklets& gt, const Tracklets& pred, const ImageSize& image,
                         double iou_threshold) {
  const Sequence seq = layout(gt, pred, image);
  ClearMotResult r;
  r.gt_boxes = seq.gt_boxes;
  std::vector<std::size_t> last_pred(seq.gt_ids.size(), kNone);      // ever matched
  std::vector<std::size_t> previous_pred(seq.gt_ids.size(), kNone);  // matched last frame

  for (const FrameView& f : seq.frames) {
    const std::size_t n_gt = f.gt.size();
    const std::size_t n_pred = f.pred.size();
    if (n_gt == 0) {
      r.fp += n_pred;
      continue;
    }
    if (n_pred == 0) {
      r.fn += n_gt;
      continue;
    }
    std::vector<double> score(n_gt * n_pred, 0.0);
    for (std::size_t i = 0; i < n_gt; ++i) {
      for (std::size_t j = 0; j < n_pred; ++j) {
        const double sim = f.similarity(i, j);
        if (sim < iou_threshold - kEps) {
          continue;
        }
        const bool persistent = previous_pred[f.gt[i]] == f.pred[j];
        score[i * n_pred + j] = (persistent ? 1000.0 : 0.0) + sim;
      }
    }
    const Assignment match = maximize(score, n_gt, n_pred);
    std::fill(previous_pred.begin(), previous_pred.end(), kNone);
    std::size_t matched = 0;
    for (const auto& [i, j] : match.pairs) {
      if (!(score[i * n_pred + j] > kEps)) {
        continue;
      }
      ++matched;
      const std::size_t g = f.gt[i];
      const std::size_t p = f.pred[j];
      if (last_pred[g] != kNone && last_pred[g] != p) {
        ++r.ids;
      }
      last_pred[g] = p;
      previous_pred[g] = p;
    }
    r.tp += matched;
    r.fn += n_gt - matched;
    r.fp += n_pred - matched;
  }
  if (r.gt_boxes > 0) {
    r.mota = 1.0 - static_cast<double>(r.fn + r.fp + r.ids) / static_cast<double>(r.gt_boxes);
  }
  return r;
}

IdentityResult identity_metrics(const Tracklets& gt, const Tracklets& pred,
                                const ImageSize& image, double iou_threshold) {
  const Sequence seq = layout(gt, pred, image);
  const std::size_t n_gt = seq.gt_ids.size();
  const std::size_t n_pred = seq.pred_ids.size();
  IdentityResult r;
  if (seq.gt_boxes == 0 && seq.pred_boxes == 0) {
    r.idf1 = 1.0;
    return r;
  }
  std::vector<double> overlap(n_gt * n_pred, 0.0);
  for (const FrameView& f : seq.frames) {
    for (std::size_t i = 0; i < f.gt.size(); ++i) {
      for (std::size_t j = 0; j < f.pred.size(); ++j) {
        if (f.similarity(i, j) >= iou_threshold - kEps) {
          overlap[f.gt[i] * n_pred + f.pred[j]] += 1.0;
        }
      }
    }
  }
  std::size_t idtp = 0;
  if (n_gt > 0 && n_pred > 0) {
    const Assignment match = maximize(overlap, n_gt, n_pred);
    for (const auto& [g, p] : match.pairs) {
      const auto count = static_cast<std::size_t>(overlap[g * n_pred + p]);
      if (count > 0) {
        idtp += count;
        r.mapping.emplace_back(seq.gt_ids[g], seq.pred_ids[p]);
      }
    }
  }
  r.idtp = idtp;
  r.idfn = seq.gt_boxes - idtp;
  r.idfp = seq.pred_boxes - idtp;
  const double denom = static_cast<double>(2 * r.idtp + r.idfp + r.idfn);
  r.idf1 = 2.0 * static_cast<double>(r.idtp) / std::max(1.0, denom);
  return r;
}

std::vector<double> hota_alphas() {
  std::vector<double> alphas;
  for (int k = 1; k <= 19; ++k) {
    alphas.push_back(static_cast<double>(k) / 20.0);
  }
  return alphas;
}

HotaResult hota(const Tracklets& gt, const Tracklets& pred, const ImageSize& image) {
  const Sequence seq = layout(gt, pred, image);
  const std::size_t n_gt = seq.gt_ids.size();
  const std::size_t n_pred = seq.pred_ids.size();
  const std::vector<double> alphas = hota_alphas();
  HotaResult r;
  if (seq.gt_boxes == 0 && seq.pred_boxes == 0) {
    for (double a : alphas) {
      r.per_alpha.push_back({a, 0.0, 0.0, 0.0, 0, 0, 0});
    }
    return r;
  }

  // Pass 1: global alignment between identities, from soft per-frame overlap.
  std::vector<double> potential(n_gt * n_pred, 0.0);
  std::vector<double> gt_count(n_gt, 0.0);
  std::vector<double> pred_count(n_pred, 0.0);
  for (const FrameView& f : seq.frames) {
    const std::size_t rows = f.gt.size();
    const std::size_t cols = f.pred.size();
    std::vector<double> sim(rows * cols);
    std::vector<double> row_sum(rows, 0.0);
    std::vector<double> col_sum(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        sim[i * cols + j] = f.similarity(i, j);
        row_sum[i] += sim[i * cols + j];
        col_sum[j] += sim[i * cols + j];
      }
    }
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        const double denom = row_sum[i] + col_sum[j] - sim[i * cols + j];
        if (denom > kEps) {
          potential[f.gt[i] * n_pred + f.pred[j]] += sim[i * cols + j] / denom;
        }
      }
    }
    for (std::size_t g : f.gt) gt_count[g] += 1.0;
    for (std::size_t p : f.pred) pred_count[p] += 1.0;
  }
  std::vector<double> alignment(n_gt * n_pred, 0.0);
  for (std::size_t g = 0; g < n_gt; ++g) {
    for (std::size_t p = 0; p < n_pred; ++p) {
      const double v = potential[g * n_pred + p];
      const double denom = gt_count[g] + pred_count[p] - v;
      alignment[g * n_pred + p] = denom > 0.0 ? v / denom : 0.0;
    }
  }

  // Pass 2: per-frame matching on alignment-weighted similarity, then
  // thresholded at each alpha.
  const std::size_t n_alpha = alphas.size();
  std::vector<std::size_t> tp(n_alpha, 0), fn(n_alpha, 0), fp(n_alpha, 0);
  std::vector<std::vector<double>> matches(n_alpha, std::vector<double>(n_gt * n_pred, 0.0));
  for (const FrameView& f : seq.frames) {
    const std::size_t rows = f.gt.size();
    const std::size_t cols = f.pred.size();
    if (rows == 0 || cols == 0) {
      for (std::size_t a = 0; a < n_alpha; ++a) {
        fn[a] += rows;
        fp[a] += cols;
      }
      continue;
    }
    std::vector<double> sim(rows * cols);
    std::vector<double> score(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        sim[i * cols + j] = f.similarity(i, j);
        score[i * cols + j] = alignment[f.gt[i] * n_pred + f.pred[j]] * sim[i * cols + j];
      }
    }
    const Assignment match = maximize(score, rows, cols);
    for (std::size_t a = 0; a < n_alpha; ++a) {
      std::size_t matched = 0;
      for (const auto& [i, j] : match.pairs) {
        if (sim[i * cols + j] >= alphas[a] - kEps) {
          ++matched;
          matches[a][f.gt[i] * n_pred + f.pred[j]] += 1.0;
        }
      }
      tp[a] += matched;
      fn[a] += rows - matched;
      fp[a] += cols - matched;
    }
  }

  double hota_sum = 0.0, deta_sum = 0.0, assa_sum = 0.0;
  for (std::size_t a = 0; a < n_alpha; ++a) {
    double weighted = 0.0;
    for (std::size_t g = 0; g < n_gt; ++g) {
      for (std::size_t p = 0; p < n_pred; ++p) {
        const double m = matches[a][g * n_pred + p];
        if (m > 0.0) {
          weighted += m * m / std::max(1.0, gt_count[g] + pred_count[p] - m);
        }
      }
    }
    HotaAlphaRow row;
    row.alpha = alphas[a];
    row.tp = tp[a];
    row.fn = fn[a];
    row.fp = fp[a];
    row.assa = weighted / std::max(1.0, static_cast<double>(tp[a]));
    row.deta = static_cast<double>(tp[a]) /
               std::max(1.0, static_cast<double>(tp[a] + fn[a] + fp[a]));
    row.hota = std::sqrt(row.deta * row.assa);
    hota_sum += row.hota;
    deta_sum += row.deta;
    assa_sum += row.assa;
    r.per_alpha.push_back(row);
  }
  r.hota = hota_sum / static_cast<double>(n_alpha);
  r.deta = deta_sum / static_cast<double>(n_alpha);
  r.assa = assa_sum / static_cast<double>(n_alpha);
  return r;
}

MetricsReport evaluate(const Tracklets& gt, const Tracklets& pred, const ImageSize& image,
                       double iou_threshold) {
  const ClearMotResult clear = clear_mot(gt, pred, image, iou_threshold);
  const IdentityResult id = identity_metrics(gt, pred, image, iou_threshold);
  HotaResult h = hota(gt, pred, image);
  MetricsReport report;
  report.hota = h.hota;
  report.deta = h.deta;
  report.assa = h.assa;
  report.mota = clear.mota;
  report.idf1 = id.idf1;
  report.ids = clear.ids;
  report.fp = clear.fp;
  report.fn = clear.fn;
  report.per_alpha = std::move(h.per_alpha);
  return report;
}

std::string report_to_json(const MetricsReport& report) {
  using nlohmann::json;
  const auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json per_alpha = json::array();
  for (const HotaAlphaRow& row : report.per_alpha) {
    per_alpha.push_back({{"alpha", row.alpha},
                         {"hota", row.hota},
                         {"deta", row.deta},
                         {"assa", row.assa},
                         {"tp", row.tp},
                         {"fn", row.fn},
                         {"fp", row.fp}});
  }
  // ordered_json keeps the documented key order in the output file.
  nlohmann::ordered_json doc;
  doc["hota"] = opt(report.hota);
  doc["deta"] = opt(report.deta);
  doc["assa"] = opt(report.assa);
  doc["mota"] = opt(report.mota);
  doc["idf1"] = report.idf1;
  doc["ids"] = report.ids;
  doc["fp"] = report.fp;
  doc["fn"] = report.fn;
  doc["per_alpha"] = per_alpha;
  return doc.dump(2) + "\n";
}

std::string report_to_table(const MetricsReport& report) {
  const auto real = [](const std::optional<double>& v) {
    return v ? fixed(*v, 4) : std::string("undefined");
  };
  const std::vector<std::pair<std::string, std::string>> rows = {
      {"HOTA", real(report.hota)}, {"DetA", real(report.deta)}, {"AssA", real(report.assa)},
      {"MOTA", real(report.mota)}, {"IDF1", fixed(report.idf1, 4)},
      {"IDS", std::to_string(report.ids)}, {"FP", std::to_string(report.fp)},
      {"FN", std::to_string(report.fn)}};
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, v.size());
  std::string out;
  for (const auto& [k, v] : rows) {
    out += k + std::string(8 - k.size(), ' ') + std::string(width - v.size(), ' ') + v + "\n";
  }
  return out;
}

std::vector<std::pair<TrackId, double>> identity_completeness(const Tracklets& gt,
                                                              const Tracklets& pred,
                                                              const ImageSize& image,
                                                              double iou_threshold) {
  const auto pred_frames = by_frame(pred);
  std::vector<std::pair<TrackId, double>> out;
  for (const auto& [id, points] : gt) {
    if (points.empty()) {
      out.emplace_back(id, 0.0);
      continue;
    }
    std::size_t best_run = 0;
    std::size_t run = 0;
    std::optional<TrackId> run_id;
    for (const TrackPoint& p : points) {
      std::optional<TrackId> holder;
      double best = -1.0;
      if (const auto it = pred_frames.find(p.frame); it != pred_frames.end()) {
        const PixelBox g = to_pixel(p.box, image);
        for (const FrameDetection& d : it->second) {
          const double sim = pixel_iou(g, to_pixel(d.box, image));
          if (sim >= iou_threshold - kEps && sim > best) {
            best = sim;
            holder = d.id;
          }
        }
      }
      if (!holder) {
        run = 0;
        run_id.reset();
      } else if (run_id == holder) {
        ++run;
      } else {
        run = 1;
        run_id = holder;
      }
      best_run = std::max(best_run, run);
    }
    out.emplace_back(id, static_cast<double>(best_run) / static_cast<double>(points.size()));
  }
  return out;
}

}  // namespace comot
