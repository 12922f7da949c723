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

#include "comot/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "comot/mot_io.hpp"

namespace comot {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(std::string(key) + ": invalid number '" + std::string(text) + "'");
  }
  return value;
}

template <typename Fn>
auto wrap(std::string_view key, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

struct Field {
  ConfigKey doc;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

Field real_field(std::string key, std::string help, double& (*ref)(RunConfig&)) {
  const std::string k = key;
  return {{std::move(key), std::move(help)},
          [ref, k](RunConfig& c, std::string_view v) { ref(c) = parse_number<double>(k, v); },
          [ref](const RunConfig& c) {
            RunConfig copy = c;
            return format_real(ref(copy));
          }};
}

template <typename Int>
Field int_field(std::string key, std::string help, Int& (*ref)(RunConfig&)) {
  const std::string k = key;
  return {{std::move(key), std::move(help)},
          [ref, k](RunConfig& c, std::string_view v) { ref(c) = parse_number<Int>(k, v); },
          [ref](const RunConfig& c) {
            RunConfig copy = c;
            return std::to_string(ref(copy));
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(int_field<std::uint64_t>(
        "seed", "master seed for scene, query bank and oracle streams",
        [](RunConfig& c) -> std::uint64_t& { return c.seed; }));

    f.push_back(int_field<int>("scene.frames", "sequence length in frames",
                               [](RunConfig& c) -> int& { return c.scene.frames; }));
    f.push_back(int_field<int>("scene.objects", "number of ground-truth objects",
                               [](RunConfig& c) -> int& { return c.scene.objects; }));
    f.push_back({{"scene.schedule", "newborn schedule: all-at-start (enclosed scene) or uniform"},
                 [](RunConfig& c, std::string_view v) {
                   c.scene.schedule = wrap("scene.schedule", [&] { return parse_newborn_schedule(v); });
                 },
                 [](const RunConfig& c) { return std::string(to_string(c.scene.schedule)); }});
    f.push_back(real_field("scene.speed", "std of initial per-axis velocity (normalized/frame)",
                           [](RunConfig& c) -> double& { return c.scene.speed; }));
    f.push_back(real_field("scene.jitter", "std of per-frame velocity jitter",
                           [](RunConfig& c) -> double& { return c.scene.jitter; }));
    f.push_back(real_field("scene.min_size", "smallest normalized box side",
                           [](RunConfig& c) -> double& { return c.scene.min_size; }));
    f.push_back(real_field("scene.max_size", "largest normalized box side",
                           [](RunConfig& c) -> double& { return c.scene.max_size; }));
    f.push_back({{"scene.occlusions", "occlusion events, e.g. 3:10-20;5:30-40 (object:start-end)"},
                 [](RunConfig& c, std::string_view v) {
                   c.scene.occlusions = wrap("scene.occlusions", [&] { return parse_occlusions(v); });
                 },
                 [](const RunConfig& c) { return format_occlusions(c.scene.occlusions); }});
    f.push_back(real_field("scene.width", "image width in pixels",
                           [](RunConfig& c) -> double& { return c.scene.image.width; }));
    f.push_back(real_field("scene.height", "image height in pixels",
                           [](RunConfig& c) -> double& { return c.scene.image.height; }));
    f.push_back(int_field<int>("scene.classes", "number of object classes",
                               [](RunConfig& c) -> int& { return c.scene.classes; }));

    f.push_back(real_field("oracle.box_noise", "per-shadow box noise std at decoder layer 1",
                           [](RunConfig& c) -> double& { return c.oracle.box_noise; }));
    f.push_back(real_field("oracle.base_score", "confidence of a shadow that sees its object",
                           [](RunConfig& c) -> double& { return c.oracle.base_score; }));
    f.push_back(real_field("oracle.occlusion_drop", "score reduction while occluded",
                           [](RunConfig& c) -> double& { return c.oracle.occlusion_drop; }));
    f.push_back(real_field("oracle.p_corrupt", "per-shadow probability of a zeroed score",
                           [](RunConfig& c) -> double& { return c.oracle.p_corrupt; }));
    f.push_back(real_field("oracle.refinement", "per-layer noise factor r; layer l noise ~ r^(l-1)",
                           [](RunConfig& c) -> double& { return c.oracle.refinement; }));
    f.push_back(real_field("oracle.fp_rate", "probability an idle detection set fires",
                           [](RunConfig& c) -> double& { return c.oracle.fp_rate; }));
    f.push_back(real_field("oracle.fp_score", "score of a false-positive firing",
                           [](RunConfig& c) -> double& { return c.oracle.fp_score; }));
    f.push_back(real_field("oracle.background_score", "score of an idle set",
                           [](RunConfig& c) -> double& { return c.oracle.background_score; }));

    f.push_back(int_field<int>("shadow.ns", "shadows per set (N_S)",
                               [](RunConfig& c) -> int& { return c.tracker.shadow.n_shadows; }));
    f.push_back({{"shadow.init", "shadow initialization: rand, copy or noise"},
                 [](RunConfig& c, std::string_view v) {
                   c.tracker.shadow.init = wrap("shadow.init", [&] { return parse_init_method(v); });
                 },
                 [](const RunConfig& c) { return std::string(to_string(c.tracker.shadow.init)); }});
    f.push_back(real_field("shadow.sigma_p", "position noise std for noise init",
                           [](RunConfig& c) -> double& { return c.tracker.shadow.sigma_p; }));
    f.push_back(real_field("shadow.sigma_x", "embedding noise std for noise init",
                           [](RunConfig& c) -> double& { return c.tracker.shadow.sigma_x; }));
    f.push_back({{"shadow.lambda", "training cost reduction over a set: min, mean or max"},
                 [](RunConfig& c, std::string_view v) {
                   c.tracker.shadow.lambda = wrap("shadow.lambda", [&] { return parse_reduction(v); });
                 },
                 [](const RunConfig& c) { return std::string(to_string(c.tracker.shadow.lambda)); }});
    f.push_back({{"shadow.phi", "inference score reduction over a set: min, mean or max"},
                 [](RunConfig& c, std::string_view v) {
                   c.tracker.shadow.phi = wrap("shadow.phi", [&] { return parse_reduction(v); });
                 },
                 [](const RunConfig& c) { return std::string(to_string(c.tracker.shadow.phi)); }});
    f.push_back(real_field("shadow.tau", "confidence threshold on the representative score",
                           [](RunConfig& c) -> double& { return c.tracker.shadow.tau; }));
    f.push_back(int_field<int>("shadow.dim", "query embedding dimension",
                               [](RunConfig& c) -> int& { return c.tracker.shadow.embedding_dim; }));

    f.push_back(int_field<int>("tracker.layers", "decoder layer count L",
                               [](RunConfig& c) -> int& { return c.tracker.layers; }));
    f.push_back(int_field<std::size_t>(
        "tracker.detection_sets", "detection sets in the query bank",
        [](RunConfig& c) -> std::size_t& { return c.tracker.n_detection_sets; }));
    f.push_back(int_field<int>("tracker.patience", "frames a track may stay below tau",
                               [](RunConfig& c) -> int& { return c.tracker.patience; }));
    f.push_back({{"tracker.mode", "training label assignment: tala or cola"},
                 [](RunConfig& c, std::string_view v) {
                   c.tracker.mode = wrap("tracker.mode", [&] { return parse_label_mode(v); });
                 },
                 [](const RunConfig& c) { return std::string(to_string(c.tracker.mode)); }});

    f.push_back({{"cost.preset", "set cost.class/l1/giou at once: detr (2,5,2) or literal (1,1,1)"},
                 [](RunConfig& c, std::string_view v) {
                   const CostWeights base = v == "detr"      ? CostWeights::detr()
                                            : v == "literal" ? CostWeights::unit_weights()
                                                             : throw ConfigError(
                                                                   "cost.preset: unknown preset '" +
                                                                   std::string(v) + "'");
                   c.cost.w_class = base.w_class;
                   c.cost.w_l1 = base.w_l1;
                   c.cost.w_giou = base.w_giou;
                 },
                 nullptr});
    f.push_back(real_field("cost.class", "weight of the focal classification cost",
                           [](RunConfig& c) -> double& { return c.cost.w_class; }));
    f.push_back(real_field("cost.l1", "weight of the L1 box cost",
                           [](RunConfig& c) -> double& { return c.cost.w_l1; }));
    f.push_back(real_field("cost.giou", "weight of the GIoU cost",
                           [](RunConfig& c) -> double& { return c.cost.w_giou; }));
    f.push_back(real_field("cost.alpha", "focal alpha",
                           [](RunConfig& c) -> double& { return c.cost.alpha; }));
    f.push_back(real_field("cost.gamma", "focal gamma",
                           [](RunConfig& c) -> double& { return c.cost.gamma; }));
    f.push_back(real_field("cost.eps", "log clamp epsilon of the focal cost",
                           [](RunConfig& c) -> double& { return c.cost.epsilon; }));

    f.push_back(real_field("eval.iou_threshold", "IoU gate for CLEAR-MOT and IDF1",
                           [](RunConfig& c) -> double& { return c.iou_threshold; }));
    return f;
  }();
  return table;
}

const Field* find_field(std::string_view key) {
  for (const Field& f : fields()) {
    if (f.doc.key == key) {
      return &f;
    }
  }
  return nullptr;
}

}  // namespace

void RunConfig::validate() const {
  scene.validate();
  oracle.validate();
  tracker.validate();
  cost.validate();
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw std::invalid_argument("eval.iou_threshold must lie in (0, 1]");
  }
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  const Field* f = find_field(key);
  if (f == nullptr) {
    throw ConfigError("unknown key '" + std::string(key) + "'");
  }
  f->set(cfg, trim(value));
}

RunConfig parse_run_config(std::string_view text, RunConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    body = trim(body);
    if (body.empty()) {
      continue;
    }
    const auto eq = body.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) {
      throw ConfigError(where + "expected 'key = value'");
    }
    const std::string key(trim(body.substr(0, eq)));
    if (!seen.insert(key).second) {
      throw ConfigError(where + "duplicate key '" + key + "'");
    }
    try {
      apply_setting(base, key, body.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  try {
    base.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return base;
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str(), std::move(base));
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> k;
    for (const Field& f : fields()) {
      k.push_back(f.doc);
    }
    return k;
  }();
  return keys;
}

std::vector<std::pair<std::string, std::string>> flatten(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Field& f : fields()) {
    if (f.get) {
      out.emplace_back(f.doc.key, f.get(cfg));
    }
  }
  return out;
}

std::string config_reference() {
  const RunConfig defaults;
  std::string out = "Config keys (key = default  description):\n";
  for (const Field& f : fields()) {
    const std::string value = f.get ? f.get(defaults) : std::string("-");
    std::string entry = "  " + f.doc.key + " = " + (value.empty() ? "\"\"" : value);
    entry.resize(std::max<std::size_t>(entry.size() + 2, 40), ' ');
    out += entry + f.doc.help + "\n";
  }
  return out;
}

std::string format_occlusions(const std::vector<Occlusion>& occlusions) {
  std::string out;
  for (const Occlusion& o : occlusions) {
    if (!out.empty()) out += ';';
    out += std::to_string(o.object) + ":" + std::to_string(o.start) + "-" + std::to_string(o.end);
  }
  return out;
}

std::vector<Occlusion> parse_occlusions(std::string_view text) {
  std::vector<Occlusion> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t sep = text.find(';', start);
    const std::string_view item =
        trim(text.substr(start, sep == std::string_view::npos ? text.npos : sep - start));
    if (!item.empty()) {
      const auto colon = item.find(':');
      const auto dash = item.find('-', colon == std::string_view::npos ? 0 : colon);
      if (colon == std::string_view::npos || dash == std::string_view::npos) {
        throw ConfigError("occlusion '" + std::string(item) + "' is not object:start-end");
      }
      out.push_back({parse_number<TrackId>("occlusion object", trim(item.substr(0, colon))),
                     parse_number<int>("occlusion start", trim(item.substr(colon + 1, dash - colon - 1))),
                     parse_number<int>("occlusion end", trim(item.substr(dash + 1)))});
    }
    if (sep == std::string_view::npos) {
      break;
    }
    start = sep + 1;
  }
  return out;
}

}  // namespace comot
