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

#include "comot/shadow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "comot/random.hpp"

namespace comot {
namespace {

constexpr double kEmbeddingScale = 0.02;

QueryState random_state(Rng& rng, int dim) {
  QueryState q;
  q.position = {rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
  q.embedding.resize(static_cast<std::size_t>(dim));
  for (double& x : q.embedding) {
    x = kEmbeddingScale * rng.normal();
  }
  return q;
}

}  // namespace

std::string_view to_string(InitMethod method) {
  switch (method) {
    case InitMethod::kRand:
      return "rand";
    case InitMethod::kCopy:
      return "copy";
    case InitMethod::kNoise:
      return "noise";
  }
  return "?";
}

InitMethod parse_init_method(std::string_view text) {
  if (text == "rand") return InitMethod::kRand;
  if (text == "copy") return InitMethod::kCopy;
  if (text == "noise") return InitMethod::kNoise;
  throw std::invalid_argument("unknown init method '" + std::string(text) +
                              "' (expected rand, copy or noise)");
}

void ShadowConfig::validate() const {
  if (n_shadows < 1) {
    throw std::invalid_argument("shadow.ns must be at least 1");
  }
  if (!(sigma_p >= 0.0) || !(sigma_x >= 0.0) || !std::isfinite(sigma_p) ||
      !std::isfinite(sigma_x)) {
    throw std::invalid_argument("shadow sigmas must be finite and non-negative");
  }
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("shadow.tau must lie in [0, 1]");
  }
  if (embedding_dim < 0) {
    throw std::invalid_argument("shadow.dim must be non-negative");
  }
}

BoundingBox ShadowSet::anchor() const {
  BoundingBox mean{};
  if (shadows.empty()) {
    return mean;
  }
  for (const QueryState& q : shadows) {
    mean.cx += q.position.cx;
    mean.cy += q.position.cy;
    mean.w += q.position.w;
    mean.h += q.position.h;
  }
  const double n = static_cast<double>(shadows.size());
  return {mean.cx / n, mean.cy / n, mean.w / n, mean.h / n};
}

void ShadowSet::validate(int n_shadows) const {
  if (static_cast<int>(shadows.size()) != n_shadows) {
    throw std::invalid_argument("shadow set " + std::to_string(set_id) + " holds " +
                                std::to_string(shadows.size()) + " shadows, expected " +
                                std::to_string(n_shadows));
  }
  if ((role == SetRole::kTracking) != identity.has_value()) {
    throw std::invalid_argument("shadow set " + std::to_string(set_id) +
                                ": identity must be present exactly for tracking sets");
  }
}

std::vector<ShadowSet> init_query_bank(std::size_t n_sets, const ShadowConfig& cfg,
                                       std::uint64_t seed) {
  cfg.validate();
  if (n_sets == 0) {
    throw std::invalid_argument("query bank needs at least one set");
  }
  std::vector<ShadowSet> bank(n_sets);
  for (std::size_t i = 0; i < n_sets; ++i) {
    ShadowSet& set = bank[i];
    set.set_id = i;
    set.role = SetRole::kDetection;
    set.shadows.reserve(static_cast<std::size_t>(cfg.n_shadows));

    if (cfg.init == InitMethod::kRand) {
      Rng rng = Rng::derive(seed, {stream::kQueryBank, i, 0});
      for (int j = 0; j < cfg.n_shadows; ++j) {
        set.shadows.push_back(random_state(rng, cfg.embedding_dim));
      }
      continue;
    }

    // kCopy and kNoise share the base draw so that zero noise reproduces kCopy.
    Rng base_rng = Rng::derive(seed, {stream::kQueryBank, i, 1});
    const QueryState base = random_state(base_rng, cfg.embedding_dim);
    set.shadows.assign(static_cast<std::size_t>(cfg.n_shadows), base);
    if (cfg.init == InitMethod::kNoise) {
      Rng noise_rng = Rng::derive(seed, {stream::kQueryBank, i, 2});
      for (QueryState& q : set.shadows) {
        q.position.cx += cfg.sigma_p * noise_rng.normal();
        q.position.cy += cfg.sigma_p * noise_rng.normal();
        q.position.w = std::max(0.0, q.position.w + cfg.sigma_p * noise_rng.normal());
        q.position.h = std::max(0.0, q.position.h + cfg.sigma_p * noise_rng.normal());
        for (double& x : q.embedding) {
          x += cfg.sigma_x * noise_rng.normal();
        }
      }
    }
  }
  return bank;
}

double representative_score(std::span<const double> scores, Reduction phi) {
  return reduce(scores, phi);
}

SelectedOutput select_output(std::span<const ScoredBox> predictions) {
  if (predictions.empty()) {
    throw std::invalid_argument("select_output needs at least one shadow prediction");
  }
  std::size_t best = 0;
  for (std::size_t j = 1; j < predictions.size(); ++j) {
    if (predictions[j].score > predictions[best].score) {
      best = j;
    }
  }
  return {best, predictions[best]};
}

}  // namespace comot
