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

#pragma once

#include <span>
#include <string>
#include <string_view>

namespace comot {

/// Reduction over the members of a shadow set. Used as lambda (over matching
/// costs, training) and phi (over confidence scores, inference).
enum class Reduction { kMin, kMean, kMax };

/// Reduces a non-empty range; throws std::invalid_argument when empty.
double reduce(std::span<const double> values, Reduction how);

std::string_view to_string(Reduction how);
/// Accepts "min", "mean", "max".
Reduction parse_reduction(std::string_view text);

}  // namespace comot
