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

#include "comot/reduction.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace comot {

double reduce(std::span<const double> values, Reduction how) {
  if (values.empty()) {
    throw std::invalid_argument("cannot reduce an empty range");
  }
  switch (how) {
    case Reduction::kMin:
      return *std::min_element(values.begin(), values.end());
    case Reduction::kMax:
      return *std::max_element(values.begin(), values.end());
    case Reduction::kMean: {
      double sum = 0.0;
      for (double v : values) {
        sum += v;
      }
      return sum / static_cast<double>(values.size());
    }
  }
  throw std::logic_error("unhandled reduction");
}

std::string_view to_string(Reduction how) {
  switch (how) {
    case Reduction::kMin:
      return "min";
    case Reduction::kMean:
      return "mean";
    case Reduction::kMax:
      return "max";
  }
  return "?";
}

Reduction parse_reduction(std::string_view text) {
  if (text == "min") return Reduction::kMin;
  if (text == "mean") return Reduction::kMean;
  if (text == "max") return Reduction::kMax;
  throw std::invalid_argument("unknown reduction '" + std::string(text) +
                              "' (expected min, mean or max)");
}

}  // namespace comot
