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

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "comot/geometry.hpp"

namespace comot {

/// Per-class probabilities after activation; need not sum to one.
using ClassScores = std::vector<double>;

/// Coefficients of the matching cost
///   w_class * focal + w_l1 * L1 - w_giou * GIoU.
/// Defaults are the DETR/MOTR-family coefficients; unit_weights() gives the
/// unweighted sum.
struct CostWeights {
  double w_class = 2.0;
  double w_l1 = 5.0;
  double w_giou = 2.0;
  double alpha = 0.25;
  double gamma = 2.0;
  double epsilon = 1e-8;

  static CostWeights detr() { return {}; }
  static CostWeights unit_weights() { return {1.0, 1.0, 1.0, 0.25, 2.0, 1e-8}; }

  /// Throws std::invalid_argument when any field is out of range.
  void validate() const;
};

struct Prediction {
  BoundingBox box;
  ClassScores scores;

  /// Highest class score, or 0 for an empty score vector.
  double max_score() const;
};

struct Target {
  BoundingBox box;
  std::size_t class_id = 0;
};

double focal_cost(std::span<const double> scores, std::size_t target_class, const CostWeights& w);

double pair_cost(const Prediction& pred, const Target& gt, const CostWeights& w);

/// Dense row-major matrix of finite costs. Rows are candidate queries (or
/// query sets), columns are ground-truth targets.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  /// Convenience for literals: {{1, 2}, {2, 1}}.
  static CostMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  std::span<const double> values() const { return values_; }

  // Optional human-readable labels (used by assign-debug output).
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

CostMatrix build_cost_matrix(std::span<const Prediction> preds, std::span<const Target> gts,
                             const CostWeights& w);

struct Assignment {
  /// (row, col) pairs sorted by row.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> unmatched_rows;
  std::vector<std::size_t> unmatched_cols;

  /// Sum of matched costs accumulated in ascending row order.
  double total_cost(const CostMatrix& cost) const;
  /// Column matched to `row`, or -1.
  long col_for_row(std::size_t row) const;
};

/// Minimum-cost rectangular assignment of size min(rows, cols).
/// Throws std::invalid_argument on non-finite entries.
Assignment hungarian(const CostMatrix& cost);

}  // namespace comot
