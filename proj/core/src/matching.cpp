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

#include "comot/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace comot {

void CostWeights::validate() const {
  const auto finite_nonneg = [](double x) { return std::isfinite(x) && x >= 0.0; };
  if (!finite_nonneg(w_class) || !finite_nonneg(w_l1) || !finite_nonneg(w_giou)) {
    throw std::invalid_argument("cost weights must be finite and non-negative");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("focal alpha must lie in (0, 1)");
  }
  if (!finite_nonneg(gamma)) {
    throw std::invalid_argument("focal gamma must be finite and non-negative");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("log clamp epsilon must be positive");
  }
}

double Prediction::max_score() const {
  if (scores.empty()) {
    return 0.0;
  }
  return *std::max_element(scores.begin(), scores.end());
}

double focal_cost(std::span<const double> scores, std::size_t target_class, const CostWeights& w) {
  if (target_class >= scores.size()) {
    throw std::out_of_range("target class " + std::to_string(target_class) +
                            " outside score vector of size " + std::to_string(scores.size()));
  }
  const double p = scores[target_class];
  const double positive = w.alpha * std::pow(1.0 - p, w.gamma) * -std::log(p + w.epsilon);
  const double negative = (1.0 - w.alpha) * std::pow(p, w.gamma) * -std::log(1.0 - p + w.epsilon);
  return positive - negative;
}

double pair_cost(const Prediction& pred, const Target& gt, const CostWeights& w) {
  return w.w_class * focal_cost(pred.scores, gt.class_id, w) +
         w.w_l1 * l1_distance(pred.box, gt.box) - w.w_giou * giou(pred.box, gt.box);
}

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw std::invalid_argument("cost matrix value count does not match its shape");
  }
}

CostMatrix CostMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n_cols = rows.empty() ? 0 : rows.front().size();
  CostMatrix m(rows.size(), n_cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != n_cols) {
      throw std::invalid_argument("ragged cost matrix rows");
    }
    std::copy(rows[r].begin(), rows[r].end(), m.values_.begin() + r * n_cols);
  }
  return m;
}

CostMatrix build_cost_matrix(std::span<const Prediction> preds, std::span<const Target> gts,
                             const CostWeights& w) {
  CostMatrix m(preds.size(), gts.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (std::size_t j = 0; j < gts.size(); ++j) {
      m(i, j) = pair_cost(preds[i], gts[j], w);
    }
  }
  return m;
}

double Assignment::total_cost(const CostMatrix& cost) const {
  double total = 0.0;
  for (const auto& [r, c] : pairs) {
    total += cost(r, c);
  }
  return total;
}

long Assignment::col_for_row(std::size_t row) const {
  for (const auto& [r, c] : pairs) {
    if (r == row) {
      return static_cast<long>(c);
    }
  }
  return -1;
}

namespace {

// Shortest augmenting path with row/column potentials, O(n^2 m) for an
// n x m matrix with n <= m. `at(i, j)` is 0-indexed. Returns the column
// assigned to each row.
template <typename At>
std::vector<std::size_t> solve_wide(std::size_t n, std::size_t m, At at) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0);
  std::vector<double> v(m + 1, 0.0);
  std::vector<std::size_t> row_of(m + 1, 0);  // 1-indexed row owning column j; 0 = free
  std::vector<std::size_t> way(m + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    row_of[0] = i;
    std::size_t j0 = 0;
    std::vector<double> min_slack(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = row_of[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) {
          continue;
        }
        const double slack = at(i0 - 1, j - 1) - u[i0] - v[j];
        if (slack < min_slack[j]) {
          min_slack[j] = slack;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[row_of[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      row_of[j0] = row_of[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> col_of_row(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (row_of[j] != 0) {
      col_of_row[row_of[j] - 1] = j - 1;
    }
  }
  return col_of_row;
}

}  // namespace

Assignment hungarian(const CostMatrix& cost) {
  for (double x : cost.values()) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("cost matrix contains a non-finite entry");
    }
  }
  const std::size_t rows = cost.rows();
  const std::size_t cols = cost.cols();
  Assignment result;
  std::vector<char> row_used(rows, 0);
  std::vector<char> col_used(cols, 0);

  if (rows > 0 && cols > 0) {
    if (rows <= cols) {
      const auto col_of_row =
          solve_wide(rows, cols, [&](std::size_t i, std::size_t j) { return cost(i, j); });
      for (std::size_t r = 0; r < rows; ++r) {
        result.pairs.emplace_back(r, col_of_row[r]);
      }
    } else {
      const auto row_of_col =
          solve_wide(cols, rows, [&](std::size_t i, std::size_t j) { return cost(j, i); });
      for (std::size_t c = 0; c < cols; ++c) {
        result.pairs.emplace_back(row_of_col[c], c);
      }
      std::sort(result.pairs.begin(), result.pairs.end());
    }
  }
  for (const auto& [r, c] : result.pairs) {
    row_used[r] = 1;
    col_used[c] = 1;
  }
  for (std::size_t r = 0; r < rows; ++r) {
    if (!row_used[r]) {
      result.unmatched_rows.push_back(r);
    }
  }
  for (std::size_t c = 0; c < cols; ++c) {
    if (!col_used[c]) {
      result.unmatched_cols.push_back(c);
    }
  }
  return result;
}

}  // namespace comot
