// Copyright 2026 the fdv authors
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

#ifndef FDV_METRICS_HPP
#define FDV_METRICS_HPP

#include <cstdint>
#include <iterator>
#include <optional>
#include <span>
#include <string>

#include "fdv/errors.hpp"

namespace fdv {

/// 2x2 table with motion as the positive class.
struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t tn = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + tn + fp + fn; }
};

template <typename PredRange, typename TruthRange>
ConfusionCounts confusion(const PredRange& predicted_moving,
                          const TruthRange& truth_moving) {
  const auto n_pred = std::size(predicted_moving);
  const auto n_truth = std::size(truth_moving);
  if (n_pred != n_truth)
    throw LengthMismatch("confusion: " + std::to_string(n_pred) +
                         " predictions vs " + std::to_string(n_truth) +
                         " truth labels");
  ConfusionCounts c;
  auto pred = std::begin(predicted_moving);
  auto truth = std::begin(truth_moving);
  for (; truth != std::end(truth_moving); ++pred, ++truth) {
    if (*truth)
      ++(*pred ? c.tp : c.fn);
    else
      ++(*pred ? c.fp : c.tn);
  }
  return c;
}

/// Precision, recall and accuracy; a metric whose denominator is zero is
/// absent rather than zero.
struct ClassificationMetrics {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> accuracy;
};

inline ClassificationMetrics metrics(const ConfusionCounts& c) {
  ClassificationMetrics m;
  if (c.tp + c.fp > 0)
    m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0)
    m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (c.total() > 0)
    m.accuracy =
        static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  return m;
}

/// Ordinary least-squares line fit with the coefficient of determination.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

inline LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw LengthMismatch("fit_line: size mismatch");
  if (xs.size() < 2) throw InvalidConfig("fit_line: need at least two points");
  const auto n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw InvalidConfig("fit_line: degenerate x values");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

}  // namespace fdv

#endif  // FDV_METRICS_HPP
