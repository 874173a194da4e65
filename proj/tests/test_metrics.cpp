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

#include "fdv/metrics.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <vector>

#include "fdv/rng.hpp"

using Catch::Approx;
using namespace fdv;

namespace {

std::vector<bool> labels(std::size_t moving, std::size_t stationary) {
  std::vector<bool> v(moving, true);
  v.insert(v.end(), stationary, false);
  return v;
}

}  // namespace

TEST_CASE("confusion counts the 2x2 table", "[metrics]") {
  const auto truth = labels(100, 900);
  const auto perfect = confusion(truth, truth);
  CHECK(perfect.tp == 100);
  CHECK(perfect.tn == 900);
  CHECK(perfect.fp == 0);
  CHECK(perfect.fn == 0);

  const auto all_static = confusion(labels(0, 1000), truth);
  CHECK(all_static.fn == 100);
  CHECK(all_static.tn == 900);
  CHECK(all_static.tp == 0);

  CHECK_THROWS_AS(confusion(labels(1, 1), labels(1, 2)), LengthMismatch);
}

TEST_CASE("metric formulas and undefined denominators", "[metrics]") {
  // tp=99 fp=1 fn=1 tn=899.
  std::vector<bool> truth = labels(100, 900);
  std::vector<bool> predicted = truth;
  predicted[0] = false;    // one miss
  predicted[100] = true;   // one false alarm
  const auto c = confusion(predicted, truth);
  CHECK(c.tp == 99);
  CHECK(c.fp == 1);
  CHECK(c.fn == 1);
  CHECK(c.tn == 899);
  const auto m = metrics(c);
  CHECK(*m.precision == Approx(0.99));
  CHECK(*m.recall == Approx(0.99));
  CHECK(*m.accuracy == Approx(0.998));

  const auto perfect = metrics(confusion(truth, truth));
  CHECK(*perfect.precision == 1.0);
  CHECK(*perfect.recall == 1.0);
  CHECK(*perfect.accuracy == 1.0);

  const auto no_positives = metrics({0, 10, 0, 0});
  CHECK_FALSE(no_positives.precision.has_value());
  CHECK_FALSE(no_positives.recall.has_value());
  CHECK(no_positives.accuracy.has_value());

  CHECK_FALSE(metrics({0, 0, 0, 0}).accuracy.has_value());
}

TEST_CASE("accuracy times total equals tp plus tn", "[metrics]") {
  SplitMix64 rng(55);
  for (int i = 0; i < 200; ++i) {
    ConfusionCounts c;
    c.tp = static_cast<std::int64_t>(rng.bounded(5000));
    c.tn = static_cast<std::int64_t>(rng.bounded(5000));
    c.fp = static_cast<std::int64_t>(rng.bounded(500));
    c.fn = static_cast<std::int64_t>(rng.bounded(500));
    if (c.total() == 0) continue;
    const auto m = metrics(c);
    CHECK(*m.accuracy * static_cast<double>(c.total()) ==
          Approx(static_cast<double>(c.tp + c.tn)).epsilon(1e-12));
  }
}

TEST_CASE("line fit recovers exact and noisy trends", "[metrics]") {
  const std::vector<double> xs = {1, 2, 3, 4, 5};
  std::vector<double> ys;
  for (const auto x : xs) ys.push_back(2.0 * x + 1.0);
  const auto exact = fit_line(xs, ys);
  CHECK(exact.slope == Approx(2.0));
  CHECK(exact.intercept == Approx(1.0));
  CHECK(exact.r_squared == Approx(1.0));

  std::vector<double> noisy = ys;
  noisy[1] += 0.4;
  noisy[3] -= 0.4;
  const auto fit = fit_line(xs, noisy);
  CHECK(fit.r_squared < 1.0);
  CHECK(fit.r_squared > 0.9);
  CHECK(fit.slope == Approx(2.0).margin(0.2));

  CHECK_THROWS_AS(fit_line(std::vector<double>{1.0}, std::vector<double>{1.0}),
                  InvalidConfig);
  CHECK_THROWS_AS(fit_line(std::vector<double>{1, 1}, std::vector<double>{1, 2}),
                  InvalidConfig);
  CHECK_THROWS_AS(fit_line(xs, std::vector<double>{1, 2}), LengthMismatch);
}
