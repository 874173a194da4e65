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

#include "fdv/waveform.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "fdv/rng.hpp"

using Catch::Approx;
using namespace fdv;

namespace {

WaveformParams reference_params() {
  // 1550 nm carrier, 50 us period, 6 GHz sweep (8-14 GHz modulation).
  return WaveformParams::from_wavelength(50e-6, 6e9, 1550e-9);
}

}  // namespace

TEST_CASE("beat pair to range", "[waveform]") {
  const auto p = reference_params();
  // Inverting D = cT(f_bd + f_bu)/(8B): 100 m at these parameters gives a
  // 160 MHz beat on both bands.
  CHECK(beat_to_range(p, {160e6, 160e6}) == Approx(100.0).epsilon(1e-12));
  CHECK(beat_to_range(p, {0.0, 0.0}) == 0.0);
  // A Doppler shift moves the two beats in opposite directions and cancels
  // in the sum.
  CHECK(beat_to_range(p, {158e6, 162e6}) == Approx(100.0).epsilon(1e-12));
}

TEST_CASE("beat pair to radial speed", "[waveform]") {
  const auto p = reference_params();
  // Inverting v = lambda (f_bd - f_bu)/4: 10 m/s needs a 25.806 MHz split.
  CHECK(beat_to_velocity(p, {160e6, 160e6 + 25.806e6}) ==
        Approx(10.0).margin(1e-3));
  CHECK(beat_to_velocity(p, {181e6, 181e6}) == 0.0);
  CHECK(beat_to_velocity(p, {160e6 + 25.806e6, 160e6}) ==
        Approx(-10.0).margin(1e-3));
}

TEST_CASE("resolutions at the reference configuration", "[waveform]") {
  const auto p = reference_params();
  CHECK(range_resolution(p) == Approx(0.025).epsilon(1e-12));
  CHECK(velocity_resolution(p) == Approx(0.031).epsilon(1e-12));

  const auto half_band = WaveformParams::from_wavelength(50e-6, 3e9, 1550e-9);
  CHECK(range_resolution(half_band) == Approx(0.05).epsilon(1e-12));

  const auto unit = WaveformParams::from_wavelength(50e-6, kLightSpeedRounded / 2.0,
                                                    1550e-9);
  CHECK(range_resolution(unit) == Approx(1.0).epsilon(1e-12));

  const auto slow = WaveformParams::from_wavelength(100e-6, 6e9, 1550e-9);
  CHECK(velocity_resolution(slow) == Approx(0.0155).epsilon(1e-12));
  CHECK(velocity_resolution(slow) == Approx(velocity_resolution(p) / 2.0));
}

TEST_CASE("range and speed map back to beats", "[waveform]") {
  const auto p = reference_params();
  const auto beats = range_velocity_to_beats(p, 100.0, 0.0);
  CHECK(beats.rising_hz == Approx(160e6).epsilon(1e-12));
  CHECK(beats.falling_hz == Approx(160e6).epsilon(1e-12));

  const auto zero = range_velocity_to_beats(p, 0.0, 0.0);
  CHECK(zero.rising_hz == 0.0);
  CHECK(zero.falling_hz == 0.0);

  CHECK_THROWS_AS(range_velocity_to_beats(p, 1.0, -5.0), NegativeBeat);
  CHECK_THROWS_AS(range_velocity_to_beats(p, 0.0, 0.1), NegativeBeat);
  CHECK_THROWS_AS(range_velocity_to_beats(p, -1.0, 0.0), InvalidConfig);
}

TEST_CASE("beat conversions round-trip", "[waveform]") {
  const auto p = reference_params();
  SplitMix64 rng(20260811);
  for (int i = 0; i < 2000; ++i) {
    const double range = 1.0 + 149.0 * rng.uniform01();
    const double speed = (2.0 * rng.uniform01() - 1.0) * range;  // keeps beats positive
    const auto beats = range_velocity_to_beats(p, range, speed);
    CHECK(beat_to_range(p, beats) == Approx(range).epsilon(1e-9));
    CHECK(beat_to_velocity(p, beats) == Approx(speed).margin(1e-9 * range));
  }
}

TEST_CASE("range is symmetric and speed antisymmetric in the beats",
          "[waveform]") {
  const auto p = reference_params();
  SplitMix64 rng(77);
  for (int i = 0; i < 500; ++i) {
    const BeatPair b{1e9 * rng.uniform01(), 1e9 * rng.uniform01()};
    const BeatPair swapped{b.falling_hz, b.rising_hz};
    CHECK(beat_to_range(p, b) == beat_to_range(p, swapped));
    CHECK(beat_to_velocity(p, b) == -beat_to_velocity(p, swapped));
  }
}

TEST_CASE("waveform parameters validate wavelength against carrier",
          "[waveform]") {
  auto p = reference_params();
  CHECK(p.center_frequency_hz * p.wavelength_m ==
        Approx(p.light_speed).epsilon(1e-12));
  p.wavelength_m *= 1.0 + 1e-6;
  CHECK_THROWS_AS(p.validate(), InvalidConfig);

  CHECK_THROWS_AS(WaveformParams::from_wavelength(0.0, 6e9, 1550e-9),
                  InvalidConfig);
  CHECK_THROWS_AS(WaveformParams::from_wavelength(50e-6, -1.0, 1550e-9),
                  InvalidConfig);

  const auto exact =
      WaveformParams::from_wavelength(50e-6, 6e9, 1550e-9, 8e9, kLightSpeedExact);
  CHECK(exact.center_frequency_hz == Approx(kLightSpeedExact / 1550e-9));
}
