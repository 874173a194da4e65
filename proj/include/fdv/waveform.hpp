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

#ifndef FDV_WAVEFORM_HPP
#define FDV_WAVEFORM_HPP

#include <cmath>
#include <string>

#include "fdv/errors.hpp"

namespace fdv {

/// Speed of light rounded to 3e8 m/s, the convention used throughout the
/// datasheet-style resolution figures. Pass kLightSpeedExact to factories
/// when exact optics matter.
inline constexpr double kLightSpeedRounded = 3.0e8;
inline constexpr double kLightSpeedExact = 299'792'458.0;

/// Triangular-chirp waveform description. Wavelength and center frequency are
/// stored together and kept consistent (lambda * f == c).
struct WaveformParams {
  double period_s = 0.0;            ///< chirp period T
  double bandwidth_hz = 0.0;        ///< swept bandwidth B
  double center_frequency_hz = 0.0; ///< optical carrier f
  double wavelength_m = 0.0;        ///< lambda = c / f
  double initial_frequency_hz = 0.0; ///< lowest modulated frequency, informational
  double light_speed = kLightSpeedRounded;

  static WaveformParams from_frequency(double period_s, double bandwidth_hz,
                                       double center_frequency_hz,
                                       double initial_frequency_hz = 0.0,
                                       double light_speed = kLightSpeedRounded) {
    WaveformParams p;
    p.period_s = period_s;
    p.bandwidth_hz = bandwidth_hz;
    p.center_frequency_hz = center_frequency_hz;
    p.wavelength_m = light_speed / center_frequency_hz;
    p.initial_frequency_hz = initial_frequency_hz;
    p.light_speed = light_speed;
    p.validate();
    return p;
  }

  static WaveformParams from_wavelength(double period_s, double bandwidth_hz,
                                        double wavelength_m,
                                        double initial_frequency_hz = 0.0,
                                        double light_speed = kLightSpeedRounded) {
    WaveformParams p;
    p.period_s = period_s;
    p.bandwidth_hz = bandwidth_hz;
    p.wavelength_m = wavelength_m;
    p.center_frequency_hz = light_speed / wavelength_m;
    p.initial_frequency_hz = initial_frequency_hz;
    p.light_speed = light_speed;
    p.validate();
    return p;
  }

  void validate() const {
    if (!(period_s > 0.0)) throw InvalidConfig("waveform: period_s must be > 0");
    if (!(bandwidth_hz > 0.0))
      throw InvalidConfig("waveform: bandwidth_hz must be > 0");
    if (!(center_frequency_hz > 0.0))
      throw InvalidConfig("waveform: center_frequency_hz must be > 0");
    if (!(wavelength_m > 0.0))
      throw InvalidConfig("waveform: wavelength_m must be > 0");
    const double c = wavelength_m * center_frequency_hz;
    if (std::abs(c - light_speed) > 1e-9 * light_speed)
      throw InvalidConfig(
          "waveform: wavelength_m * center_frequency_hz != light_speed");
  }
};

/// Beat frequencies measured on the two halves of the triangular chirp.
struct BeatPair {
  double rising_hz = 0.0;  ///< f_bu, rising band
  double falling_hz = 0.0; ///< f_bd, falling band
};

/// Range from a beat pair: D = cT (f_bd + f_bu) / (8B). Doppler shift cancels
/// in the sum, so the result is velocity-independent.
inline double beat_to_range(const WaveformParams& p, const BeatPair& b) {
  return p.light_speed * p.period_s * (b.falling_hz + b.rising_hz) /
         (8.0 * p.bandwidth_hz);
}

/// Radial speed from a beat pair: v = lambda (f_bd - f_bu) / 4. Positive when
/// the target recedes (f_bd > f_bu).
inline double beat_to_velocity(const WaveformParams& p, const BeatPair& b) {
  return 0.25 * p.wavelength_m * (b.falling_hz - b.rising_hz);
}

/// Smallest resolvable range step: c / (2B).
inline double range_resolution(const WaveformParams& p) {
  return p.light_speed / (2.0 * p.bandwidth_hz);
}

/// Smallest resolvable radial-speed step: lambda / T.
inline double velocity_resolution(const WaveformParams& p) {
  return p.wavelength_m / p.period_s;
}

/// Exact inverse of beat_to_range / beat_to_velocity. Throws NegativeBeat when
/// the Doppler shift exceeds the range beat and one beat would go negative.
inline BeatPair range_velocity_to_beats(const WaveformParams& p,
                                        double range_m, double radial_speed) {
  if (range_m < 0.0)
    throw InvalidConfig("range_velocity_to_beats: range_m must be >= 0");
  const double sum = 8.0 * p.bandwidth_hz * range_m / (p.light_speed * p.period_s);
  const double diff = 4.0 * radial_speed / p.wavelength_m;
  BeatPair b;
  b.rising_hz = 0.5 * (sum - diff);
  b.falling_hz = 0.5 * (sum + diff);
  if (b.rising_hz < 0.0 || b.falling_hz < 0.0)
    throw NegativeBeat("Doppler shift " + std::to_string(radial_speed) +
                       " m/s exceeds the range beat at " +
                       std::to_string(range_m) + " m");
  return b;
}

}  // namespace fdv

#endif  // FDV_WAVEFORM_HPP
