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

#ifndef FDV_FDV_HPP
#define FDV_FDV_HPP

// Umbrella header for the FMCW Doppler-velocity pipeline: waveform math,
// scene simulation, Doppler-continuity clustering, least-squares velocity
// estimation, evaluation harness and frame I/O.

#include "fdv/clustering.hpp"
#include "fdv/errors.hpp"
#include "fdv/estimation.hpp"
#include "fdv/experiment.hpp"
#include "fdv/frame.hpp"
#include "fdv/frame_io.hpp"
#include "fdv/metrics.hpp"
#include "fdv/rng.hpp"
#include "fdv/scene.hpp"
#include "fdv/simulate.hpp"
#include "fdv/waveform.hpp"

#endif  // FDV_FDV_HPP
