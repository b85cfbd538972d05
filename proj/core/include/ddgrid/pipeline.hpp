// SPDX-License-Identifier: Apache-2.0
//
// ddgrid: on-grid delay-Doppler equivalents of doubly selective channels
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "ddgrid/channel.hpp"
#include "ddgrid/taps.hpp"
#include "ddgrid/types.hpp"
#include "ddgrid/windows.hpp"

#include <cstdint>

namespace ddgrid {

struct PipelineOptions {
    InterpSpec interp{};
    /// zero-padding factor of the analysis record before frequency-domain
    /// masking; controls circular-convolution leakage
    int pad_factor = 4;
};

/// Windowed off-grid reference: for tx-time/rx-frequency pairs the input is
/// multiplied by the tx window, passed through the off-grid channel, and
/// masked by the rx window on a zero-padded DFT of the record. For
/// tx-frequency/rx-time pairs the spectral mask comes first and the time
/// window last. Frequency masks are sampled at the exact bin frequencies
/// (no bin snapping). The returned record is the full padded analysis record.
SampledSignal apply_windowed_offgrid(const PhysicalChannel& ch, const WindowPair& windows,
                                     const SampledSignal& x, const PipelineOptions& opts = {});

/// Three-block on-grid model: rectangular tx block, finite tap double sum,
/// rectangular rx block. The factorization fixes the rectangular blocks'
/// gains at 1/frame_duration (time) and 1/bandwidth (frequency); the taps
/// absorb everything else. windows_rect must be rectangular with the grid's
/// frame_duration/bandwidth supports and centers — the equivalence holds only
/// between rectangular blocks, so anything else is a hard error.
///
/// Delays tau_d use the same Kaiser-sinc interpolator as the off-grid path;
/// Doppler factors e^{j2pi nu_k t} are evaluated exactly via an
/// frame_duration-periodic phase table when frame_duration * sample_rate is
/// an integer (the usual case), else per sample.
SampledSignal apply_ongrid_model(const TapMatrix& taps, const WindowPair& windows_rect,
                                 const SampledSignal& x, const PipelineOptions& opts = {});

/// Deterministic band-limited test signal: complex Gaussian spectrum filling
/// 80% of the grid bandwidth, inverse-transformed, unit average power,
/// supported on one frame duration centered on the grid's time center.
/// Samples sit at half-integer offsets (t = center - T/2 + (n+1/2)/fs) so the
/// window edges fall between samples; a sample exactly on the support edge
/// would hit the sampled expansion's jump midpoint and leave an O(1/N) error
/// floor in the equivalence checks.
SampledSignal make_test_signal(const GridSpec& grid, double oversampling, std::uint64_t seed);

/// Random underspread channel for property tests: up to max_paths paths with
/// delays uniform in [0, 64/bandwidth], Dopplers uniform in
/// +-32/frame_duration, magnitudes log-uniform over 20 dB, uniform phases.
PhysicalChannel make_random_channel(const GridSpec& grid, int max_paths, std::uint64_t seed);

struct EquivalenceReport {
    double nmse_mean = 0.0;
    double nmse_max = 0.0;
    int trials = 0;
    double truncation_bound = 0.0;
    std::string config_digest; // "sha256:..." of the canonical configuration
    std::vector<double> nmse_per_trial;
};

struct VerifyOptions {
    double oversampling = 2.0; // >= 1.25; 2.0 makes on-grid delays integer-sample
    PipelineOptions pipeline{};
};

/// Runs both pipelines on n_trials random test signals and accumulates the
/// NMSE between them. Failures are reported, not thrown: compare nmse_max
/// against your tolerance alongside truncation_bound to attribute the error.
EquivalenceReport verify_equivalence(const PhysicalChannel& ch, const WindowPair& windows,
                                     const GridSpec& grid, const TruncationPolicy& trunc,
                                     int n_trials, std::uint64_t seed,
                                     const VerifyOptions& opts = {});

} // namespace ddgrid
