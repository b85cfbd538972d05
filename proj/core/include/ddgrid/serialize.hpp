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
#include "ddgrid/pipeline.hpp"
#include "ddgrid/taps.hpp"
#include "ddgrid/types.hpp"
#include "ddgrid/windows.hpp"

#include <string>
#include <string_view>

namespace ddgrid {

/// Run configuration consumed by the CLI. JSON schema (schema_version 1):
/// {
///   "schema_version": 1,
///   "channel":   {"paths":[{"gain_re":..,"gain_im":..,"delay_s":..,"doppler_hz":..}],
///                 "density": {"nu_grid_hz":[..],"tau_grid_s":[..],
///                             "values_re":[[..]],"values_im":[[..]]}?},
///   "windows":   {"tx": {"domain":"time|frequency","shape":"rect|hamming|rc|tabulated",
///                        "center":..,"width":..,"rolloff":..?,"samples":[..]?},
///                 "rx": {..}},
///   "grid":      {"frame_duration_s":..,"bandwidth_hz":..,"tx_center":..,"rx_center":..},
///   "truncation":{"rel_floor":..,"energy_capture":..,"max_kappa":..,"max_d":..,
///                 "forced":{"kappa_min":..,"kappa_max":..,"d_min":..,"d_max":..}?},
///   "seed":..,"trials":..,"oversampling":..,"tolerance_nmse":..
/// }
/// grid.tx_center/rx_center follow the pair orientation (time-domain center
/// for the time window's side, frequency for the other).
struct RunConfig {
    PhysicalChannel channel;
    WindowPair windows;
    GridSpec grid;
    TruncationPolicy truncation;
    std::uint64_t seed = 0;
    int trials = 5;
    double oversampling = 2.0;
    double tolerance_nmse = 1e-4;

    void validate() const;
};

/// Thrown for malformed or inconsistent configuration input.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// PhysicalChannel <-> JSON (exact wire field names, IEEE-754 doubles)
std::string channel_to_json(const PhysicalChannel& ch);
PhysicalChannel channel_from_json(std::string_view json);

// WindowSpec <-> JSON
std::string window_to_json(const WindowSpec& w);
WindowSpec window_from_json(std::string_view json);

// RunConfig <-> JSON; serialization is canonical (fixed key order, shortest
// round-trip doubles) so identical configs produce identical bytes
std::string config_to_json(const RunConfig& cfg);
RunConfig config_from_json(std::string_view json);
RunConfig load_config(const std::string& path);

/// Tap export: CSV rows `kappa,d,nu_hz,tau_s,re,im,abs`, kappa-major, only
/// retained (nonzero) cells. Doubles use shortest round-trip formatting.
std::string taps_to_csv(const TapMatrix& taps);

/// JSON sidecar for a tap CSV: grid, convention, index ranges, truncation
/// policy echo and flags, energy bookkeeping.
std::string taps_sidecar_json(const TapMatrix& taps, const TruncationPolicy& trunc);

/// EquivalenceReport -> {"nmse_mean":..,"nmse_max":..,"trials":..,
/// "truncation_bound":..,"config_digest":"sha256:..."}
std::string report_to_json(const EquivalenceReport& rep);

std::string sha256_hex(std::string_view data);

/// "sha256:..." digest of the canonical JSON of the full verify setup.
std::string verify_config_digest(const PhysicalChannel& ch, const WindowPair& windows,
                                 const GridSpec& grid, const TruncationPolicy& trunc,
                                 int n_trials, std::uint64_t seed);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

} // namespace ddgrid
