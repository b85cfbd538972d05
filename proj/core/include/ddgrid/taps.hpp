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
#include "ddgrid/types.hpp"
#include "ddgrid/windows.hpp"

#include <optional>

namespace ddgrid {

/// Which on-grid gain set a TapMatrix holds.
///  V_taps: tx time window + rx frequency window; gain of
///          delta(nu - nu_k) delta(tau - tau_d) in the Doppler-delay spread
///          function, V_{k,d} = sum_p V_p W_T(nu_k - nu_p) w_R(tau_d - tau_p).
///  U_taps: tx frequency window + rx time window; delay-Doppler convention,
///          U_{d,k} = sum_p U_p w_T(tau_d - tau_p) W_R(nu_k - nu_p).
enum class TapConvention { V_taps, U_taps };

struct IndexWindow {
    long kappa_min = 0, kappa_max = 0;
    long d_min = 0, d_max = 0;
};

/// Truncation of the (formally infinite) on-grid tap set. Ranges grow from
/// each path's nearest grid point until BOTH the relative magnitude floor and
/// the per-path energy-capture target are met, then stop at the per-axis hard
/// cap with a warning flag. A forced index window bypasses growth and keeps
/// every cell inside it (no magnitude floor applied).
struct TruncationPolicy {
    double rel_floor = 1e-6;           // keep |gain| >= rel_floor * peak
    double energy_capture = 1.0 - 1e-8; // per-path fraction of total tap energy
    long max_kappa = 512;              // per-axis half-width caps
    long max_d = 512;
    std::optional<IndexWindow> forced;
};

/// Truncated on-grid gains over a rectangular index window.
/// gains is kappa-major: gains[(k - kappa_min) * n_d + (d - d_min)]. For
/// U_taps the stored value at (k, d) is U_{d,k} (the paper-order subscripts;
/// storage layout is shared between conventions).
struct TapMatrix {
    TapConvention convention = TapConvention::V_taps;
    long kappa_min = 0, kappa_max = -1;
    long d_min = 0, d_max = -1;
    std::vector<cplx> gains;
    GridSpec grid;
    double truncation_epsilon = 1e-6;

    // diagnostics
    bool cap_hit = false;           // a hard cap stopped range growth
    bool quadrature_coarse = false; // density halving check moved a tap > 1e-3 rel
    double retained_energy = 0.0;   // sum |gain|^2 over retained cells
    double total_energy = 0.0;      // per-path analytic total (infinite grid)

    long n_kappa() const { return kappa_max - kappa_min + 1; }
    long n_d() const { return d_max - d_min + 1; }
    cplx at(long kappa, long d) const {
        return gains[static_cast<std::size_t>((kappa - kappa_min) * n_d() + (d - d_min))];
    }
    cplx& at(long kappa, long d) {
        return gains[static_cast<std::size_t>((kappa - kappa_min) * n_d() + (d - d_min))];
    }
    double peak_abs() const;
    /// 1 - retained/total; 0 when the analytic total is unavailable.
    double truncation_energy_bound() const;
};

/// On-grid tap gains for a discrete-path channel. The windows' supports must
/// match the grid (frame_duration for the time window, bandwidth for the
/// frequency window) and their centers the grid centers; the requested
/// convention must match the pair orientation (V_taps needs tx-time/rx-freq).
TapMatrix compute_taps_discrete(const PhysicalChannel& ch, const WindowPair& windows,
                                const GridSpec& grid, const TruncationPolicy& trunc = {});

/// Same for a tabulated scatterer density, via 2-D composite trapezoid over
/// the density grid. A step-halving self-check (bilinear midpoint refinement)
/// sets quadrature_coarse when any tap moves by more than 1e-3 of the peak.
TapMatrix compute_taps_continuous(const ScattererDensity& density, const WindowPair& windows,
                                  const GridSpec& grid, const TruncationPolicy& trunc = {});

/// Dispatches on the channel representation.
TapMatrix compute_taps(const PhysicalChannel& ch, const WindowPair& windows,
                       const GridSpec& grid, const TruncationPolicy& trunc = {});

/// Interpolation kernel of the sampled expansion as printed: sin(pi x)/x,
/// i.e. pi * sinc(x), with limit pi at x = 0.
double interp_kernel(double x);

/// Evaluate the windowed Doppler-delay spread function at an arbitrary
/// (nu, tau) from V taps via the sampled expansion
///   V'(nu,tau) ~ sum_{k,d} V_{k,d} e^{j2pi fc (tau-tau_d)} K_W(tau-tau_d)
///                          e^{-j2pi tc (nu-nu_k)} K_T(nu-nu_k)
/// with K as interp_kernel of W(tau-tau_d) resp. T(nu-nu_k). The kernels'
/// zero-offset value is pi per axis, so the raw double sum reproduces
/// pi^2 * V'; the returned value includes the 1/pi^2 normalization that makes
/// the expansion an identity (the constant is re-measured in the test suite).
/// U_taps matrices are rejected (no printed expansion for that orientation).
cplx reconstruct_spread(const TapMatrix& taps, double nu, double tau);

/// Sparsity/spread diagnostics of a tap matrix.
struct SpreadReport {
    long peak_kappa = 0, peak_d = 0;
    double peak_abs = 0.0;
    /// counts[i] = number of cells with |gain| >= thresholds[i] * peak
    std::vector<double> thresholds;
    std::vector<std::size_t> counts;
    /// energy_concentration[k] = fraction of total |gain|^2 within the
    /// (2k+1)^2 Chebyshev box around the peak, k = 0..box_max
    std::vector<double> energy_concentration;
    /// sigma_2 / sigma_1 of the |gains| matrix (two-sided power iteration);
    /// ~0 for a single-path matrix, which is an exact outer product.
    double rank1_residual = 0.0;
};

SpreadReport spread_report(const TapMatrix& taps, const std::vector<double>& thresholds,
                           long box_max = 8);

} // namespace ddgrid
