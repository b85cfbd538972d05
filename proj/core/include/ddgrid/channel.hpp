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

#include "ddgrid/interp.hpp"
#include "ddgrid/types.hpp"

#include <optional>

namespace ddgrid {

/// One discrete scatterer. The gain is stored in the Doppler-delay (V)
/// convention: it is the weight of delta(nu - doppler) delta(tau - delay) in
/// V(nu, tau). The delay-Doppler (U) convention weight is always derived as
/// gain_v * e^{-j 2 pi doppler delay}, never stored, so there is exactly one
/// canonical phase convention in the data model.
struct PhysicalPath {
    cplx gain_v{0.0, 0.0};
    double delay = 0.0;   // seconds, >= 0
    double doppler = 0.0; // Hz

    /// Weight in the U (delay-then-Doppler) convention.
    cplx u_weight() const {
        const double ph = -two_pi * doppler * delay;
        return gain_v * cplx{std::cos(ph), std::sin(ph)};
    }
};

/// Tabulated scatterer density V(nu, tau) on a strictly increasing grid.
/// values[i][j] = V(nu_grid[i], tau_grid[j]).
struct ScattererDensity {
    std::vector<double> nu_grid;  // Hz
    std::vector<double> tau_grid; // seconds
    std::vector<std::vector<cplx>> values;

    void validate() const;
};

/// Either a list of discrete paths or a tabulated density; never both.
struct PhysicalChannel {
    std::vector<PhysicalPath> paths;
    std::optional<ScattererDensity> density;

    bool uses_density() const { return density.has_value(); }
    void validate() const;

    double max_delay() const;
    double max_abs_doppler() const;
};

/// Time-variant transfer function T(f, t) = sum_p U_p e^{j2pi nu_p t}
/// e^{-j2pi f tau_p}. Discrete paths only; density channels are rejected
/// (point-evaluating a delta distribution is meaningless — integrate against
/// windows instead).
cplx eval_transfer_function(const PhysicalChannel& ch, double f, double t);

/// Frequency-dependent modulation function M(t, f) = sum_p gain_v
/// e^{j2pi nu_p t} e^{-j2pi tau_p f}. Discrete paths only.
cplx eval_modulation_function(const PhysicalChannel& ch, double t, double f);

/// Which algebraically-identical factorization of the per-path phase the
/// time-domain apply uses. Exists so tests can assert the h/q grouping
/// identity; results agree to machine precision.
enum class PhaseGrouping {
    doppler_then_delay, // gain_v * x(t-tau) * e^{j2pi nu (t-tau)}
    scale_then_delay,   // (gain_v e^{-j2pi nu tau}) * x(t-tau) * e^{j2pi nu t}
};

struct ChannelApplyOptions {
    InterpSpec interp{};
    PhaseGrouping grouping = PhaseGrouping::doppler_then_delay;
};

/// y(t) = sum_p gain_p x(t - tau_p) e^{j2pi nu_p (t - tau_p)}, evaluated on
/// x's sample clock. Fractional delays use the Kaiser-windowed sinc
/// interpolator; x must be band-limited within its sample rate (caller's
/// responsibility). The output starts half_width samples before x.t0 and
/// covers the maximum delay plus kernel tails.
SampledSignal apply_channel_offgrid(const PhysicalChannel& ch, const SampledSignal& x,
                                    const ChannelApplyOptions& opts = {});

} // namespace ddgrid
