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

#include "ddgrid/types.hpp"

namespace ddgrid {

/// Band-limited fractional-delay interpolation with a Kaiser-windowed sinc
/// kernel. half_width is the kernel half-width in taps (2*half_width taps
/// total); beta is the Kaiser shape parameter. The defaults keep the kernel's
/// passband edge at ~0.85 of Nyquist with ~-140 dB stopband, so signals
/// occupying up to ~80% of Nyquist pass essentially untouched.
struct InterpSpec {
    int half_width = 64;
    double beta = 14.0;
};

/// FIR taps for a delay of `frac` in [0,1) samples: h[i], i = 0..2L-1, maps
/// to lag k = i - (L-1), so y[n] = sum_i h[i] * x[n - d_int - (i - L + 1)].
/// frac == 0 yields an exact unit impulse.
std::vector<double> fractional_delay_kernel(double frac, const InterpSpec& spec = {});

/// Accumulate dst[n] += scale * x(n - shift) for all n where the shifted,
/// band-limited-interpolated copy of src is nonzero. src occupies dst indices
/// [src_offset, src_offset + src.size()). shift is in samples, any real value.
void add_delayed_scaled(std::vector<cplx>& dst, const std::vector<cplx>& src,
                        long src_offset, double shift, cplx scale,
                        const InterpSpec& spec = {});

/// y(t) = x(t - delay_s) on x's clock. The output starts half_width samples
/// before x.t0 (interpolation pre-ring) and is long enough to cover the
/// shifted content plus kernel tails.
SampledSignal delay_signal(const SampledSignal& x, double delay_s,
                           const InterpSpec& spec = {});

} // namespace ddgrid
