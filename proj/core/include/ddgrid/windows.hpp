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

#include <optional>

namespace ddgrid {

enum class WindowDomain { time, frequency };
enum class WindowShape { rectangular, hamming, raised_cosine, tabulated };

/// A finite-support window in time or frequency. The support is exactly
/// [center - width/2, center + width/2] and the window is identically zero
/// outside it.
///
/// For raised_cosine, `width` is the TOTAL truncated support; the shape's
/// natural bandwidth parameter is width / (1 + rolloff). A raised-cosine
/// frequency window declared with width W therefore fits entirely inside the
/// delay grid's Nyquist span, which the sampled tap expansion requires.
///
/// For tabulated, `samples` are amplitudes at uniform positions spanning the
/// support, endpoints included (>= 2 samples); values in between are linearly
/// interpolated.
struct WindowSpec {
    WindowDomain domain = WindowDomain::time;
    WindowShape shape = WindowShape::rectangular;
    double center = 0.0; // seconds (time) or Hz (frequency)
    double width = 0.0;  // full support width, same unit as center
    double rolloff = 0.0;
    std::vector<double> samples;

    void validate() const;
};

/// Transmitter + receiver windows. Exactly two legal orientations:
/// tx time + rx frequency, or tx frequency + rx time.
struct WindowPair {
    WindowSpec tx;
    WindowSpec rx;

    bool tx_time_rx_freq() const {
        return tx.domain == WindowDomain::time && rx.domain == WindowDomain::frequency;
    }
    bool tx_freq_rx_time() const {
        return tx.domain == WindowDomain::frequency && rx.domain == WindowDomain::time;
    }
    void validate() const;

    const WindowSpec& time_window() const { return tx.domain == WindowDomain::time ? tx : rx; }
    const WindowSpec& freq_window() const { return tx.domain == WindowDomain::frequency ? tx : rx; }
};

/// Window amplitude at u (total function; exactly 0 outside the support,
/// support endpoints included).
double window_value(const WindowSpec& w, double u);

/// Fourier-domain view of the window. Time-domain windows transform with the
/// forward kernel e^{-j 2 pi xi u}; frequency-domain windows with the inverse
/// kernel e^{+j 2 pi xi u}. Rectangular and Hamming use closed forms;
/// raised_cosine and tabulated use adaptive composite-trapezoid quadrature
/// with Richardson extrapolation (doubling until the step-halving change is
/// below ~1e-10 of the window area; starting resolution >= 32 samples per
/// oscillation cycle).
cplx window_transform(const WindowSpec& w, double xi);

/// Integral of |w(u)|^2 over the support (closed forms where available).
double window_energy(const WindowSpec& w);

/// Quadrature-only transform evaluation, available for every shape. Used as
/// an independent cross-check of the closed forms.
cplx window_transform_quadrature(const WindowSpec& w, double xi, double rel_tol = 1e-10);

} // namespace ddgrid
