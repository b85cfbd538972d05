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

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddgrid {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

/// Normalized sinc, sin(pi x)/(pi x), with sinc(0) = 1.
inline double sinc(double x) {
    double px = pi * x;
    if (std::abs(px) < 1e-6) {
        double p2 = px * px;
        return 1.0 - p2 / 6.0 * (1.0 - p2 / 20.0);
    }
    return std::sin(px) / px;
}

/// Delay-Doppler grid: nu_k = k / frame_duration, tau_d = d / bandwidth.
///
/// time_center / freq_center locate the time- and frequency-domain window
/// supports (whichever transceiver side each window sits on).
struct GridSpec {
    double frame_duration = 0.0; // seconds
    double bandwidth = 0.0;      // Hz
    double time_center = 0.0;    // seconds
    double freq_center = 0.0;    // Hz

    void validate() const {
        if (!(frame_duration > 0.0) || !std::isfinite(frame_duration))
            throw std::invalid_argument("GridSpec: frame_duration must be positive and finite");
        if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
            throw std::invalid_argument("GridSpec: bandwidth must be positive and finite");
        if (!std::isfinite(time_center) || !std::isfinite(freq_center))
            throw std::invalid_argument("GridSpec: centers must be finite");
    }

    double nu(long kappa) const { return static_cast<double>(kappa) / frame_duration; }
    double tau(long d) const { return static_cast<double>(d) / bandwidth; }
};

/// Complex baseband samples on a uniform clock. samples[n] is the value at
/// t0 + n / sample_rate.
struct SampledSignal {
    std::vector<cplx> samples;
    double sample_rate = 0.0; // Hz
    double t0 = 0.0;          // seconds

    std::size_t size() const { return samples.size(); }
    double t(std::size_t n) const { return t0 + static_cast<double>(n) / sample_rate; }
    double duration() const { return static_cast<double>(samples.size()) / sample_rate; }

    void validate() const {
        if (samples.empty())
            throw std::invalid_argument("SampledSignal: length must be >= 1");
        if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
            throw std::invalid_argument("SampledSignal: sample_rate must be positive and finite");
        for (const cplx& v : samples)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw std::invalid_argument("SampledSignal: non-finite sample");
    }
};

/// Sum |a-b|^2 / sum |b|^2 with the two signals aligned on their common clock.
/// Signals may have different t0/length; the union domain is compared with
/// implicit zeros. Requires equal sample rates and an integer t0 offset.
double nmse(const SampledSignal& a, const SampledSignal& b);

/// Mean power sum |x|^2 / N.
double mean_power(const SampledSignal& x);

} // namespace ddgrid
