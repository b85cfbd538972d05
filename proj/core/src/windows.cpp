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

#include "ddgrid/windows.hpp"

#include <algorithm>
#include <cmath>

namespace ddgrid {

void WindowSpec::validate() const {
    if (!(width > 0.0) || !std::isfinite(width))
        throw std::invalid_argument("WindowSpec: width must be positive and finite");
    if (!std::isfinite(center))
        throw std::invalid_argument("WindowSpec: center must be finite");
    if (shape == WindowShape::raised_cosine && (rolloff < 0.0 || rolloff > 1.0))
        throw std::invalid_argument("WindowSpec: rolloff must be in [0,1]");
    if (shape == WindowShape::tabulated) {
        if (samples.size() < 2)
            throw std::invalid_argument("WindowSpec: tabulated shape needs >= 2 samples");
        for (double v : samples)
            if (!std::isfinite(v))
                throw std::invalid_argument("WindowSpec: non-finite tabulated sample");
    }
}

void WindowPair::validate() const {
    tx.validate();
    rx.validate();
    if (!tx_time_rx_freq() && !tx_freq_rx_time())
        throw std::invalid_argument(
            "WindowPair: orientation must be tx-time/rx-frequency or tx-frequency/rx-time");
}

double window_value(const WindowSpec& w, double u) {
    const double off = u - w.center;
    const double half = w.width / 2.0;
    if (std::abs(off) > half) return 0.0;
    switch (w.shape) {
    case WindowShape::rectangular:
        return 1.0;
    case WindowShape::hamming:
        return 0.54 - 0.46 * std::cos(two_pi * (off + half) / w.width);
    case WindowShape::raised_cosine: {
        if (w.rolloff == 0.0) return 1.0;
        const double b = w.width / (1.0 + w.rolloff); // natural bandwidth
        const double f1 = b * (1.0 - w.rolloff) / 2.0;
        const double a = std::abs(off);
        if (a <= f1) return 1.0;
        return 0.5 * (1.0 + std::cos(pi * (a - f1) / (w.rolloff * b)));
    }
    case WindowShape::tabulated: {
        const double pos = (off + half) / w.width * static_cast<double>(w.samples.size() - 1);
        const auto i0 = static_cast<std::size_t>(
            std::clamp(std::floor(pos), 0.0, static_cast<double>(w.samples.size() - 2)));
        const double frac = pos - static_cast<double>(i0);
        return w.samples[i0] * (1.0 - frac) + w.samples[i0 + 1] * frac;
    }
    }
    return 0.0;
}

namespace {

// Transform kernel sign: forward (e^{-j2pi xi u}) for time-domain windows,
// inverse (e^{+j2pi xi u}) for frequency-domain windows.
double kernel_sign(const WindowSpec& w) {
    return w.domain == WindowDomain::time ? -1.0 : +1.0;
}

// Base transforms of the centered shapes; real and even, so the
// center-dependent phase e^{sign * j2pi xi center} factors out.
double rect_base(double xi, double width) { return width * sinc(width * xi); }

double hamming_base(double xi, double width) {
    const double x = width * xi;
    return width * (0.54 * sinc(x) + 0.23 * (sinc(x - 1.0) + sinc(x + 1.0)));
}

// Composite trapezoid of w(u) e^{sign j2pi xi u} over the support, n panels.
cplx trapezoid(const WindowSpec& w, double xi, double sign, std::size_t n) {
    const double a = w.center - w.width / 2.0;
    const double h = w.width / static_cast<double>(n);
    cplx sum{0.0, 0.0};
    for (std::size_t i = 0; i <= n; ++i) {
        const double u = a + h * static_cast<double>(i);
        const double phase = sign * two_pi * xi * u;
        cplx val = window_value(w, u) * cplx{std::cos(phase), std::sin(phase)};
        sum += (i == 0 || i == n) ? 0.5 * val : val;
    }
    return sum * h;
}

double window_area(const WindowSpec& w) {
    switch (w.shape) {
    case WindowShape::rectangular: return w.width;
    case WindowShape::hamming: return 0.54 * w.width;
    case WindowShape::raised_cosine: return w.width / (1.0 + w.rolloff);
    case WindowShape::tabulated: {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < w.samples.size(); ++i)
            s += 0.5 * (std::abs(w.samples[i]) + std::abs(w.samples[i + 1]));
        return s * w.width / static_cast<double>(w.samples.size() - 1);
    }
    }
    return w.width;
}

} // namespace

cplx window_transform_quadrature(const WindowSpec& w, double xi, double rel_tol) {
    const double sign = kernel_sign(w);
    const double scale = std::max(window_area(w), 1e-300);
    const double cycles = std::abs(xi) * w.width;
    // >= 32 points per oscillation cycle, floor of 4096 panels
    std::size_t n = std::max<std::size_t>(4096, static_cast<std::size_t>(32.0 * (cycles + 1.0)));
    if (w.shape == WindowShape::tabulated) {
        // keep tabulation breakpoints on quadrature nodes
        const std::size_t seg = w.samples.size() - 1;
        n = ((n + seg - 1) / seg) * seg;
    }
    cplx coarse = trapezoid(w, xi, sign, n);
    for (int iter = 0; iter < 10; ++iter) {
        const cplx fine = trapezoid(w, xi, sign, 2 * n);
        const cplx rich = (4.0 * fine - coarse) / 3.0;
        if (std::abs(fine - coarse) <= 3.0 * rel_tol * scale || 2 * n > (1u << 21))
            return rich;
        coarse = fine;
        n *= 2;
    }
    return coarse;
}

cplx window_transform(const WindowSpec& w, double xi) {
    const double sign = kernel_sign(w);
    switch (w.shape) {
    case WindowShape::rectangular:
    case WindowShape::hamming: {
        const double base = w.shape == WindowShape::rectangular ? rect_base(xi, w.width)
                                                                : hamming_base(xi, w.width);
        const double phase = sign * two_pi * xi * w.center;
        return base * cplx{std::cos(phase), std::sin(phase)};
    }
    case WindowShape::raised_cosine:
    case WindowShape::tabulated:
        return window_transform_quadrature(w, xi);
    }
    return {0.0, 0.0};
}

double window_energy(const WindowSpec& w) {
    switch (w.shape) {
    case WindowShape::rectangular:
        return w.width;
    case WindowShape::hamming:
        // integral of (0.54 - 0.46 cos(...))^2 over one period
        return w.width * (0.54 * 0.54 + 0.46 * 0.46 / 2.0);
    case WindowShape::raised_cosine:
        return (w.width / (1.0 + w.rolloff)) * (1.0 - w.rolloff / 4.0);
    case WindowShape::tabulated: {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < w.samples.size(); ++i)
            s += 0.5 * (w.samples[i] * w.samples[i] + w.samples[i + 1] * w.samples[i + 1]);
        return s * w.width / static_cast<double>(w.samples.size() - 1);
    }
    }
    return 0.0;
}

} // namespace ddgrid
