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

#include "ddgrid/interp.hpp"

#include <cmath>

namespace ddgrid {

namespace {

// I0(x), series expansion. Converges fast for the beta range used here.
double bessel_i0(double x) {
    double sum = 1.0, term = 1.0;
    double half = x / 2.0;
    for (int k = 1; k < 64; ++k) {
        term *= (half / k) * (half / k);
        sum += term;
        if (term < sum * 1e-18) break;
    }
    return sum;
}

} // namespace

std::vector<double> fractional_delay_kernel(double frac, const InterpSpec& spec) {
    const int L = spec.half_width;
    std::vector<double> h(static_cast<std::size_t>(2 * L), 0.0);
    if (frac == 0.0) {
        h[static_cast<std::size_t>(L - 1)] = 1.0; // lag k = 0
        return h;
    }
    const double i0b = bessel_i0(spec.beta);
    for (int i = 0; i < 2 * L; ++i) {
        const double k = static_cast<double>(i - L + 1) - frac;
        const double r = k / static_cast<double>(L);
        if (std::abs(r) >= 1.0) continue;
        const double win = bessel_i0(spec.beta * std::sqrt(1.0 - r * r)) / i0b;
        h[static_cast<std::size_t>(i)] = sinc(k) * win;
    }
    return h;
}

void add_delayed_scaled(std::vector<cplx>& dst, const std::vector<cplx>& src,
                        long src_offset, double shift, cplx scale,
                        const InterpSpec& spec) {
    const long d_int = static_cast<long>(std::floor(shift));
    const double frac = shift - static_cast<double>(d_int);
    const std::vector<double> h = fractional_delay_kernel(frac, spec);
    const int L = spec.half_width;
    const long n_dst = static_cast<long>(dst.size());
    const long n_src = static_cast<long>(src.size());
    // y[n] += scale * sum_i h[i] * src[n - off - d_int - (i - L + 1)]
    for (int i = 0; i < 2 * L; ++i) {
        const double hi = h[static_cast<std::size_t>(i)];
        if (hi == 0.0) continue;
        const cplx w = scale * hi;
        const long base = src_offset + d_int + static_cast<long>(i - L + 1);
        const long n0 = std::max(base, 0L);
        const long n1 = std::min(base + n_src, n_dst);
        for (long n = n0; n < n1; ++n)
            dst[static_cast<std::size_t>(n)] += w * src[static_cast<std::size_t>(n - base)];
    }
}

SampledSignal delay_signal(const SampledSignal& x, double delay_s, const InterpSpec& spec) {
    x.validate();
    const double shift = delay_s * x.sample_rate;
    const int L = spec.half_width;
    SampledSignal out;
    out.sample_rate = x.sample_rate;
    out.t0 = x.t0 - static_cast<double>(L) / x.sample_rate;
    const long extra = static_cast<long>(std::ceil(std::abs(shift))) + 2 * L;
    out.samples.assign(x.samples.size() + static_cast<std::size_t>(extra) + 1, cplx{0.0, 0.0});
    add_delayed_scaled(out.samples, x.samples, L, shift, cplx{1.0, 0.0}, spec);
    return out;
}

} // namespace ddgrid
