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

#include "ddgrid/channel.hpp"

#include "ddgrid/fft.hpp"
#include "ddgrid/pipeline.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ddgrid;

namespace {

GridSpec small_grid() {
    GridSpec g;
    g.bandwidth = 7.68e6;
    g.frame_duration = 512.0 / g.bandwidth;
    return g;
}

SampledSignal test_signal(std::uint64_t seed) {
    return make_test_signal(small_grid(), 2.0, seed);
}

// make_test_signal returns one period of a circularly band-limited record;
// as a finite-support signal it still has a boundary jump with weak wideband
// content. A cosine taper removes it so interpolation accuracy can be
// measured on a genuinely band-limited record.
SampledSignal tapered_signal(std::uint64_t seed, std::size_t ramp = 128) {
    SampledSignal x = test_signal(seed);
    for (std::size_t n = 0; n < ramp; ++n) {
        const double w = 0.5 * (1.0 - std::cos(pi * static_cast<double>(n) /
                                               static_cast<double>(ramp)));
        x.samples[n] *= w;
        x.samples[x.size() - 1 - n] *= w;
    }
    return x;
}

// Frequency-domain delay on a zero-padded copy; independent of the
// windowed-sinc interpolation path.
SampledSignal dft_delay(const SampledSignal& x, double delay_s) {
    const std::size_t n = x.size();
    const std::size_t ntot = fft::next_fast_size(4 * n);
    const long off = static_cast<long>((ntot - n) / 2);
    std::vector<cplx> rec(ntot, cplx{0.0, 0.0});
    std::copy(x.samples.begin(), x.samples.end(), rec.begin() + off);
    std::vector<cplx> spec = fft::forward(rec);
    for (std::size_t k = 0; k < ntot; ++k) {
        const double f = fft::bin_freq(k, ntot, x.sample_rate);
        spec[k] *= std::polar(1.0, -two_pi * f * delay_s);
    }
    return {fft::inverse(spec), x.sample_rate,
            x.t0 - static_cast<double>(off) / x.sample_rate};
}

PhysicalChannel one_path(cplx gain, double delay, double doppler) {
    PhysicalChannel ch;
    ch.paths.push_back({gain, delay, doppler});
    return ch;
}

} // namespace

TEST_CASE("transfer function point evaluations") {
    // identity channel
    CHECK(eval_transfer_function(one_path({1.0, 0.0}, 0.0, 0.0), 1.23e6, 4.5e-5) ==
          cplx{1.0, 0.0});
    // pure delay phase: f*tau = 1/2 -> e^{-j pi} = -1
    const cplx t = eval_transfer_function(one_path({1.0, 0.0}, 1e-6, 0.0), 5e5, 0.0);
    CHECK(std::abs(t - cplx{-1.0, 0.0}) < 1e-12);
    // superposition against independent per-path evaluation
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PhysicalChannel both;
    const PhysicalPath p1{cplx{0.8, -0.2}, 3.1e-6, 220.0};
    const PhysicalPath p2{cplx{-0.4, 0.9}, 0.7e-6, -560.0};
    both.paths = {p1, p2};
    for (int i = 0; i < 50; ++i) {
        const double f = 2e6 * u(rng), tt = 1e-3 * u(rng);
        const cplx lhs = eval_transfer_function(both, f, tt);
        const cplx rhs = eval_transfer_function(one_path(p1.gain_v, p1.delay, p1.doppler), f, tt) +
                         eval_transfer_function(one_path(p2.gain_v, p2.delay, p2.doppler), f, tt);
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("modulation function point evaluations") {
    CHECK(eval_modulation_function(one_path({1.0, 0.0}, 0.0, 0.0), 0.123, 4.5e6) ==
          cplx{1.0, 0.0});
    // quarter-cycle Doppler phase: nu*t = 1/4 -> +j
    const cplx m = eval_modulation_function(one_path({1.0, 0.0}, 0.0, 1e3), 0.25e-3, 7.7e6);
    CHECK(std::abs(m - cplx{0.0, 1.0}) < 1e-12);
}

TEST_CASE("M and T are tied by the V/U phase for a single path") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const PhysicalChannel ch = one_path({0.3, 0.7}, 2.4e-6, 815.0);
    const PhysicalPath& p = ch.paths[0];
    for (int i = 0; i < 100; ++i) {
        const double t = 1e-3 * u(rng), f = 3e6 * u(rng);
        const cplx m = eval_modulation_function(ch, t, f);
        const cplx tf = eval_transfer_function(ch, f, t);
        const cplx bridge = tf * std::polar(1.0, two_pi * p.doppler * p.delay);
        CHECK(std::abs(m - bridge) < 1e-12);
    }
    // U weight definition
    CHECK(std::abs(p.u_weight() - p.gain_v * std::polar(1.0, -two_pi * p.doppler * p.delay)) <
          1e-16);
}

TEST_CASE("density channels are rejected by point evaluators") {
    PhysicalChannel ch;
    ScattererDensity d;
    d.nu_grid = {-1.0, 1.0};
    d.tau_grid = {0.0, 1e-6};
    d.values = {{cplx{1, 0}, cplx{0, 0}}, {cplx{0, 0}, cplx{1, 0}}};
    ch.density = d;
    CHECK_THROWS_AS(eval_transfer_function(ch, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(eval_modulation_function(ch, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(apply_channel_offgrid(ch, test_signal(1)), std::invalid_argument);
    // mixing representations is invalid
    ch.paths.push_back({cplx{1.0, 0.0}, 0.0, 0.0});
    CHECK_THROWS_AS(ch.validate(), std::invalid_argument);
}

TEST_CASE("identity channel reproduces the input") {
    const SampledSignal x = test_signal(2);
    const SampledSignal y = apply_channel_offgrid(one_path({1.0, 0.0}, 0.0, 0.0), x);
    CHECK(nmse(y, x) < 1e-24); // frac = 0 kernel is an exact impulse
}

TEST_CASE("integer-sample delay shifts the sample grid") {
    const SampledSignal x = test_signal(3);
    const long k = 37;
    const double tau = static_cast<double>(k) / x.sample_rate;
    const SampledSignal y = apply_channel_offgrid(one_path({1.0, 0.0}, tau, 0.0), x);
    SampledSignal shifted = x;
    shifted.t0 += tau;
    CHECK(nmse(y, shifted) < 1e-20);
}

TEST_CASE("fractional delay against the DFT-domain oracle") {
    const SampledSignal x = test_signal(4);
    const double tau = 0.5 / x.sample_rate;
    const SampledSignal y = apply_channel_offgrid(one_path({1.0, 0.0}, tau, 0.0), x);
    const SampledSignal oracle = dft_delay(x, tau);
    CHECK(nmse(y, oracle) < 1e-8);
}

TEST_CASE("phase grouping forms agree to machine precision") {
    const SampledSignal x = test_signal(5);
    PhysicalChannel ch;
    ch.paths = {{cplx{0.9, 0.1}, 3.3e-6, 4731.0},
                {cplx{-0.2, 0.6}, 1.1e-6, -2222.5},
                {cplx{0.05, -0.4}, 0.4e-6, 987.25}};
    ChannelApplyOptions a, b;
    a.grouping = PhaseGrouping::doppler_then_delay;
    b.grouping = PhaseGrouping::scale_then_delay;
    const SampledSignal ya = apply_channel_offgrid(ch, x, a);
    const SampledSignal yb = apply_channel_offgrid(ch, x, b);
    CHECK(nmse(ya, yb) < 1e-24);
}

TEST_CASE("linearity over channel union") {
    const SampledSignal x = test_signal(6);
    PhysicalChannel c1, c2;
    c1.paths = {{cplx{0.7, -0.3}, 2.2e-6, 1500.0}};
    c2.paths = {{cplx{-0.1, 0.9}, 0.9e-6, -800.0}};
    PhysicalChannel both;
    both.paths = {c1.paths[0], c2.paths[0]};
    const SampledSignal y1 = apply_channel_offgrid(c1, x);
    const SampledSignal y2 = apply_channel_offgrid(c2, x);
    const SampledSignal yb = apply_channel_offgrid(both, x);
    SampledSignal sum = y1;
    REQUIRE(y1.size() == y2.size());
    for (std::size_t n = 0; n < sum.size(); ++n) sum.samples[n] += y2.samples[n];
    CHECK(nmse(yb, sum) < 1e-24);
}

TEST_CASE("doppler-free channels commute with time shifts away from edges") {
    const SampledSignal x = test_signal(7);
    PhysicalChannel ch;
    ch.paths = {{cplx{0.8, 0.0}, 1.7e-6, 0.0}, {cplx{0.3, -0.3}, 0.45e-6, 0.0}};
    const double shift = 7.3 / x.sample_rate;
    const SampledSignal y1 = apply_channel_offgrid(ch, delay_signal(x, shift));
    const SampledSignal y2 = delay_signal(apply_channel_offgrid(ch, x), shift);
    // interior comparison: clip both to a common window away from the edges
    const double fs = x.sample_rate;
    const double t_lo = x.t0 + 200.0 / fs;
    const double t_hi = x.t0 + (static_cast<double>(x.size()) - 200.0) / fs;
    auto clip = [&](const SampledSignal& s) {
        SampledSignal out;
        out.sample_rate = fs;
        const long n0 = static_cast<long>(std::ceil((t_lo - s.t0) * fs));
        const long n1 = static_cast<long>(std::floor((t_hi - s.t0) * fs));
        out.t0 = s.t0 + static_cast<double>(n0) / fs;
        out.samples.assign(s.samples.begin() + n0, s.samples.begin() + n1);
        return out;
    };
    CHECK(nmse(clip(y1), clip(y2)) < 1e-8);
}

TEST_CASE("non-finite samples are rejected") {
    SampledSignal x = test_signal(8);
    x.samples[5] = cplx{std::nan(""), 0.0};
    CHECK_THROWS_AS(apply_channel_offgrid(one_path({1.0, 0.0}, 0.0, 0.0), x),
                    std::invalid_argument);
}

TEST_CASE("path validation") {
    PhysicalChannel ch;
    ch.paths = {{cplx{1.0, 0.0}, -1e-9, 0.0}};
    CHECK_THROWS_AS(ch.validate(), std::invalid_argument);
    ch.paths = {{cplx{1.0, 0.0}, 0.0, std::nan("")}};
    CHECK_THROWS_AS(ch.validate(), std::invalid_argument);
    // zero-gain paths are legal
    ch.paths = {{cplx{0.0, 0.0}, 1e-6, 100.0}};
    CHECK_NOTHROW(ch.validate());
}
