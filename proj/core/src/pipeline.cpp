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

#include "ddgrid/pipeline.hpp"

#include "ddgrid/fft.hpp"
#include "ddgrid/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <thread>

namespace ddgrid {

namespace {

struct Record {
    std::vector<cplx> samples;
    double fs = 0.0;
    double t_rec0 = 0.0;
    long off = 0; // index where the input's first sample sits
};

// Zero-padded analysis record: pad_factor times the input length, grown if
// needed so delayed copies and interpolation tails cannot wrap.
Record make_record(const SampledSignal& x, double max_shift_samples, int pad_factor, int margin) {
    const auto n = static_cast<long>(x.size());
    const long need = static_cast<long>(std::ceil(std::abs(max_shift_samples))) + margin;
    std::size_t ntot = fft::next_fast_size(
        std::max<std::size_t>(static_cast<std::size_t>(pad_factor) * x.size(),
                              x.size() + 2 * static_cast<std::size_t>(need)));
    Record rec;
    rec.fs = x.sample_rate;
    rec.off = (static_cast<long>(ntot) - n) / 2;
    rec.t_rec0 = x.t0 - static_cast<double>(rec.off) / rec.fs;
    rec.samples.assign(ntot, cplx{0.0, 0.0});
    return rec;
}

cplx cis(double phase) { return {std::cos(phase), std::sin(phase)}; }

void place_input(Record& rec, const SampledSignal& x) {
    std::copy(x.samples.begin(), x.samples.end(),
              rec.samples.begin() + static_cast<std::ptrdiff_t>(rec.off));
}

// multiply by a time-domain window sampled on the record clock
void apply_time_window(Record& rec, const WindowSpec& w, double gain) {
    for (std::size_t n = 0; n < rec.samples.size(); ++n) {
        const double t = rec.t_rec0 + static_cast<double>(n) / rec.fs;
        rec.samples[n] *= gain * window_value(w, t);
    }
}

// multiply the spectrum by a frequency-domain window sampled at the exact bin
// frequencies (mask edges land between bins; no snapping)
void apply_freq_window(Record& rec, const WindowSpec& w, double gain) {
    std::vector<cplx> spec = fft::forward(rec.samples);
    const std::size_t ntot = spec.size();
    for (std::size_t k = 0; k < ntot; ++k)
        spec[k] *= gain * window_value(w, fft::bin_freq(k, ntot, rec.fs));
    // the record phase origin: spectrum bins are relative to index 0, which
    // is what we want since we only scale magnitudes per bin
    rec.samples = fft::inverse(spec);
}

void apply_paths(const PhysicalChannel& ch, const Record& u, Record& y, PhaseGrouping grouping,
                 const InterpSpec& interp) {
    std::vector<cplx> shifted(u.samples.size());
    for (const PhysicalPath& p : ch.paths) {
        std::fill(shifted.begin(), shifted.end(), cplx{0.0, 0.0});
        add_delayed_scaled(shifted, u.samples, 0, p.delay * u.fs, cplx{1.0, 0.0}, interp);
        for (std::size_t n = 0; n < y.samples.size(); ++n) {
            const double t = y.t_rec0 + static_cast<double>(n) / y.fs;
            const cplx w = grouping == PhaseGrouping::doppler_then_delay
                               ? p.gain_v * cis(two_pi * p.doppler * (t - p.delay))
                               : p.u_weight() * cis(two_pi * p.doppler * t);
            y.samples[n] += w * shifted[n];
        }
    }
}

void check_sample_rate(const PhysicalChannel& ch, const WindowPair& windows,
                       const SampledSignal& x) {
    // occupancy proxy: 80% of the frequency window plus the Doppler span plus
    // a few window-skirt bins; the caller guarantees the signal itself fits
    const WindowSpec& fw = windows.freq_window();
    const WindowSpec& tw = windows.time_window();
    const double occupied =
        0.8 * fw.width + 2.0 * ch.max_abs_doppler() + 4.0 / std::max(tw.width, 1e-300);
    if (x.sample_rate < 1.25 * occupied - 1e-9 * occupied)
        throw std::invalid_argument(
            "apply_windowed_offgrid: sample rate below 1.25x the occupied bandwidth "
            "(0.8*W + Doppler span + window skirts)");
}

} // namespace

SampledSignal apply_windowed_offgrid(const PhysicalChannel& ch, const WindowPair& windows,
                                     const SampledSignal& x, const PipelineOptions& opts) {
    ch.validate();
    windows.validate();
    x.validate();
    if (ch.uses_density())
        throw std::invalid_argument("apply_windowed_offgrid: density channels are not simulable; "
                                    "use the tap pipeline");
    check_sample_rate(ch, windows, x);

    const int margin = 4 * opts.interp.half_width + 8;
    Record u = make_record(x, ch.max_delay() * x.sample_rate, opts.pad_factor, margin);
    place_input(u, x);

    Record y = u; // same layout, zeroed content
    std::fill(y.samples.begin(), y.samples.end(), cplx{0.0, 0.0});

    if (windows.tx_time_rx_freq()) {
        apply_time_window(u, windows.tx, 1.0);
        apply_paths(ch, u, y, PhaseGrouping::doppler_then_delay, opts.interp);
        apply_freq_window(y, windows.rx, 1.0);
    } else {
        apply_freq_window(u, windows.tx, 1.0);
        apply_paths(ch, u, y, PhaseGrouping::doppler_then_delay, opts.interp);
        apply_time_window(y, windows.rx, 1.0);
    }
    return {std::move(y.samples), y.fs, y.t_rec0};
}

namespace {

void check_rect_blocks(const TapMatrix& taps, const WindowPair& windows_rect) {
    windows_rect.validate();
    if (windows_rect.tx.shape != WindowShape::rectangular ||
        windows_rect.rx.shape != WindowShape::rectangular)
        throw std::invalid_argument(
            "apply_ongrid_model: the on-grid factorization holds only between rectangular "
            "windows; pass rectangular blocks with the grid's spans");
    const bool want_a = taps.convention == TapConvention::V_taps;
    if (want_a != windows_rect.tx_time_rx_freq())
        throw std::invalid_argument(
            "apply_ongrid_model: window orientation does not match the tap convention");
    const GridSpec& g = taps.grid;
    const WindowSpec& tw = windows_rect.time_window();
    const WindowSpec& fw = windows_rect.freq_window();
    if (std::abs(tw.width - g.frame_duration) > 1e-9 * g.frame_duration ||
        std::abs(fw.width - g.bandwidth) > 1e-9 * g.bandwidth ||
        std::abs(tw.center - g.time_center) >
            1e-9 * std::max(g.frame_duration, std::abs(g.time_center)) ||
        std::abs(fw.center - g.freq_center) >
            1e-9 * std::max(g.bandwidth, std::abs(g.freq_center)))
        throw std::invalid_argument(
            "apply_ongrid_model: rectangular blocks must sit on the grid's spans and centers");
}

} // namespace

SampledSignal apply_ongrid_model(const TapMatrix& taps, const WindowPair& windows_rect,
                                 const SampledSignal& x, const PipelineOptions& opts) {
    x.validate();
    if (taps.gains.empty())
        throw std::invalid_argument("apply_ongrid_model: empty tap matrix");
    check_rect_blocks(taps, windows_rect);

    const GridSpec& g = taps.grid;
    const double fs = x.sample_rate;
    const double t_frame = g.frame_duration;
    const double bw = g.bandwidth;

    const double p_exact = t_frame * fs;
    const long p_len = std::lround(p_exact);
    const bool periodic = std::abs(p_exact - static_cast<double>(p_len)) < 1e-6 && p_len > 0;
    if (periodic) {
        if (taps.n_kappa() > p_len || taps.kappa_max > p_len / 2 || taps.kappa_min < -p_len / 2)
            throw std::invalid_argument(
                "apply_ongrid_model: Doppler index range exceeds what the sample rate can "
                "represent; raise the oversampling or cap max_kappa below "
                "frame_duration*sample_rate/2");
    }

    const double max_shift = std::max(std::abs(static_cast<double>(taps.d_min)),
                                      std::abs(static_cast<double>(taps.d_max))) *
                             fs / bw;
    const int margin = 4 * opts.interp.half_width + 8;
    Record u = make_record(x, max_shift, opts.pad_factor, margin);
    place_input(u, x);

    // tx block
    if (taps.convention == TapConvention::V_taps)
        apply_time_window(u, windows_rect.tx, 1.0 / t_frame);
    else
        apply_freq_window(u, windows_rect.tx, 1.0 / bw);

    const auto ntot = static_cast<long>(u.samples.size());
    Record y = u;
    std::fill(y.samples.begin(), y.samples.end(), cplx{0.0, 0.0});

    // fractionally shifted copies of u, one per distinct fractional part of
    // d * fs / bw (a handful for rational fs/bw; e.g. exactly one at fs = 2W)
    std::map<long, std::vector<cplx>> frac_copies;
    auto frac_key = [](double frac) { return std::lround(frac * 1e9); };
    auto split_shift = [&](long d, long& d_int, long& key) {
        const double shift = static_cast<double>(d) * fs / bw;
        d_int = static_cast<long>(std::floor(shift));
        double frac = shift - static_cast<double>(d_int);
        key = frac_key(frac);
        if (key == 1000000000L) { // frac rounded up to a full sample
            ++d_int;
            key = 0;
        }
    };
    for (long d = taps.d_min; d <= taps.d_max; ++d) {
        long d_int, key;
        split_shift(d, d_int, key);
        if (frac_copies.count(key)) continue;
        std::vector<cplx> copy(u.samples.size(), cplx{0.0, 0.0});
        add_delayed_scaled(copy, u.samples, 0, static_cast<double>(key) * 1e-9, cplx{1.0, 0.0},
                           opts.interp);
        frac_copies.emplace(key, std::move(copy));
    }

    // Doppler phase at the record origin, per kappa
    const long nk = taps.n_kappa();
    std::vector<cplx> prephase(static_cast<std::size_t>(nk));
    for (long i = 0; i < nk; ++i) {
        const long kappa = taps.kappa_min + i;
        prephase[static_cast<std::size_t>(i)] =
            cis(two_pi * static_cast<double>(kappa) * u.t_rec0 / t_frame);
    }

    const double tw_prod = t_frame * bw;
    std::vector<cplx> spec_buf(periodic ? static_cast<std::size_t>(p_len) : 0);
    for (long d = taps.d_min; d <= taps.d_max; ++d) {
        // U-convention column: for V taps fold in e^{-j2pi nu_k tau_d}
        bool any = false;
        for (long i = 0; i < nk && !any; ++i)
            any = taps.at(taps.kappa_min + i, d) != cplx{0.0, 0.0};
        if (!any) continue;

        long d_int, key;
        split_shift(d, d_int, key);
        const std::vector<cplx>& src = frac_copies.at(key);

        auto column = [&](long i) {
            const long kappa = taps.kappa_min + i;
            cplx c = taps.at(kappa, d) * prephase[static_cast<std::size_t>(i)];
            if (taps.convention == TapConvention::V_taps) {
                const double r = std::fmod(static_cast<double>(kappa) * static_cast<double>(d),
                                           tw_prod);
                c *= cis(-two_pi * r / tw_prod);
            }
            return c;
        };

        if (periodic) {
            std::fill(spec_buf.begin(), spec_buf.end(), cplx{0.0, 0.0});
            for (long i = 0; i < nk; ++i) {
                const long kappa = taps.kappa_min + i;
                const long bin = ((kappa % p_len) + p_len) % p_len;
                spec_buf[static_cast<std::size_t>(bin)] += column(i);
            }
            const std::vector<cplx> pattern = fft::inverse_unscaled(spec_buf);
            // u's filtered content occupies [off - L, off + N + L) in src
            const long c_lo = u.off - opts.interp.half_width - 2;
            const long c_hi = u.off + static_cast<long>(x.size()) + opts.interp.half_width + 2;
            const long lo = std::max(0L, d_int + c_lo);
            const long hi = std::min(ntot, d_int + c_hi);
            for (long n = lo; n < hi; ++n) {
                const long m = n - d_int;
                if (m < 0 || m >= ntot) continue;
                const cplx uv = src[static_cast<std::size_t>(m)];
                if (uv == cplx{0.0, 0.0}) continue;
                y.samples[static_cast<std::size_t>(n)] +=
                    pattern[static_cast<std::size_t>(n % p_len)] * uv;
            }
        } else {
            // non-integral frame_duration * fs: evaluate the modulator per sample
            for (long n = 0; n < ntot; ++n) {
                const long m = n - d_int;
                if (m < 0 || m >= ntot) continue;
                const cplx uv = src[static_cast<std::size_t>(m)];
                if (uv == cplx{0.0, 0.0}) continue;
                const double t = y.t_rec0 + static_cast<double>(n) / fs;
                cplx mod{0.0, 0.0};
                for (long i = 0; i < nk; ++i) {
                    const long kappa = taps.kappa_min + i;
                    cplx c = taps.at(kappa, d);
                    if (c == cplx{0.0, 0.0}) continue;
                    if (taps.convention == TapConvention::V_taps)
                        c *= cis(-two_pi * g.nu(kappa) * g.tau(d));
                    mod += c * cis(two_pi * g.nu(kappa) * t);
                }
                y.samples[static_cast<std::size_t>(n)] += mod * uv;
            }
        }
    }

    // rx block
    if (taps.convention == TapConvention::V_taps)
        apply_freq_window(y, windows_rect.rx, 1.0 / bw);
    else
        apply_time_window(y, windows_rect.rx, 1.0 / t_frame);

    return {std::move(y.samples), y.fs, y.t_rec0};
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// uniform in [0,1) from the bit-specified engine; avoids the
// implementation-defined std distributions so streams are portable
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

SampledSignal make_test_signal(const GridSpec& grid, double oversampling, std::uint64_t seed) {
    grid.validate();
    if (oversampling < 1.25 - 1e-12)
        throw std::invalid_argument("make_test_signal: oversampling must be >= 1.25");
    const double t_frame = grid.frame_duration;
    const auto n = static_cast<std::size_t>(std::llround(oversampling * t_frame * grid.bandwidth));
    const double fs = static_cast<double>(n) / t_frame;

    std::mt19937_64 rng(seed);
    std::vector<cplx> spec(n, cplx{0.0, 0.0});
    const double band_edge = 0.4 * grid.bandwidth; // 80% occupancy
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(fft::bin_freq(k, n, fs)) > band_edge) continue;
        // Box-Muller
        const double u1 = uniform01(rng);
        const double u2 = uniform01(rng);
        const double r = std::sqrt(-2.0 * std::log(u1 + 0x1.0p-54));
        spec[k] = cplx{r * std::cos(two_pi * u2), r * std::sin(two_pi * u2)};
    }
    SampledSignal out;
    out.samples = fft::inverse(spec);
    out.sample_rate = fs;
    out.t0 = grid.time_center - t_frame / 2.0 + 0.5 / fs;
    const double p = mean_power(out);
    const double scale = p > 0.0 ? 1.0 / std::sqrt(p) : 1.0;
    for (cplx& v : out.samples) v *= scale;
    return out;
}

PhysicalChannel make_random_channel(const GridSpec& grid, int max_paths, std::uint64_t seed) {
    grid.validate();
    if (max_paths < 1) throw std::invalid_argument("make_random_channel: max_paths must be >= 1");
    std::mt19937_64 rng(seed);
    const int n_paths = 1 + static_cast<int>(uniform01(rng) * max_paths);
    PhysicalChannel ch;
    for (int i = 0; i < std::min(n_paths, max_paths); ++i) {
        PhysicalPath p;
        p.delay = uniform01(rng) * 64.0 / grid.bandwidth;
        p.doppler = (2.0 * uniform01(rng) - 1.0) * 32.0 / grid.frame_duration;
        const double mag = std::pow(10.0, -uniform01(rng)); // 20 dB log-uniform
        const double phase = two_pi * uniform01(rng);
        p.gain_v = mag * cis(phase);
        ch.paths.push_back(p);
    }
    return ch;
}

EquivalenceReport verify_equivalence(const PhysicalChannel& ch, const WindowPair& windows,
                                     const GridSpec& grid, const TruncationPolicy& trunc,
                                     int n_trials, std::uint64_t seed, const VerifyOptions& opts) {
    if (n_trials < 1) throw std::invalid_argument("verify_equivalence: n_trials must be >= 1");
    const TapMatrix taps = compute_taps(ch, windows, grid, trunc);

    WindowPair rect;
    const WindowSpec time_rect{WindowDomain::time, WindowShape::rectangular, grid.time_center,
                               grid.frame_duration, 0.0, {}};
    const WindowSpec freq_rect{WindowDomain::frequency, WindowShape::rectangular,
                               grid.freq_center, grid.bandwidth, 0.0, {}};
    if (windows.tx_time_rx_freq()) rect = {time_rect, freq_rect};
    else rect = {freq_rect, time_rect};

    EquivalenceReport rep;
    rep.trials = n_trials;
    rep.truncation_bound = taps.truncation_energy_bound();
    rep.nmse_per_trial.assign(static_cast<std::size_t>(n_trials), 0.0);

    auto run_trial = [&](int i) {
        const SampledSignal x =
            make_test_signal(grid, opts.oversampling, splitmix64(seed + static_cast<std::uint64_t>(i)));
        const SampledSignal y_off = apply_windowed_offgrid(ch, windows, x, opts.pipeline);
        const SampledSignal y_on = apply_ongrid_model(taps, rect, x, opts.pipeline);
        rep.nmse_per_trial[static_cast<std::size_t>(i)] = nmse(y_on, y_off);
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(n_trials));
    if (workers <= 1) {
        for (int i = 0; i < n_trials; ++i) run_trial(i);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (int i = static_cast<int>(w); i < n_trials; i += static_cast<int>(workers))
                    run_trial(i);
            });
        for (std::thread& t : pool) t.join();
    }

    double sum = 0.0, worst = 0.0;
    for (double e : rep.nmse_per_trial) {
        sum += e;
        worst = std::max(worst, e);
    }
    rep.nmse_mean = sum / static_cast<double>(n_trials);
    rep.nmse_max = worst;
    rep.config_digest = verify_config_digest(ch, windows, grid, trunc, n_trials, seed);
    return rep;
}

} // namespace ddgrid
