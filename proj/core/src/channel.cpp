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

#include <algorithm>
#include <cmath>
#include <limits>

namespace ddgrid {

void ScattererDensity::validate() const {
    if (nu_grid.size() < 2 || tau_grid.size() < 2)
        throw std::invalid_argument("ScattererDensity: grids need >= 2 points each");
    for (std::size_t i = 1; i < nu_grid.size(); ++i)
        if (!(nu_grid[i] > nu_grid[i - 1]))
            throw std::invalid_argument("ScattererDensity: nu_grid must be strictly increasing");
    for (std::size_t j = 1; j < tau_grid.size(); ++j)
        if (!(tau_grid[j] > tau_grid[j - 1]))
            throw std::invalid_argument("ScattererDensity: tau_grid must be strictly increasing");
    if (values.size() != nu_grid.size())
        throw std::invalid_argument("ScattererDensity: values rows must match nu_grid length");
    for (const auto& row : values)
        if (row.size() != tau_grid.size())
            throw std::invalid_argument("ScattererDensity: values cols must match tau_grid length");
}

void PhysicalChannel::validate() const {
    if (density.has_value() && !paths.empty())
        throw std::invalid_argument(
            "PhysicalChannel: mixing discrete paths with a density is rejected");
    for (const PhysicalPath& p : paths) {
        if (!std::isfinite(p.delay) || p.delay < 0.0)
            throw std::invalid_argument("PhysicalPath: delay must be finite and non-negative");
        if (!std::isfinite(p.doppler))
            throw std::invalid_argument("PhysicalPath: doppler must be finite");
        if (!std::isfinite(p.gain_v.real()) || !std::isfinite(p.gain_v.imag()))
            throw std::invalid_argument("PhysicalPath: gain must be finite");
    }
    if (density.has_value()) density->validate();
}

double PhysicalChannel::max_delay() const {
    double m = 0.0;
    for (const PhysicalPath& p : paths) m = std::max(m, p.delay);
    if (density.has_value() && !density->tau_grid.empty())
        m = std::max(m, density->tau_grid.back());
    return m;
}

double PhysicalChannel::max_abs_doppler() const {
    double m = 0.0;
    for (const PhysicalPath& p : paths) m = std::max(m, std::abs(p.doppler));
    if (density.has_value() && !density->nu_grid.empty())
        m = std::max({m, std::abs(density->nu_grid.front()), std::abs(density->nu_grid.back())});
    return m;
}

namespace {

void require_discrete(const PhysicalChannel& ch, const char* op) {
    ch.validate();
    if (ch.uses_density())
        throw std::invalid_argument(std::string(op) +
                                    ": density-based channels are not point-evaluable; "
                                    "use the on-grid quadrature path instead");
}

cplx cis(double phase) { return {std::cos(phase), std::sin(phase)}; }

} // namespace

cplx eval_transfer_function(const PhysicalChannel& ch, double f, double t) {
    require_discrete(ch, "eval_transfer_function");
    cplx acc{0.0, 0.0};
    for (const PhysicalPath& p : ch.paths)
        acc += p.u_weight() * cis(two_pi * (p.doppler * t - f * p.delay));
    return acc;
}

cplx eval_modulation_function(const PhysicalChannel& ch, double t, double f) {
    require_discrete(ch, "eval_modulation_function");
    cplx acc{0.0, 0.0};
    for (const PhysicalPath& p : ch.paths)
        acc += p.gain_v * cis(two_pi * (p.doppler * t - p.delay * f));
    return acc;
}

SampledSignal apply_channel_offgrid(const PhysicalChannel& ch, const SampledSignal& x,
                                    const ChannelApplyOptions& opts) {
    require_discrete(ch, "apply_channel_offgrid");
    x.validate();

    const double fs = x.sample_rate;
    const int L = opts.interp.half_width;
    const long extra = static_cast<long>(std::ceil(ch.max_delay() * fs)) + 2 * L;

    SampledSignal out;
    out.sample_rate = fs;
    out.t0 = x.t0 - static_cast<double>(L) / fs;
    out.samples.assign(x.samples.size() + static_cast<std::size_t>(extra) + 1, cplx{0.0, 0.0});

    std::vector<cplx> shifted(out.samples.size());
    for (const PhysicalPath& p : ch.paths) {
        std::fill(shifted.begin(), shifted.end(), cplx{0.0, 0.0});
        add_delayed_scaled(shifted, x.samples, L, p.delay * fs, cplx{1.0, 0.0}, opts.interp);
        // Phase ramps are evaluated per sample (no recurrence) so the two
        // groupings stay an exact algebraic identity.
        for (std::size_t n = 0; n < out.samples.size(); ++n) {
            const double t = out.t0 + static_cast<double>(n) / fs;
            cplx w;
            if (opts.grouping == PhaseGrouping::doppler_then_delay)
                w = p.gain_v * cis(two_pi * p.doppler * (t - p.delay));
            else
                w = p.u_weight() * cis(two_pi * p.doppler * t);
            out.samples[n] += w * shifted[n];
        }
    }
    return out;
}

double nmse(const SampledSignal& a, const SampledSignal& b) {
    if (a.sample_rate != b.sample_rate)
        throw std::invalid_argument("nmse: sample rates differ");
    const double off_f = (a.t0 - b.t0) * a.sample_rate;
    const long off = std::lround(off_f);
    if (std::abs(off_f - static_cast<double>(off)) > 1e-6)
        throw std::invalid_argument("nmse: signals are not on a common clock");
    // union domain in b's index space
    const long lo = std::min(0L, off);
    const long hi = std::max(static_cast<long>(b.size()),
                             off + static_cast<long>(a.size()));
    double err = 0.0, ref = 0.0;
    for (long n = lo; n < hi; ++n) {
        const long ia = n - off;
        const cplx va = (ia >= 0 && ia < static_cast<long>(a.size()))
                            ? a.samples[static_cast<std::size_t>(ia)] : cplx{0.0, 0.0};
        const cplx vb = (n >= 0 && n < static_cast<long>(b.size()))
                            ? b.samples[static_cast<std::size_t>(n)] : cplx{0.0, 0.0};
        err += std::norm(va - vb);
        ref += std::norm(vb);
    }
    if (ref == 0.0) return err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return err / ref;
}

double mean_power(const SampledSignal& x) {
    double s = 0.0;
    for (const cplx& v : x.samples) s += std::norm(v);
    return x.samples.empty() ? 0.0 : s / static_cast<double>(x.samples.size());
}

} // namespace ddgrid
