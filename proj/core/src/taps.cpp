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

#include "ddgrid/taps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ddgrid {

double TapMatrix::peak_abs() const {
    double m = 0.0;
    for (const cplx& g : gains) m = std::max(m, std::abs(g));
    return m;
}

double TapMatrix::truncation_energy_bound() const {
    if (total_energy <= 0.0) return 0.0;
    return std::max(0.0, 1.0 - retained_energy / total_energy);
}

namespace {

struct Orientation {
    const WindowSpec* time_win;
    const WindowSpec* freq_win;
};

Orientation check_setup(const WindowPair& windows, const GridSpec& grid,
                        TapConvention convention) {
    windows.validate();
    grid.validate();
    if (convention == TapConvention::V_taps && !windows.tx_time_rx_freq())
        throw std::invalid_argument(
            "compute_taps: V_taps requires a tx time window and rx frequency window");
    if (convention == TapConvention::U_taps && !windows.tx_freq_rx_time())
        throw std::invalid_argument(
            "compute_taps: U_taps requires a tx frequency window and rx time window");

    const WindowSpec& tw = windows.time_window();
    const WindowSpec& fw = windows.freq_window();
    if (std::abs(tw.width - grid.frame_duration) > 1e-9 * grid.frame_duration)
        throw std::invalid_argument(
            "compute_taps: time window support must equal the grid frame_duration");
    if (std::abs(fw.width - grid.bandwidth) > 1e-9 * grid.bandwidth)
        throw std::invalid_argument(
            "compute_taps: frequency window support must equal the grid bandwidth");
    const double tc_tol = 1e-9 * std::max(grid.frame_duration, std::abs(grid.time_center));
    const double fc_tol = 1e-9 * std::max(grid.bandwidth, std::abs(grid.freq_center));
    if (std::abs(tw.center - grid.time_center) > tc_tol ||
        std::abs(fw.center - grid.freq_center) > fc_tol)
        throw std::invalid_argument("compute_taps: window centers must equal the grid centers");
    return {&tw, &fw};
}

// Grow a symmetric half-width around `center` until the edge values sit below
// floor * profile-max for two consecutive rings and the captured energy
// reaches the per-axis target, or the cap stops growth. The per-axis energy
// target is 1 - (1 - capture)/2 so the two axes' product meets `capture`.
struct AxisRange {
    long lo, hi;
    bool capped;
};

template <typename EvalFn>
AxisRange grow_axis(long center, double floor_rel, double capture, long cap, double axis_total,
                    EvalFn&& eval, std::vector<cplx>& cache_out, long& cache_lo) {
    const double target = axis_total > 0.0 ? (1.0 - (1.0 - capture) / 2.0) * axis_total : 0.0;
    auto value_at = [&](long idx) { return eval(idx); };
    long k = 0;
    std::vector<cplx> acc{value_at(center)};
    double max_abs = std::abs(acc[0]);
    double energy = std::norm(acc[0]);
    int quiet_rings = 0;
    bool capped = false;
    while (true) {
        const bool floor_ok = quiet_rings >= 2;
        const bool energy_ok = axis_total <= 0.0 || energy >= target;
        if (floor_ok && energy_ok) break;
        if (k >= cap) {
            capped = !(floor_ok && energy_ok);
            break;
        }
        ++k;
        const cplx lo_v = value_at(center - k);
        const cplx hi_v = value_at(center + k);
        acc.insert(acc.begin(), lo_v);
        acc.push_back(hi_v);
        const double lo_a = std::abs(lo_v), hi_a = std::abs(hi_v);
        max_abs = std::max({max_abs, lo_a, hi_a});
        energy += std::norm(lo_v) + std::norm(hi_v);
        if (lo_a < floor_rel * max_abs && hi_a < floor_rel * max_abs)
            ++quiet_rings;
        else
            quiet_rings = 0;
    }
    cache_out = std::move(acc);
    cache_lo = center - k;
    return {center - k, center + k, capped};
}

} // namespace

TapMatrix compute_taps_discrete(const PhysicalChannel& ch, const WindowPair& windows,
                                const GridSpec& grid, const TruncationPolicy& trunc) {
    ch.validate();
    if (ch.uses_density())
        throw std::invalid_argument("compute_taps_discrete: channel holds a density");
    const TapConvention conv =
        windows.tx_time_rx_freq() ? TapConvention::V_taps : TapConvention::U_taps;
    const Orientation ori = check_setup(windows, grid, conv);

    TapMatrix out;
    out.convention = conv;
    out.grid = grid;
    out.truncation_epsilon = trunc.rel_floor;

    const double T = grid.frame_duration;
    const double W = grid.bandwidth;
    const double e_nu = T * window_energy(*ori.time_win);
    const double e_tau = W * window_energy(*ori.freq_win);

    struct PathProfile {
        cplx weight;
        long a_lo = 0, b_lo = 0;
        std::vector<cplx> a, b; // Doppler-axis, delay-axis factors
        AxisRange ra{0, 0, false}, rb{0, 0, false};
    };
    std::vector<PathProfile> profiles;

    long k_lo = 0, k_hi = -1, d_lo = 0, d_hi = -1;
    const bool forced = trunc.forced.has_value();
    if (forced) {
        k_lo = trunc.forced->kappa_min;
        k_hi = trunc.forced->kappa_max;
        d_lo = trunc.forced->d_min;
        d_hi = trunc.forced->d_max;
        if (k_lo > k_hi || d_lo > d_hi)
            throw std::invalid_argument("compute_taps: empty forced index window");
    }

    for (const PhysicalPath& p : ch.paths) {
        PathProfile pp;
        pp.weight = conv == TapConvention::V_taps ? p.gain_v : p.u_weight();
        auto eval_a = [&](long kappa) {
            return window_transform(*ori.time_win, grid.nu(kappa) - p.doppler);
        };
        auto eval_b = [&](long d) {
            return window_transform(*ori.freq_win, grid.tau(d) - p.delay);
        };
        if (forced) {
            pp.ra = {k_lo, k_hi, false};
            pp.rb = {d_lo, d_hi, false};
            pp.a_lo = k_lo;
            pp.b_lo = d_lo;
            for (long kappa = k_lo; kappa <= k_hi; ++kappa) pp.a.push_back(eval_a(kappa));
            for (long d = d_lo; d <= d_hi; ++d) pp.b.push_back(eval_b(d));
        } else {
            const long ck = std::lround(p.doppler * T);
            const long cd = std::lround(p.delay * W);
            pp.ra = grow_axis(ck, trunc.rel_floor, trunc.energy_capture, trunc.max_kappa, e_nu,
                              eval_a, pp.a, pp.a_lo);
            pp.rb = grow_axis(cd, trunc.rel_floor, trunc.energy_capture, trunc.max_d, e_tau,
                              eval_b, pp.b, pp.b_lo);
            out.cap_hit = out.cap_hit || pp.ra.capped || pp.rb.capped;
            if (k_lo > k_hi) {
                k_lo = pp.ra.lo; k_hi = pp.ra.hi; d_lo = pp.rb.lo; d_hi = pp.rb.hi;
            } else {
                k_lo = std::min(k_lo, pp.ra.lo); k_hi = std::max(k_hi, pp.ra.hi);
                d_lo = std::min(d_lo, pp.rb.lo); d_hi = std::max(d_hi, pp.rb.hi);
            }
        }
        profiles.push_back(std::move(pp));
    }

    if (k_lo > k_hi) { // no paths: 1x1 zero matrix at the origin
        k_lo = k_hi = 0;
        d_lo = d_hi = 0;
    }
    out.kappa_min = k_lo; out.kappa_max = k_hi;
    out.d_min = d_lo; out.d_max = d_hi;
    out.gains.assign(static_cast<std::size_t>(out.n_kappa() * out.n_d()), cplx{0.0, 0.0});

    for (const auto& pp : profiles) {
        for (long kappa = pp.ra.lo; kappa <= pp.ra.hi; ++kappa) {
            const cplx wa = pp.weight * pp.a[static_cast<std::size_t>(kappa - pp.a_lo)];
            if (wa == cplx{0.0, 0.0}) continue;
            cplx* row = &out.at(kappa, pp.rb.lo);
            const cplx* b = pp.b.data();
            const long nb = pp.rb.hi - pp.rb.lo + 1;
            for (long j = 0; j < nb; ++j) row[j] += wa * b[static_cast<std::size_t>(j)];
        }
    }

    double total = 0.0;
    for (const auto& pp : profiles) total += std::norm(pp.weight) * e_nu * e_tau;
    out.total_energy = total;

    // magnitude floor relative to the global peak; forced windows keep all cells
    const double peak = out.peak_abs();
    double retained = 0.0;
    if (!forced && peak > 0.0) {
        const double floor_abs = trunc.rel_floor * peak;
        for (cplx& g : out.gains) {
            if (std::abs(g) < floor_abs) g = cplx{0.0, 0.0};
            retained += std::norm(g);
        }
    } else {
        for (const cplx& g : out.gains) retained += std::norm(g);
    }
    out.retained_energy = retained;
    return out;
}

namespace {

std::vector<double> trapezoid_weights(const std::vector<double>& grid) {
    const std::size_t n = grid.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = grid[i + 1] - grid[i];
        w[i] += h / 2.0;
        w[i + 1] += h / 2.0;
    }
    return w;
}

// Dense tap evaluation over a fixed box for a tabulated density.
// For U_taps the density (tabulated in the V convention) is converted
// pointwise: U(tau, nu) = V(nu, tau) e^{-j2pi nu tau}.
std::vector<cplx> density_taps_box(const ScattererDensity& den, const Orientation& ori,
                                   const GridSpec& grid, TapConvention conv, long k_lo, long k_hi,
                                   long d_lo, long d_hi) {
    const auto n_nu = den.nu_grid.size();
    const auto n_tau = den.tau_grid.size();
    const auto n_k = static_cast<std::size_t>(k_hi - k_lo + 1);
    const auto n_d = static_cast<std::size_t>(d_hi - d_lo + 1);
    const std::vector<double> w_nu = trapezoid_weights(den.nu_grid);
    const std::vector<double> w_tau = trapezoid_weights(den.tau_grid);

    // C[i][d] = sum_j w_tau[j] V'(nu_i, tau_j) fw(tau_d - tau_j)
    std::vector<cplx> c(n_nu * n_d, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < n_nu; ++i) {
        for (std::size_t j = 0; j < n_tau; ++j) {
            cplx v = den.values[i][j];
            if (conv == TapConvention::U_taps) {
                const double ph = -two_pi * den.nu_grid[i] * den.tau_grid[j];
                v *= cplx{std::cos(ph), std::sin(ph)};
            }
            const cplx vv = w_tau[j] * v;
            if (vv == cplx{0.0, 0.0}) continue;
            for (std::size_t jd = 0; jd < n_d; ++jd) {
                const double tau_d = grid.tau(d_lo + static_cast<long>(jd));
                c[i * n_d + jd] += vv * window_transform(*ori.freq_win, tau_d - den.tau_grid[j]);
            }
        }
    }
    std::vector<cplx> taps(n_k * n_d, cplx{0.0, 0.0});
    for (std::size_t ik = 0; ik < n_k; ++ik) {
        const double nu_k = grid.nu(k_lo + static_cast<long>(ik));
        for (std::size_t i = 0; i < n_nu; ++i) {
            const cplx a = w_nu[i] * window_transform(*ori.time_win, nu_k - den.nu_grid[i]);
            if (a == cplx{0.0, 0.0}) continue;
            for (std::size_t jd = 0; jd < n_d; ++jd)
                taps[ik * n_d + jd] += a * c[i * n_d + jd];
        }
    }
    return taps;
}

ScattererDensity refine_density(const ScattererDensity& den) {
    ScattererDensity r;
    auto refine_grid = [](const std::vector<double>& g) {
        std::vector<double> out;
        out.reserve(2 * g.size() - 1);
        for (std::size_t i = 0; i + 1 < g.size(); ++i) {
            out.push_back(g[i]);
            out.push_back((g[i] + g[i + 1]) / 2.0);
        }
        out.push_back(g.back());
        return out;
    };
    r.nu_grid = refine_grid(den.nu_grid);
    r.tau_grid = refine_grid(den.tau_grid);
    const std::size_t ni = r.nu_grid.size(), nj = r.tau_grid.size();
    r.values.assign(ni, std::vector<cplx>(nj));
    for (std::size_t i = 0; i < ni; ++i)
        for (std::size_t j = 0; j < nj; ++j) {
            const std::size_t i0 = i / 2, j0 = j / 2;
            if (i % 2 == 0 && j % 2 == 0) r.values[i][j] = den.values[i0][j0];
            else if (i % 2 == 0) r.values[i][j] = (den.values[i0][j0] + den.values[i0][j0 + 1]) / 2.0;
            else if (j % 2 == 0) r.values[i][j] = (den.values[i0][j0] + den.values[i0 + 1][j0]) / 2.0;
            else
                r.values[i][j] = (den.values[i0][j0] + den.values[i0][j0 + 1] +
                                  den.values[i0 + 1][j0] + den.values[i0 + 1][j0 + 1]) / 4.0;
        }
    return r;
}

} // namespace

TapMatrix compute_taps_continuous(const ScattererDensity& density, const WindowPair& windows,
                                  const GridSpec& grid, const TruncationPolicy& trunc) {
    density.validate();
    const TapConvention conv =
        windows.tx_time_rx_freq() ? TapConvention::V_taps : TapConvention::U_taps;
    const Orientation ori = check_setup(windows, grid, conv);

    const double T = grid.frame_duration;
    const double W = grid.bandwidth;

    long k_lo, k_hi, d_lo, d_hi;
    bool capped = false;
    if (trunc.forced.has_value()) {
        k_lo = trunc.forced->kappa_min; k_hi = trunc.forced->kappa_max;
        d_lo = trunc.forced->d_min; d_hi = trunc.forced->d_max;
        if (k_lo > k_hi || d_lo > d_hi)
            throw std::invalid_argument("compute_taps: empty forced index window");
    } else {
        // start from the density support's bounding indices, grow by rings
        // until the outermost ring is below the magnitude floor
        k_lo = std::lround(density.nu_grid.front() * T);
        k_hi = std::lround(density.nu_grid.back() * T);
        d_lo = std::lround(density.tau_grid.front() * W);
        d_hi = std::lround(density.tau_grid.back() * W);
        const long ck_lo = k_lo, ck_hi = k_hi, cd_lo = d_lo, cd_hi = d_hi;
        long margin = 2;
        while (true) {
            const auto taps = density_taps_box(density, ori, grid, conv, k_lo, k_hi, d_lo, d_hi);
            double peak = 0.0;
            for (const cplx& g : taps) peak = std::max(peak, std::abs(g));
            const auto n_d = static_cast<std::size_t>(d_hi - d_lo + 1);
            const auto n_k = static_cast<std::size_t>(k_hi - k_lo + 1);
            double edge = 0.0;
            for (std::size_t j = 0; j < n_d; ++j) {
                edge = std::max(edge, std::abs(taps[j]));
                edge = std::max(edge, std::abs(taps[(n_k - 1) * n_d + j]));
            }
            for (std::size_t i = 0; i < n_k; ++i) {
                edge = std::max(edge, std::abs(taps[i * n_d]));
                edge = std::max(edge, std::abs(taps[i * n_d + n_d - 1]));
            }
            const bool done = peak == 0.0 || edge < trunc.rel_floor * peak;
            const bool at_cap = (ck_lo - k_lo) >= trunc.max_kappa && (cd_lo - d_lo) >= trunc.max_d;
            if (done || at_cap) {
                capped = !done && at_cap;
                break;
            }
            k_lo = std::max(ck_lo - trunc.max_kappa, ck_lo - margin);
            k_hi = std::min(ck_hi + trunc.max_kappa, ck_hi + margin);
            d_lo = std::max(cd_lo - trunc.max_d, cd_lo - margin);
            d_hi = std::min(cd_hi + trunc.max_d, cd_hi + margin);
            margin *= 2;
        }
    }

    TapMatrix out;
    out.convention = conv;
    out.grid = grid;
    out.truncation_epsilon = trunc.rel_floor;
    out.kappa_min = k_lo; out.kappa_max = k_hi;
    out.d_min = d_lo; out.d_max = d_hi;
    out.cap_hit = capped;
    out.gains = density_taps_box(density, ori, grid, conv, k_lo, k_hi, d_lo, d_hi);

    // step-halving self-check against a bilinear midpoint refinement
    const auto refined = density_taps_box(refine_density(density), ori, grid, conv,
                                          k_lo, k_hi, d_lo, d_hi);
    const double peak = out.peak_abs();
    if (peak > 0.0) {
        for (std::size_t i = 0; i < out.gains.size(); ++i)
            if (std::abs(out.gains[i] - refined[i]) > 1e-3 * peak) {
                out.quadrature_coarse = true;
                break;
            }
    }

    double retained = 0.0;
    for (const cplx& g : out.gains) retained += std::norm(g);
    out.retained_energy = retained;
    out.total_energy = 0.0; // no closed form for an arbitrary tabulated density
    return out;
}

TapMatrix compute_taps(const PhysicalChannel& ch, const WindowPair& windows, const GridSpec& grid,
                       const TruncationPolicy& trunc) {
    ch.validate();
    if (ch.uses_density()) return compute_taps_continuous(*ch.density, windows, grid, trunc);
    return compute_taps_discrete(ch, windows, grid, trunc);
}

double interp_kernel(double x) {
    if (std::abs(x) < 1e-8) {
        const double px = pi * x;
        return pi * (1.0 - px * px / 6.0);
    }
    return std::sin(pi * x) / x;
}

cplx reconstruct_spread(const TapMatrix& taps, double nu, double tau) {
    if (taps.convention == TapConvention::U_taps)
        throw std::invalid_argument(
            "reconstruct_spread: only the V orientation has a sampled expansion");
    if (taps.gains.empty()) return {0.0, 0.0};
    const GridSpec& g = taps.grid;
    const long nk = taps.n_kappa(), nd = taps.n_d();
    std::vector<cplx> col(static_cast<std::size_t>(nd));
    for (long j = 0; j < nd; ++j) {
        const double dt = tau - g.tau(taps.d_min + j);
        const double ph = two_pi * g.freq_center * dt;
        col[static_cast<std::size_t>(j)] =
            interp_kernel(g.bandwidth * dt) * cplx{std::cos(ph), std::sin(ph)};
    }
    cplx acc{0.0, 0.0};
    for (long i = 0; i < nk; ++i) {
        const double dn = nu - g.nu(taps.kappa_min + i);
        const double ph = -two_pi * g.time_center * dn;
        const cplx row = interp_kernel(g.frame_duration * dn) * cplx{std::cos(ph), std::sin(ph)};
        cplx inner{0.0, 0.0};
        const cplx* r = &taps.gains[static_cast<std::size_t>(i * nd)];
        for (long j = 0; j < nd; ++j) inner += r[j] * col[static_cast<std::size_t>(j)];
        acc += row * inner;
    }
    return acc / (pi * pi);
}

namespace {

// two-sided power iteration for the top two singular values of the
// (elementwise |.|) matrix
std::pair<double, double> top_two_singular(const std::vector<double>& m, std::size_t rows,
                                           std::size_t cols) {
    auto mat_vec = [&](const std::vector<double>& v, std::vector<double>& out) {
        out.assign(rows, 0.0);
        for (std::size_t i = 0; i < rows; ++i) {
            double s = 0.0;
            const double* r = &m[i * cols];
            for (std::size_t j = 0; j < cols; ++j) s += r[j] * v[j];
            out[i] = s;
        }
    };
    auto mat_tvec = [&](const std::vector<double>& u, std::vector<double>& out) {
        out.assign(cols, 0.0);
        for (std::size_t i = 0; i < rows; ++i) {
            const double* r = &m[i * cols];
            const double ui = u[i];
            for (std::size_t j = 0; j < cols; ++j) out[j] += r[j] * ui;
        }
    };
    auto norm2 = [](const std::vector<double>& v) {
        return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    };
    auto normalize = [&](std::vector<double>& v) {
        const double n = norm2(v);
        if (n > 0.0)
            for (double& x : v) x /= n;
        return n;
    };

    std::vector<double> v(cols), u, tmp;
    for (std::size_t j = 0; j < cols; ++j) v[j] = 1.0 + 1e-3 * static_cast<double>(j % 7);
    normalize(v);
    double sigma1 = 0.0;
    for (int it = 0; it < 100; ++it) {
        mat_vec(v, u);
        const double s = normalize(u);
        mat_tvec(u, tmp);
        const double s2 = normalize(tmp);
        v.swap(tmp);
        if (it > 3 && std::abs(s2 - sigma1) <= 1e-15 * std::max(1.0, s2)) {
            sigma1 = s2;
            break;
        }
        sigma1 = std::max(s, s2);
    }
    std::vector<double> v1 = v, u1;
    mat_vec(v1, u1);
    sigma1 = normalize(u1);
    if (sigma1 == 0.0) return {0.0, 0.0};

    // deflate: B = M - sigma1 u1 v1^T, iterate on B^T B
    std::vector<double> w(cols), bw, btbw(cols);
    for (std::size_t j = 0; j < cols; ++j) w[j] = 1.0 + 1e-3 * static_cast<double>((j * 3 + 1) % 11);
    // project out v1
    auto deflate = [&](std::vector<double>& x) {
        double dot = std::inner_product(x.begin(), x.end(), v1.begin(), 0.0);
        for (std::size_t j = 0; j < cols; ++j) x[j] -= dot * v1[j];
    };
    deflate(w);
    if (normalize(w) == 0.0) return {sigma1, 0.0};
    double sigma2 = 0.0;
    for (int it = 0; it < 100; ++it) {
        mat_vec(w, bw);
        const double uv = std::inner_product(w.begin(), w.end(), v1.begin(), 0.0);
        for (std::size_t i = 0; i < rows; ++i) bw[i] -= sigma1 * u1[i] * uv;
        mat_tvec(bw, btbw);
        const double uu = std::inner_product(bw.begin(), bw.end(), u1.begin(), 0.0);
        for (std::size_t j = 0; j < cols; ++j) btbw[j] -= sigma1 * v1[j] * uu;
        deflate(btbw);
        w = btbw;
        const double n = normalize(w);
        const double s = std::sqrt(n);
        if (it > 3 && std::abs(s - sigma2) <= 1e-14 * std::max(sigma1, s)) {
            sigma2 = s;
            break;
        }
        sigma2 = s;
    }
    return {sigma1, sigma2};
}

} // namespace

SpreadReport spread_report(const TapMatrix& taps, const std::vector<double>& thresholds,
                           long box_max) {
    if (taps.gains.empty())
        throw std::invalid_argument("spread_report: empty tap matrix");
    const auto rows = static_cast<std::size_t>(taps.n_kappa());
    const auto cols = static_cast<std::size_t>(taps.n_d());

    SpreadReport rep;
    rep.thresholds = thresholds;

    std::vector<double> mag(taps.gains.size());
    double total = 0.0;
    double peak = -1.0;
    std::size_t peak_idx = 0;
    for (std::size_t i = 0; i < taps.gains.size(); ++i) {
        mag[i] = std::abs(taps.gains[i]);
        total += mag[i] * mag[i];
        if (mag[i] > peak) {
            peak = mag[i];
            peak_idx = i;
        }
    }
    rep.peak_abs = peak;
    rep.peak_kappa = taps.kappa_min + static_cast<long>(peak_idx / cols);
    rep.peak_d = taps.d_min + static_cast<long>(peak_idx % cols);

    for (double thr : thresholds) {
        std::size_t cnt = 0;
        for (double v : mag)
            if (v >= thr * peak) ++cnt;
        rep.counts.push_back(cnt);
    }

    const long pk_i = static_cast<long>(peak_idx / cols);
    const long pk_j = static_cast<long>(peak_idx % cols);
    for (long k = 0; k <= box_max; ++k) {
        const long i0 = std::max(0L, pk_i - k), i1 = std::min<long>(static_cast<long>(rows) - 1, pk_i + k);
        const long j0 = std::max(0L, pk_j - k), j1 = std::min<long>(static_cast<long>(cols) - 1, pk_j + k);
        double e = 0.0;
        for (long i = i0; i <= i1; ++i)
            for (long j = j0; j <= j1; ++j)
                e += mag[static_cast<std::size_t>(i) * cols + static_cast<std::size_t>(j)] *
                     mag[static_cast<std::size_t>(i) * cols + static_cast<std::size_t>(j)];
        rep.energy_concentration.push_back(total > 0.0 ? e / total : 0.0);
    }

    const auto [s1, s2] = top_two_singular(mag, rows, cols);
    rep.rank1_residual = s1 > 0.0 ? std::min(1.0, s2 / s1) : 0.0;
    return rep;
}

} // namespace ddgrid
