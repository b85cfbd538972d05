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

#include "ddgrid/serialize.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <charconv>
#include <fstream>
#include <sstream>

namespace ddgrid {

using ordered_json = nlohmann::ordered_json;

void RunConfig::validate() const {
    channel.validate();
    windows.validate();
    grid.validate();
    if (trials < 1) throw ConfigError("config: trials must be >= 1");
    if (oversampling < 1.25) throw ConfigError("config: oversampling must be >= 1.25");
    if (!(tolerance_nmse > 0.0)) throw ConfigError("config: tolerance_nmse must be positive");
    if (!(truncation.rel_floor >= 0.0) || !(truncation.energy_capture <= 1.0))
        throw ConfigError("config: invalid truncation policy");
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) return "0";
    return std::string(buf, ptr);
}

namespace {

ordered_json channel_to_tree(const PhysicalChannel& ch) {
    ordered_json j;
    j["paths"] = ordered_json::array();
    for (const PhysicalPath& p : ch.paths) {
        ordered_json jp;
        jp["gain_re"] = p.gain_v.real();
        jp["gain_im"] = p.gain_v.imag();
        jp["delay_s"] = p.delay;
        jp["doppler_hz"] = p.doppler;
        j["paths"].push_back(jp);
    }
    if (ch.density.has_value()) {
        const ScattererDensity& d = *ch.density;
        ordered_json jd;
        jd["nu_grid_hz"] = d.nu_grid;
        jd["tau_grid_s"] = d.tau_grid;
        ordered_json re = ordered_json::array(), im = ordered_json::array();
        for (const auto& row : d.values) {
            ordered_json rr = ordered_json::array(), ri = ordered_json::array();
            for (const cplx& v : row) {
                rr.push_back(v.real());
                ri.push_back(v.imag());
            }
            re.push_back(rr);
            im.push_back(ri);
        }
        jd["values_re"] = re;
        jd["values_im"] = im;
        j["density"] = jd;
    }
    return j;
}

PhysicalChannel channel_from_tree(const ordered_json& j) {
    PhysicalChannel ch;
    if (!j.contains("paths") || !j["paths"].is_array())
        throw ConfigError("channel: missing \"paths\" array");
    for (const auto& jp : j["paths"]) {
        PhysicalPath p;
        p.gain_v = cplx{jp.at("gain_re").get<double>(), jp.at("gain_im").get<double>()};
        p.delay = jp.at("delay_s").get<double>();
        p.doppler = jp.at("doppler_hz").get<double>();
        ch.paths.push_back(p);
    }
    if (j.contains("density") && !j["density"].is_null()) {
        const auto& jd = j["density"];
        ScattererDensity d;
        d.nu_grid = jd.at("nu_grid_hz").get<std::vector<double>>();
        d.tau_grid = jd.at("tau_grid_s").get<std::vector<double>>();
        const auto re = jd.at("values_re").get<std::vector<std::vector<double>>>();
        const auto im = jd.at("values_im").get<std::vector<std::vector<double>>>();
        if (re.size() != im.size()) throw ConfigError("density: values_re/values_im shape mismatch");
        for (std::size_t i = 0; i < re.size(); ++i) {
            if (re[i].size() != im[i].size())
                throw ConfigError("density: values_re/values_im shape mismatch");
            std::vector<cplx> row(re[i].size());
            for (std::size_t k = 0; k < row.size(); ++k) row[k] = cplx{re[i][k], im[i][k]};
            d.values.push_back(std::move(row));
        }
        ch.density = std::move(d);
    }
    ch.validate();
    return ch;
}

std::string shape_name(WindowShape s) {
    switch (s) {
    case WindowShape::rectangular: return "rect";
    case WindowShape::hamming: return "hamming";
    case WindowShape::raised_cosine: return "rc";
    case WindowShape::tabulated: return "tabulated";
    }
    return "rect";
}

WindowShape shape_from_name(const std::string& s) {
    if (s == "rect") return WindowShape::rectangular;
    if (s == "hamming") return WindowShape::hamming;
    if (s == "rc") return WindowShape::raised_cosine;
    if (s == "tabulated") return WindowShape::tabulated;
    throw ConfigError("window: unknown shape \"" + s + "\"");
}

ordered_json window_to_tree(const WindowSpec& w) {
    ordered_json j;
    j["domain"] = w.domain == WindowDomain::time ? "time" : "frequency";
    j["shape"] = shape_name(w.shape);
    j["center"] = w.center;
    j["width"] = w.width;
    if (w.shape == WindowShape::raised_cosine) j["rolloff"] = w.rolloff;
    if (w.shape == WindowShape::tabulated) j["samples"] = w.samples;
    return j;
}

WindowSpec window_from_tree(const ordered_json& j) {
    WindowSpec w;
    const std::string dom = j.at("domain").get<std::string>();
    if (dom == "time") w.domain = WindowDomain::time;
    else if (dom == "frequency") w.domain = WindowDomain::frequency;
    else throw ConfigError("window: unknown domain \"" + dom + "\"");
    w.shape = shape_from_name(j.at("shape").get<std::string>());
    w.center = j.at("center").get<double>();
    w.width = j.at("width").get<double>();
    if (j.contains("rolloff")) w.rolloff = j["rolloff"].get<double>();
    if (j.contains("samples")) w.samples = j["samples"].get<std::vector<double>>();
    w.validate();
    return w;
}

ordered_json grid_to_tree(const GridSpec& g, const WindowPair& windows) {
    ordered_json j;
    j["frame_duration_s"] = g.frame_duration;
    j["bandwidth_hz"] = g.bandwidth;
    if (windows.tx_time_rx_freq()) {
        j["tx_center"] = g.time_center;
        j["rx_center"] = g.freq_center;
    } else {
        j["tx_center"] = g.freq_center;
        j["rx_center"] = g.time_center;
    }
    return j;
}

GridSpec grid_from_tree(const ordered_json& j, const WindowPair& windows) {
    GridSpec g;
    g.frame_duration = j.at("frame_duration_s").get<double>();
    g.bandwidth = j.at("bandwidth_hz").get<double>();
    const double txc = j.at("tx_center").get<double>();
    const double rxc = j.at("rx_center").get<double>();
    if (windows.tx_time_rx_freq()) {
        g.time_center = txc;
        g.freq_center = rxc;
    } else {
        g.freq_center = txc;
        g.time_center = rxc;
    }
    g.validate();
    return g;
}

ordered_json trunc_to_tree(const TruncationPolicy& t) {
    ordered_json j;
    j["rel_floor"] = t.rel_floor;
    j["energy_capture"] = t.energy_capture;
    j["max_kappa"] = t.max_kappa;
    j["max_d"] = t.max_d;
    if (t.forced.has_value()) {
        ordered_json f;
        f["kappa_min"] = t.forced->kappa_min;
        f["kappa_max"] = t.forced->kappa_max;
        f["d_min"] = t.forced->d_min;
        f["d_max"] = t.forced->d_max;
        j["forced"] = f;
    }
    return j;
}

TruncationPolicy trunc_from_tree(const ordered_json& j) {
    TruncationPolicy t;
    if (j.contains("rel_floor")) t.rel_floor = j["rel_floor"].get<double>();
    if (j.contains("energy_capture")) t.energy_capture = j["energy_capture"].get<double>();
    if (j.contains("max_kappa")) t.max_kappa = j["max_kappa"].get<long>();
    if (j.contains("max_d")) t.max_d = j["max_d"].get<long>();
    if (j.contains("forced") && !j["forced"].is_null()) {
        IndexWindow f;
        f.kappa_min = j["forced"].at("kappa_min").get<long>();
        f.kappa_max = j["forced"].at("kappa_max").get<long>();
        f.d_min = j["forced"].at("d_min").get<long>();
        f.d_max = j["forced"].at("d_max").get<long>();
        t.forced = f;
    }
    return t;
}

ordered_json parse(std::string_view text, const char* what) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ConfigError(std::string(what) + ": malformed JSON");
    return j;
}

} // namespace

std::string channel_to_json(const PhysicalChannel& ch) { return channel_to_tree(ch).dump(); }

PhysicalChannel channel_from_json(std::string_view json) {
    return channel_from_tree(parse(json, "channel"));
}

std::string window_to_json(const WindowSpec& w) { return window_to_tree(w).dump(); }

WindowSpec window_from_json(std::string_view json) {
    return window_from_tree(parse(json, "window"));
}

std::string config_to_json(const RunConfig& cfg) {
    ordered_json j;
    j["schema_version"] = 1;
    j["channel"] = channel_to_tree(cfg.channel);
    ordered_json w;
    w["tx"] = window_to_tree(cfg.windows.tx);
    w["rx"] = window_to_tree(cfg.windows.rx);
    j["windows"] = w;
    j["grid"] = grid_to_tree(cfg.grid, cfg.windows);
    j["truncation"] = trunc_to_tree(cfg.truncation);
    j["seed"] = cfg.seed;
    j["trials"] = cfg.trials;
    j["oversampling"] = cfg.oversampling;
    j["tolerance_nmse"] = cfg.tolerance_nmse;
    return j.dump(2) + "\n";
}

RunConfig config_from_json(std::string_view json) {
    const ordered_json j = parse(json, "config");
    if (!j.contains("schema_version"))
        throw ConfigError("config: missing mandatory schema_version");
    if (j["schema_version"].get<int>() != 1)
        throw ConfigError("config: unsupported schema_version");
    RunConfig cfg;
    try {
        cfg.channel = channel_from_tree(j.at("channel"));
        cfg.windows.tx = window_from_tree(j.at("windows").at("tx"));
        cfg.windows.rx = window_from_tree(j.at("windows").at("rx"));
        cfg.windows.validate();
        cfg.grid = grid_from_tree(j.at("grid"), cfg.windows);
        if (j.contains("truncation")) cfg.truncation = trunc_from_tree(j["truncation"]);
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
        if (j.contains("oversampling")) cfg.oversampling = j["oversampling"].get<double>();
        if (j.contains("tolerance_nmse")) cfg.tolerance_nmse = j["tolerance_nmse"].get<double>();
    } catch (const ordered_json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return config_from_json(buf.str());
}

std::string taps_to_csv(const TapMatrix& taps) {
    std::string out = "kappa,d,nu_hz,tau_s,re,im,abs\n";
    for (long kappa = taps.kappa_min; kappa <= taps.kappa_max; ++kappa) {
        for (long d = taps.d_min; d <= taps.d_max; ++d) {
            const cplx g = taps.at(kappa, d);
            if (g == cplx{0.0, 0.0}) continue;
            out += std::to_string(kappa);
            out += ',';
            out += std::to_string(d);
            out += ',';
            out += format_double(taps.grid.nu(kappa));
            out += ',';
            out += format_double(taps.grid.tau(d));
            out += ',';
            out += format_double(g.real());
            out += ',';
            out += format_double(g.imag());
            out += ',';
            out += format_double(std::abs(g));
            out += '\n';
        }
    }
    return out;
}

std::string taps_sidecar_json(const TapMatrix& taps, const TruncationPolicy& trunc) {
    ordered_json j;
    ordered_json g;
    g["frame_duration_s"] = taps.grid.frame_duration;
    g["bandwidth_hz"] = taps.grid.bandwidth;
    g["time_center_s"] = taps.grid.time_center;
    g["freq_center_hz"] = taps.grid.freq_center;
    j["grid"] = g;
    j["convention"] = taps.convention == TapConvention::V_taps ? "V_taps" : "U_taps";
    ordered_json r;
    r["kappa_min"] = taps.kappa_min;
    r["kappa_max"] = taps.kappa_max;
    r["d_min"] = taps.d_min;
    r["d_max"] = taps.d_max;
    j["ranges"] = r;
    j["truncation"] = trunc_to_tree(trunc);
    ordered_json diag;
    diag["cap_hit"] = taps.cap_hit;
    diag["quadrature_coarse"] = taps.quadrature_coarse;
    diag["retained_energy"] = taps.retained_energy;
    diag["total_energy"] = taps.total_energy;
    diag["truncation_energy_bound"] = taps.truncation_energy_bound();
    diag["peak_abs"] = taps.peak_abs();
    j["diagnostics"] = diag;
    return j.dump(2) + "\n";
}

std::string report_to_json(const EquivalenceReport& rep) {
    ordered_json j;
    j["nmse_mean"] = rep.nmse_mean;
    j["nmse_max"] = rep.nmse_max;
    j["trials"] = rep.trials;
    j["truncation_bound"] = rep.truncation_bound;
    j["config_digest"] = rep.config_digest;
    return j.dump(2) + "\n";
}

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

std::string verify_config_digest(const PhysicalChannel& ch, const WindowPair& windows,
                                 const GridSpec& grid, const TruncationPolicy& trunc,
                                 int n_trials, std::uint64_t seed) {
    ordered_json j;
    j["channel"] = channel_to_tree(ch);
    ordered_json w;
    w["tx"] = window_to_tree(windows.tx);
    w["rx"] = window_to_tree(windows.rx);
    j["windows"] = w;
    j["grid"] = grid_to_tree(grid, windows);
    j["truncation"] = trunc_to_tree(trunc);
    j["trials"] = n_trials;
    j["seed"] = seed;
    return "sha256:" + sha256_hex(j.dump());
}

} // namespace ddgrid
