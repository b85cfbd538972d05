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
//
// Command-line front end: tap computation, equivalence verification runs,
// figure-data export. Outputs are byte-reproducible for a fixed config and
// seed.

#include "ddgrid/pipeline.hpp"
#include "ddgrid/serialize.hpp"
#include "ddgrid/taps.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace ddgrid;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumericWarning = 3;
constexpr int kExitToleranceExceeded = 4;

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::vector<std::string> tap_warnings(const TapMatrix& taps) {
    std::vector<std::string> w;
    if (taps.cap_hit)
        w.push_back("truncation hard cap reached before the policy criteria were met; "
                    "retained-energy bound " + format_double(taps.truncation_energy_bound()));
    if (taps.quadrature_coarse)
        w.push_back("density grid too coarse: halving the quadrature step moved a tap by "
                    "more than 1e-3 of the peak");
    return w;
}

int finish_with_warnings(const std::vector<std::string>& warnings, bool strict) {
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    if (!warnings.empty() && strict) return kExitNumericWarning;
    return kExitOk;
}

int cmd_taps(const std::string& config_path, const std::string& out_dir, bool strict) {
    const RunConfig cfg = load_config(config_path);
    fs::create_directories(out_dir);
    const TapMatrix taps = compute_taps(cfg.channel, cfg.windows, cfg.grid, cfg.truncation);
    write_file(fs::path(out_dir) / "taps.csv", taps_to_csv(taps));
    write_file(fs::path(out_dir) / "taps.meta.json", taps_sidecar_json(taps, cfg.truncation));
    std::cout << "taps: kappa [" << taps.kappa_min << ", " << taps.kappa_max << "], d ["
              << taps.d_min << ", " << taps.d_max << "], peak " << format_double(taps.peak_abs())
              << ", truncation bound " << format_double(taps.truncation_energy_bound()) << "\n";
    return finish_with_warnings(tap_warnings(taps), strict);
}

int cmd_verify(const std::string& config_path, const std::string& out_dir, int trials_override,
               std::int64_t seed_override, bool strict) {
    RunConfig cfg = load_config(config_path);
    if (trials_override > 0) cfg.trials = trials_override;
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    fs::create_directories(out_dir);

    VerifyOptions vopts;
    vopts.oversampling = cfg.oversampling;
    const EquivalenceReport rep = verify_equivalence(cfg.channel, cfg.windows, cfg.grid,
                                                     cfg.truncation, cfg.trials, cfg.seed, vopts);
    write_file(fs::path(out_dir) / "report.json", report_to_json(rep));
    std::cout << "verify: nmse_mean " << format_double(rep.nmse_mean) << ", nmse_max "
              << format_double(rep.nmse_max) << ", truncation bound "
              << format_double(rep.truncation_bound) << ", digest " << rep.config_digest << "\n";

    const TapMatrix taps = compute_taps(cfg.channel, cfg.windows, cfg.grid, cfg.truncation);
    const int warn_rc = finish_with_warnings(tap_warnings(taps), strict);
    if (rep.nmse_max > cfg.tolerance_nmse) {
        std::cerr << "verify: nmse_max " << format_double(rep.nmse_max) << " exceeds tolerance "
                  << format_double(cfg.tolerance_nmse) << "\n";
        return kExitToleranceExceeded;
    }
    return warn_rc;
}

// ---- figure data ----------------------------------------------------------

struct FigureSetup {
    PhysicalChannel channel;
    WindowPair windows;
    GridSpec grid;
};

GridSpec demo_grid() {
    GridSpec g;
    g.bandwidth = 7.68e6;
    g.frame_duration = 16384.0 / g.bandwidth;
    g.time_center = 0.0;
    g.freq_center = 0.0;
    return g;
}

PhysicalChannel demo_path(double d_frac, double k_frac) {
    const GridSpec g = demo_grid();
    PhysicalChannel ch;
    ch.paths.push_back({cplx{1.0, 0.0}, d_frac / g.bandwidth, k_frac / g.frame_duration});
    return ch;
}

WindowPair demo_windows(bool smooth) {
    const GridSpec g = demo_grid();
    WindowSpec tx{WindowDomain::time, smooth ? WindowShape::hamming : WindowShape::rectangular,
                  g.time_center, g.frame_duration, 0.0, {}};
    WindowSpec rx{WindowDomain::frequency,
                  smooth ? WindowShape::raised_cosine : WindowShape::rectangular,
                  g.freq_center, g.bandwidth, smooth ? 0.2 : 0.0, {}};
    return {tx, rx};
}

std::string window_shape_csv(const WindowSpec& w, int n_points = 513) {
    std::string out = "u,value\n";
    for (int i = 0; i < n_points; ++i) {
        const double u = w.center - w.width / 2.0 +
                         w.width * static_cast<double>(i) / static_cast<double>(n_points - 1);
        out += format_double(u);
        out += ',';
        out += format_double(window_value(w, u));
        out += '\n';
    }
    return out;
}

void emit_figure_bundle(const FigureSetup& setup, const fs::path& dir) {
    fs::create_directories(dir);
    // dense local neighborhood around the path for plotting
    TruncationPolicy pol;
    pol.forced = IndexWindow{15 - 32, 16 + 32, 25 - 32, 26 + 32};
    const TapMatrix taps = compute_taps(setup.channel, setup.windows, setup.grid, pol);
    const SpreadReport rep = spread_report(taps, {1e-9, 1e-2}, 3);
    const double peak = rep.peak_abs > 0.0 ? rep.peak_abs : 1.0;

    std::string sd = "d,tau_s,mag_norm\n";
    for (long d = taps.d_min; d <= taps.d_max; ++d) {
        sd += std::to_string(d);
        sd += ',';
        sd += format_double(setup.grid.tau(d));
        sd += ',';
        sd += format_double(std::abs(taps.at(rep.peak_kappa, d)) / peak);
        sd += '\n';
    }
    write_file(dir / "slice_delay.csv", sd);

    std::string sk = "kappa,nu_hz,mag_norm\n";
    for (long k = taps.kappa_min; k <= taps.kappa_max; ++k) {
        sk += std::to_string(k);
        sk += ',';
        sk += format_double(setup.grid.nu(k));
        sk += ',';
        sk += format_double(std::abs(taps.at(k, rep.peak_d)) / peak);
        sk += '\n';
    }
    write_file(dir / "slice_doppler.csv", sk);

    std::string gr = "kappa,d,mag_norm\n";
    for (long k = taps.kappa_min; k <= taps.kappa_max; ++k)
        for (long d = taps.d_min; d <= taps.d_max; ++d) {
            gr += std::to_string(k);
            gr += ',';
            gr += std::to_string(d);
            gr += ',';
            gr += format_double(std::abs(taps.at(k, d)) / peak);
            gr += '\n';
        }
    write_file(dir / "grid.csv", gr);

    write_file(dir / "window_tx.csv", window_shape_csv(setup.windows.tx));
    write_file(dir / "window_rx.csv", window_shape_csv(setup.windows.rx));
}

int cmd_figures(const std::string& figure, const std::string& out_dir) {
    const fs::path root = fs::path(out_dir) / figure;
    if (figure == "fig3" || figure == "fig4") {
        FigureSetup s{demo_path(25.5, 15.5), demo_windows(figure == "fig4"), demo_grid()};
        emit_figure_bundle(s, root);
        write_file(root / "manifest.json",
                   std::string("{\n  \"figure\": \"") + figure +
                       "\",\n  \"files\": [\"slice_delay.csv\", \"slice_doppler.csv\", "
                       "\"grid.csv\", \"window_tx.csv\", \"window_rx.csv\"]\n}\n");
        return kExitOk;
    }
    if (figure == "fig5") {
        const std::pair<const char*, std::pair<double, double>> cases[] = {
            {"case_ongrid_both", {25.0, 15.0}},
            {"case_offgrid_delay", {25.5, 15.0}},
            {"case_offgrid_doppler", {25.0, 15.5}},
            {"case_offgrid_both", {25.5, 15.5}},
        };
        std::string manifest = "{\n  \"figure\": \"fig5\",\n  \"cases\": [";
        bool first = true;
        for (const auto& [name, par] : cases) {
            FigureSetup s{demo_path(par.first, par.second), demo_windows(false), demo_grid()};
            emit_figure_bundle(s, root / name);
            manifest += first ? "\"" : ", \"";
            manifest += name;
            manifest += '"';
            first = false;
        }
        manifest += "]\n}\n";
        write_file(root / "manifest.json", manifest);
        return kExitOk;
    }
    std::cerr << "error: unknown figure id \"" << figure << "\" (expected fig3|fig4|fig5)\n";
    return kExitConfig;
}

int cmd_export(const std::string& config_path, const std::string& out_dir) {
    const RunConfig cfg = load_config(config_path);
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "config.normalized.json", config_to_json(cfg));
    std::cout << "export: wrote normalized config\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"on-grid delay-Doppler channel tooling"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", figure;
    int trials = 0;
    std::int64_t seed = -1;
    bool strict = false;

    CLI::App* taps = app.add_subcommand("taps", "compute on-grid taps, write CSV + sidecar");
    taps->add_option("--config", config_path, "run config JSON")->required();
    taps->add_option("--out", out_dir, "output directory");
    taps->add_flag("--strict", strict, "numeric warnings exit with code 3");

    CLI::App* verify = app.add_subcommand("verify", "off-grid vs on-grid equivalence run");
    verify->add_option("--config", config_path, "run config JSON")->required();
    verify->add_option("--out", out_dir, "output directory");
    verify->add_option("--trials", trials, "override trial count");
    verify->add_option("--seed", seed, "override seed");
    verify->add_flag("--strict", strict, "numeric warnings exit with code 3");

    CLI::App* figures = app.add_subcommand("figures", "emit demo figure CSV bundles");
    figures->add_option("--figure", figure, "fig3|fig4|fig5")->required();
    figures->add_option("--out", out_dir, "output directory");

    CLI::App* exp = app.add_subcommand("export", "validate and re-emit a canonical config");
    exp->add_option("--config", config_path, "run config JSON")->required();
    exp->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (taps->parsed()) return cmd_taps(config_path, out_dir, strict);
        if (verify->parsed()) return cmd_verify(config_path, out_dir, trials, seed, strict);
        if (figures->parsed()) return cmd_figures(figure, out_dir);
        if (exp->parsed()) return cmd_export(config_path, out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
