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

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ddgrid;

namespace {

WindowSpec make(WindowDomain dom, WindowShape shape, double center, double width,
                double rolloff = 0.0, std::vector<double> samples = {}) {
    WindowSpec w{dom, shape, center, width, rolloff, std::move(samples)};
    w.validate();
    return w;
}

// Raised-cosine inverse transform, closed form. Independent oracle for the
// quadrature path: h(tau) = B sinc(B tau) cos(pi beta B tau) / (1-(2 beta B tau)^2)
// with B = width/(1+beta).
double rc_base_transform(double xi, double width, double beta) {
    const double b = width / (1.0 + beta);
    const double x = b * xi;
    const double den = 1.0 - 4.0 * beta * beta * x * x;
    if (std::abs(den) < 1e-8) return b * (pi / 4.0) * sinc(1.0 / (2.0 * beta));
    return b * sinc(x) * std::cos(pi * beta * x) / den;
}

} // namespace

TEST_CASE("window values: rectangular support semantics") {
    const auto w = make(WindowDomain::time, WindowShape::rectangular, 0.0, 2.0);
    CHECK(window_value(w, 0.5) == 1.0);
    CHECK(window_value(w, 1.0) == 1.0);        // support endpoints included
    CHECK(window_value(w, 1.0000001) == 0.0);  // hard support edge
    CHECK(window_value(w, -3.0) == 0.0);
}

TEST_CASE("window values: hamming endpoints") {
    const auto w = make(WindowDomain::time, WindowShape::hamming, 0.0, 2.0);
    CHECK(window_value(w, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(window_value(w, -1.0) == doctest::Approx(0.08).epsilon(1e-12));
    CHECK(window_value(w, 1.0) == doctest::Approx(0.08).epsilon(1e-12));
    CHECK(window_value(w, 1.1) == 0.0);
}

TEST_CASE("window values: raised cosine shape") {
    const double width = 1.2, beta = 0.2;
    const auto w = make(WindowDomain::frequency, WindowShape::raised_cosine, 0.0, width, beta);
    const double b = width / (1.0 + beta);
    const double f1 = b * (1.0 - beta) / 2.0;
    CHECK(window_value(w, 0.0) == 1.0);
    CHECK(window_value(w, f1 * 0.99) == 1.0);
    CHECK(window_value(w, (f1 + width / 2.0) / 2.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(window_value(w, width / 2.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(window_value(w, width / 2.0 + 1e-9) == 0.0);
    // rolloff 0 degenerates to the rectangle
    const auto w0 = make(WindowDomain::frequency, WindowShape::raised_cosine, 0.0, 1.0, 0.0);
    CHECK(window_value(w0, 0.49) == 1.0);
}

TEST_CASE("window values: tabulated linear interpolation") {
    const auto w = make(WindowDomain::time, WindowShape::tabulated, 0.0, 4.0, 0.0,
                        {0.0, 1.0, 0.5});
    CHECK(window_value(w, -2.0) == doctest::Approx(0.0));
    CHECK(window_value(w, 0.0) == doctest::Approx(1.0));
    CHECK(window_value(w, 2.0) == doctest::Approx(0.5));
    CHECK(window_value(w, -1.0) == doctest::Approx(0.5));
    CHECK(window_value(w, 1.0) == doctest::Approx(0.75));
    CHECK(window_value(w, 2.1) == 0.0);
}

TEST_CASE("rectangular transform closed form") {
    const double T = 1e-3;
    const auto w = make(WindowDomain::time, WindowShape::rectangular, 0.0, T);
    CHECK(std::abs(window_transform(w, 0.0) - cplx{T, 0.0}) < 1e-18); // DC equals area
    CHECK(std::abs(window_transform(w, 1.0 / T)) < 1e-18);           // sinc null
    CHECK(std::abs(window_transform(w, 0.5 / T)) ==
          doctest::Approx(T * 2.0 / pi).epsilon(1e-12)); // sinc(1/2) = 2/pi
    // centered window picks up the linear phase e^{-j2pi xi t_i}
    const auto wc = make(WindowDomain::time, WindowShape::rectangular, 3e-4, T);
    const double xi = 1234.5;
    const cplx expect = std::polar(1.0, -two_pi * xi * 3e-4) * window_transform(w, xi);
    CHECK(std::abs(window_transform(wc, xi) - expect) < 1e-12 * T);
}

TEST_CASE("frequency-domain windows use the inverse kernel") {
    const double W = 2.0e3;
    const auto wf = make(WindowDomain::frequency, WindowShape::rectangular, 500.0, W);
    const double tau = 1.7e-3;
    // w(tau) = W e^{+j2pi f_c tau} sinc(W tau)
    const cplx expect = W * sinc(W * tau) * std::polar(1.0, two_pi * 500.0 * tau);
    CHECK(std::abs(window_transform(wf, tau) - expect) < 1e-12 * W);
}

TEST_CASE("quadrature matches closed forms over |xi * width| <= 40") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-40.0, 40.0);
    for (WindowShape shape : {WindowShape::rectangular, WindowShape::hamming}) {
        const double width = 2.4e-3;
        const auto w = make(WindowDomain::time, shape, 1e-4, width);
        const double scale = std::abs(window_transform(w, 0.0));
        double worst = 0.0;
        for (int i = 0; i < 60; ++i) {
            const double xi = u(rng) / width;
            const cplx closed = window_transform(w, xi);
            const cplx quad = window_transform_quadrature(w, xi);
            worst = std::max(worst, std::abs(quad - closed) / scale);
        }
        CAPTURE(static_cast<int>(shape));
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("raised-cosine quadrature against the analytic inverse transform") {
    const double width = 7.68e6, beta = 0.2;
    const auto w = make(WindowDomain::frequency, WindowShape::raised_cosine, 0.0, width, beta);
    const double scale = width / (1.0 + beta);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    double worst = 0.0;
    for (int i = 0; i < 40; ++i) {
        const double tau = u(rng) / width;
        const cplx quad = window_transform(w, tau); // rc routes through quadrature
        const double oracle = rc_base_transform(tau, width, beta);
        worst = std::max(worst, std::abs(quad - oracle) / scale);
    }
    CHECK(worst < 1e-9);
    // singular point of the closed form, |2 beta B tau| = 1
    const double tau_sing = 1.0 / (2.0 * beta * scale);
    CHECK(std::abs(window_transform(w, tau_sing) - rc_base_transform(tau_sing, width, beta)) <
          1e-9 * scale);
}

TEST_CASE("conjugate symmetry of real even-about-center windows") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.1, 25.0);
    const auto shapes = {WindowShape::rectangular, WindowShape::hamming,
                         WindowShape::raised_cosine};
    for (WindowShape shape : shapes) {
        const auto w = make(WindowDomain::time, shape, 0.7, 2.0,
                            shape == WindowShape::raised_cosine ? 0.3 : 0.0);
        for (int i = 0; i < 20; ++i) {
            const double xi = u(rng) / w.width;
            const double m1 = std::abs(window_transform(w, xi));
            const double m2 = std::abs(window_transform(w, -xi));
            CHECK(std::abs(m1 - m2) < 1e-12 * w.width);
        }
    }
}

TEST_CASE("window energies match a numeric oracle") {
    auto numeric_energy = [](const WindowSpec& w) {
        const std::size_t n = 200000;
        double acc = 0.0;
        const double h = w.width / static_cast<double>(n);
        for (std::size_t i = 0; i <= n; ++i) {
            const double u = w.center - w.width / 2.0 + h * static_cast<double>(i);
            const double v = window_value(w, u);
            acc += (i == 0 || i == n) ? 0.5 * v * v : v * v;
        }
        return acc * h;
    };
    const auto rect = make(WindowDomain::time, WindowShape::rectangular, 0.0, 3.0);
    const auto ham = make(WindowDomain::time, WindowShape::hamming, 0.0, 3.0);
    const auto rc = make(WindowDomain::frequency, WindowShape::raised_cosine, 0.0, 3.0, 0.25);
    CHECK(window_energy(rect) == doctest::Approx(numeric_energy(rect)).epsilon(1e-9));
    CHECK(window_energy(ham) == doctest::Approx(numeric_energy(ham)).epsilon(1e-9));
    CHECK(window_energy(rc) == doctest::Approx(numeric_energy(rc)).epsilon(1e-7));
}

TEST_CASE("tabulated transform matches rectangle when flat") {
    const auto flat = make(WindowDomain::time, WindowShape::tabulated, 0.0, 1.5, 0.0,
                           {1.0, 1.0, 1.0, 1.0, 1.0});
    const auto rect = make(WindowDomain::time, WindowShape::rectangular, 0.0, 1.5);
    for (double xiw : {0.0, 0.4, 3.3, 11.5}) {
        const double xi = xiw / 1.5;
        CHECK(std::abs(window_transform(flat, xi) - window_transform(rect, xi)) < 1e-9 * 1.5);
    }
}

TEST_CASE("window validation") {
    WindowSpec w{WindowDomain::time, WindowShape::rectangular, 0.0, -1.0, 0.0, {}};
    CHECK_THROWS_AS(w.validate(), std::invalid_argument);
    w.width = 1.0;
    w.shape = WindowShape::raised_cosine;
    w.rolloff = 1.5;
    CHECK_THROWS_AS(w.validate(), std::invalid_argument);
    w.shape = WindowShape::tabulated;
    w.rolloff = 0.0;
    w.samples = {1.0};
    CHECK_THROWS_AS(w.validate(), std::invalid_argument);

    WindowPair bad{make(WindowDomain::time, WindowShape::rectangular, 0.0, 1.0),
                   make(WindowDomain::time, WindowShape::rectangular, 0.0, 1.0)};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
