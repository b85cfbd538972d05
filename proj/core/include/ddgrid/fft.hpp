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

#include "ddgrid/types.hpp"

namespace ddgrid::fft {

/// Forward DFT, X[k] = sum_n x[n] e^{-j 2 pi k n / N}. Unnormalized.
std::vector<cplx> forward(const std::vector<cplx>& x);

/// Inverse DFT, x[n] = (1/N) sum_k X[k] e^{+j 2 pi k n / N}.
std::vector<cplx> inverse(const std::vector<cplx>& x);

/// Inverse DFT without the 1/N factor.
std::vector<cplx> inverse_unscaled(const std::vector<cplx>& x);

/// Signed bin frequency of bin k for an N-point DFT at rate fs.
inline double bin_freq(std::size_t k, std::size_t n, double fs) {
    auto ks = static_cast<long>(k);
    auto ns = static_cast<long>(n);
    if (ks > ns / 2) ks -= ns;
    return static_cast<double>(ks) * fs / static_cast<double>(ns);
}

/// Smallest 5-smooth (2^a 3^b 5^c) integer >= n. FFTW handles these sizes in
/// O(n log n) without falling back to generic algorithms.
std::size_t next_fast_size(std::size_t n);

} // namespace ddgrid::fft
