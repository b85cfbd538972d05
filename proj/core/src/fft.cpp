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

#include "ddgrid/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace ddgrid::fft {

namespace {

// FFTW plan creation is not thread-safe; execution via fftw_execute_dft on
// caller-owned buffers is. Plans are cached per (size, sign) and created with
// FFTW_ESTIMATE so planning never depends on runtime measurements.
class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    void execute(int sign, std::vector<cplx>& inout) {
        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto key = std::make_pair(inout.size(), sign);
            auto it = plans_.find(key);
            if (it == plans_.end()) {
                auto n = static_cast<int>(inout.size());
                plan = fftw_plan_dft_1d(n, nullptr, nullptr, sign,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
                plans_.emplace(key, plan);
            } else {
                plan = it->second;
            }
        }
        auto* p = reinterpret_cast<fftw_complex*>(inout.data());
        fftw_execute_dft(plan, p, p);
    }

  private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

} // namespace

std::vector<cplx> forward(const std::vector<cplx>& x) {
    std::vector<cplx> out(x);
    if (out.empty()) return out;
    PlanCache::instance().execute(FFTW_FORWARD, out);
    return out;
}

std::vector<cplx> inverse_unscaled(const std::vector<cplx>& x) {
    std::vector<cplx> out(x);
    if (out.empty()) return out;
    PlanCache::instance().execute(FFTW_BACKWARD, out);
    return out;
}

std::vector<cplx> inverse(const std::vector<cplx>& x) {
    std::vector<cplx> out = inverse_unscaled(x);
    const double scale = out.empty() ? 1.0 : 1.0 / static_cast<double>(out.size());
    for (cplx& v : out) v *= scale;
    return out;
}

std::size_t next_fast_size(std::size_t n) {
    if (n <= 1) return 1;
    for (std::size_t m = n;; ++m) {
        std::size_t r = m;
        while (r % 2 == 0) r /= 2;
        while (r % 3 == 0) r /= 3;
        while (r % 5 == 0) r /= 5;
        if (r == 1) return m;
    }
}

} // namespace ddgrid::fft
