// Copyright 2026 The ionchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ionchain/tensor.hpp"

#include <algorithm>
#include <numeric>

namespace ionchain {

namespace {

template<std::size_t Rank>
double symmetry_defect_impl(Tensor<Rank> const& t)
{
    double const scale = t.max_abs();
    if (scale == 0.0)
        return 0.0;

    std::size_t const n = t.extent();
    std::array<std::size_t, Rank> idx{};
    double worst = 0.0;
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
        std::size_t rem = flat;
        for (std::size_t k = Rank; k-- > 0;) {
            idx[k] = rem % n;
            rem /= n;
        }
        double const ref = t.at(idx);
        auto perm = idx;
        std::sort(perm.begin(), perm.end());
        do {
            worst = std::max(worst, std::abs(t.at(perm) - ref));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return worst / scale;
}

}  // namespace

double symmetry_defect(Tensor3 const& t)
{
    return symmetry_defect_impl(t);
}

double symmetry_defect(Tensor4 const& t)
{
    return symmetry_defect_impl(t);
}

}  // namespace ionchain
