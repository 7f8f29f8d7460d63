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

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace ionchain {

/// Dense cubic array of fixed rank with the same extent along every axis.
/// Row-major; the last index varies fastest.
template<std::size_t Rank>
class Tensor {
  public:
    static_assert(Rank >= 1);

    Tensor() = default;
    explicit Tensor(std::size_t extent) : extent_(extent), data_(ipow(extent), 0.0) {}

    std::size_t extent() const noexcept { return extent_; }
    std::size_t size() const noexcept { return data_.size(); }

    template<class... I>
    double& operator()(I... idx) noexcept
    {
        static_assert(sizeof...(I) == Rank);
        return data_[offset({static_cast<std::size_t>(idx)...})];
    }

    template<class... I>
    double operator()(I... idx) const noexcept
    {
        static_assert(sizeof...(I) == Rank);
        return data_[offset({static_cast<std::size_t>(idx)...})];
    }

    double& at(std::array<std::size_t, Rank> const& idx) noexcept { return data_[offset(idx)]; }
    double at(std::array<std::size_t, Rank> const& idx) const noexcept { return data_[offset(idx)]; }

    std::vector<double>& data() noexcept { return data_; }
    std::vector<double> const& data() const noexcept { return data_; }

    double max_abs() const noexcept
    {
        double m = 0.0;
        for (double v : data_)
            m = std::max(m, std::abs(v));
        return m;
    }

    Tensor& operator+=(Tensor const& other)
    {
        for (std::size_t i = 0; i < data_.size(); ++i)
            data_[i] += other.data_[i];
        return *this;
    }

    Tensor& operator*=(double s) noexcept
    {
        for (double& v : data_)
            v *= s;
        return *this;
    }

  private:
    std::size_t extent_ = 0;
    std::vector<double> data_;

    std::size_t ipow(std::size_t n) const noexcept
    {
        std::size_t r = 1;
        for (std::size_t i = 0; i < Rank; ++i)
            r *= n;
        return r;
    }

    std::size_t offset(std::array<std::size_t, Rank> const& idx) const noexcept
    {
        std::size_t o = 0;
        for (std::size_t i = 0; i < Rank; ++i)
            o = o * extent_ + idx[i];
        return o;
    }
};

using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;

/// Largest deviation from full index-permutation symmetry, relative to the
/// largest entry. Zero tensors report zero.
double symmetry_defect(Tensor3 const& t);
double symmetry_defect(Tensor4 const& t);

}  // namespace ionchain
