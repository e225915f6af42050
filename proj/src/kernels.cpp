// Copyright 2026 The lexclust Authors.
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

#include "lexclust/kernels.h"

#include <omp.h>

#include "lexclust/error.h"

namespace lexclust::kernels {

double dot(std::span<const float> a, std::span<const float> b) {
    double acc = 0.0;
    const std::size_t n = a.size();
    for (std::size_t j = 0; j < n; ++j) {
        acc += static_cast<double>(a[j]) * static_cast<double>(b[j]);
    }
    return acc;
}

double norm2(std::span<const float> a) {
    return dot(a, a);
}

namespace {

void check_shapes(std::span<const float> data, std::size_t dim,
                  std::span<const float> centroids) {
    if (dim == 0 || data.size() % dim != 0 || centroids.size() % dim != 0 ||
        centroids.empty()) {
        throw Error("assign: inconsistent shapes");
    }
}

inline void assign_one(std::span<const float> data, std::size_t dim,
                       std::span<const float> centroids, std::size_t k, std::size_t i,
                       Assignment& out) {
    auto x = data.subspan(i * dim, dim);
    std::uint32_t best = 0;
    double best_score = dot(x, centroids.subspan(0, dim));
    for (std::size_t c = 1; c < k; ++c) {
        const double s = dot(x, centroids.subspan(c * dim, dim));
        if (s > best_score) {
            best_score = s;
            best = static_cast<std::uint32_t>(c);
        }
    }
    out.cell[i] = best;
    out.score[i] = best_score;
}

} // namespace

Assignment assign_serial(std::span<const float> data, std::size_t dim,
                         std::span<const float> centroids) {
    check_shapes(data, dim, centroids);
    const std::size_t n = data.size() / dim;
    const std::size_t k = centroids.size() / dim;
    Assignment out{std::vector<std::uint32_t>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        assign_one(data, dim, centroids, k, i, out);
    }
    return out;
}

Assignment assign_omp(std::span<const float> data, std::size_t dim,
                      std::span<const float> centroids) {
    check_shapes(data, dim, centroids);
    const std::size_t n = data.size() / dim;
    const std::size_t k = centroids.size() / dim;
    Assignment out{std::vector<std::uint32_t>(n), std::vector<double>(n)};
    const auto ni = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < ni; ++i) {
        assign_one(data, dim, centroids, k, static_cast<std::size_t>(i), out);
    }
    return out;
}

int max_threads() {
    return omp_get_max_threads();
}

ThreadCountGuard::ThreadCountGuard(int n)
    : previous_(omp_get_max_threads()), active_(n > 0) {
    if (active_) {
        omp_set_num_threads(n);
    }
}

ThreadCountGuard::~ThreadCountGuard() {
    if (active_) {
        omp_set_num_threads(previous_);
    }
}

} // namespace lexclust::kernels
