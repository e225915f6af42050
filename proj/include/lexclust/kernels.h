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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lexclust/types.h"

namespace lexclust::kernels {

/// Inner product with double accumulation in index order. Every cosine in
/// the library goes through this so serial and parallel paths agree bitwise.
double dot(std::span<const float> a, std::span<const float> b);

double norm2(std::span<const float> a);

/// Nearest-centroid assignment by maximum inner product; ties go to the lower
/// centroid index.
struct Assignment {
    std::vector<std::uint32_t> cell;
    std::vector<double> score;
};

Assignment assign_serial(std::span<const float> data, std::size_t dim,
                         std::span<const float> centroids);
Assignment assign_omp(std::span<const float> data, std::size_t dim,
                      std::span<const float> centroids);

inline Assignment assign(std::span<const float> data, std::size_t dim,
                         std::span<const float> centroids, Backend backend) {
    return backend == Backend::Serial ? assign_serial(data, dim, centroids)
                                      : assign_omp(data, dim, centroids);
}

/// Number of OpenMP threads a parallel region would use right now.
int max_threads();

/// Scoped override of the OpenMP thread count. n <= 0 leaves it unchanged.
class ThreadCountGuard {
public:
    explicit ThreadCountGuard(int n);
    ~ThreadCountGuard();
    ThreadCountGuard(const ThreadCountGuard&) = delete;
    ThreadCountGuard& operator=(const ThreadCountGuard&) = delete;

private:
    int previous_;
    bool active_;
};

} // namespace lexclust::kernels
