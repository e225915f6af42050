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

namespace lexclust {

struct KMeansParams {
    std::size_t nlist{1};
    int iters{20};
    std::uint64_t seed{1234};
};

/// Spherical k-means over unit vectors (cosine similarity).
///
/// Seeding is k-means++ style with D^2 weights, driven by a fixed-seed
/// mt19937_64. Each iteration assigns points to their max-cosine centroid and
/// replaces centroids by the normalized mean of their cell. Cells that end up
/// empty (or whose mean cancels to zero) are re-seeded from the points
/// farthest from their current centroid. Returns nlist * dim floats.
std::vector<float> kmeans_train(std::span<const float> vectors, std::size_t dim,
                                const KMeansParams& params,
                                Backend backend = Backend::OpenMP);

/// Uniform double in [0, 1) from 53 random bits. Defined on top of
/// mt19937_64 output so results do not depend on the standard library's
/// distribution implementations.
double uniform01(std::uint64_t bits);

} // namespace lexclust
