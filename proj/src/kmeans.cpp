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

#include "lexclust/kmeans.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "lexclust/error.h"
#include "lexclust/kernels.h"

namespace lexclust {

double uniform01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

namespace {

std::vector<float> seed_plus_plus(std::span<const float> vectors, std::size_t dim,
                                  std::size_t n, std::size_t k, std::mt19937_64& rng) {
    std::vector<float> centroids;
    centroids.reserve(k * dim);
    std::vector<bool> chosen(n, false);

    auto take = [&](std::size_t i) {
        chosen[i] = true;
        auto row = vectors.subspan(i * dim, dim);
        centroids.insert(centroids.end(), row.begin(), row.end());
    };

    take(static_cast<std::size_t>(uniform01(rng()) * static_cast<double>(n)));

    // Squared euclidean distance to the nearest chosen seed; 2 - 2cos for unit rows.
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) {
        d2[i] = std::max(0.0, 2.0 - 2.0 * kernels::dot(vectors.subspan(i * dim, dim),
                                                         std::span<const float>(centroids)));
    }

    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!chosen[i]) {
                total += d2[i];
            }
        }
        std::size_t pick = n;
        if (total > 0.0) {
            const double target = uniform01(rng()) * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (chosen[i] || d2[i] == 0.0) {
                    continue;
                }
                acc += d2[i];
                pick = i;
                if (acc > target) {
                    break;
                }
            }
        } else {
            // Remaining points coincide with seeds.
            for (std::size_t i = 0; i < n; ++i) {
                if (!chosen[i]) {
                    pick = i;
                    break;
                }
            }
        }
        take(pick);
        auto seed = std::span<const float>(centroids).subspan(c * dim, dim);
        for (std::size_t i = 0; i < n; ++i) {
            const double d = std::max(
                0.0, 2.0 - 2.0 * kernels::dot(vectors.subspan(i * dim, dim), seed));
            d2[i] = std::min(d2[i], d);
        }
    }
    return centroids;
}

} // namespace

std::vector<float> kmeans_train(std::span<const float> vectors, std::size_t dim,
                                const KMeansParams& params, Backend backend) {
    if (dim == 0 || vectors.size() % dim != 0) {
        throw Error("kmeans_train: data is not a whole number of rows");
    }
    const std::size_t n = vectors.size() / dim;
    const std::size_t k = params.nlist;
    if (k == 0) {
        throw Error("kmeans_train: nlist must be positive");
    }
    if (n < k) {
        throw Error("kmeans_train: sample of " + std::to_string(n) +
                    " vectors is smaller than nlist " + std::to_string(k));
    }
    if (params.iters < 1) {
        throw Error("kmeans_train: iters must be at least 1");
    }

    std::mt19937_64 rng(params.seed);
    std::vector<float> centroids = seed_plus_plus(vectors, dim, n, k, rng);

    std::vector<std::uint32_t> previous;
    std::vector<double> sums(k * dim);
    std::vector<std::size_t> sizes(k);
    std::vector<std::size_t> by_distance(n);

    for (int it = 0; it < params.iters; ++it) {
        auto assignment = kernels::assign(vectors, dim, centroids, backend);

        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(sizes.begin(), sizes.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = assignment.cell[i];
            ++sizes[c];
            for (std::size_t j = 0; j < dim; ++j) {
                sums[c * dim + j] += vectors[i * dim + j];
            }
        }

        // Farthest-first order for re-seeding: lowest best-cosine, then index.
        std::iota(by_distance.begin(), by_distance.end(), std::size_t{0});
        std::stable_sort(by_distance.begin(), by_distance.end(),
                         [&](std::size_t a, std::size_t b) {
                             return assignment.score[a] < assignment.score[b];
                         });
        std::size_t next_far = 0;
        bool reseeded = false;

        for (std::size_t c = 0; c < k; ++c) {
            double norm2 = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
                norm2 += sums[c * dim + j] * sums[c * dim + j];
            }
            float* dst = centroids.data() + c * dim;
            if (sizes[c] == 0 || norm2 == 0.0) {
                const std::size_t p = by_distance[next_far++ % n];
                std::copy_n(vectors.data() + p * dim, dim, dst);
                reseeded = true;
                continue;
            }
            const double inv = 1.0 / std::sqrt(norm2);
            for (std::size_t j = 0; j < dim; ++j) {
                dst[j] = static_cast<float>(sums[c * dim + j] * inv);
            }
        }

        if (!reseeded && assignment.cell == previous) {
            break;
        }
        previous = std::move(assignment.cell);
    }
    return centroids;
}

} // namespace lexclust
