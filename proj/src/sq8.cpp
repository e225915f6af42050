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

#include "lexclust/sq8.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lexclust/error.h"

namespace lexclust {

SQ8Codec::SQ8Codec(std::vector<float> mins, std::vector<float> maxs)
    : mins_(std::move(mins)), maxs_(std::move(maxs)) {
    if (mins_.size() != maxs_.size()) {
        throw Error("SQ8Codec: min/max dimensionality differs");
    }
    for (std::size_t j = 0; j < mins_.size(); ++j) {
        if (!std::isfinite(mins_[j]) || !std::isfinite(maxs_[j]) || maxs_[j] < mins_[j]) {
            throw Error("SQ8Codec: invalid range on dimension " + std::to_string(j));
        }
    }
}

SQ8Codec SQ8Codec::train(std::span<const float> vectors, std::size_t dim, RangeMode mode) {
    if (dim == 0 || vectors.empty() || vectors.size() % dim != 0) {
        throw Error("SQ8Codec::train: need a nonempty set of dim-sized vectors");
    }
    std::vector<float> mins(dim, std::numeric_limits<float>::infinity());
    std::vector<float> maxs(dim, -std::numeric_limits<float>::infinity());
    for (std::size_t i = 0; i < vectors.size(); i += dim) {
        for (std::size_t j = 0; j < dim; ++j) {
            mins[j] = std::min(mins[j], vectors[i + j]);
            maxs[j] = std::max(maxs[j], vectors[i + j]);
        }
    }
    if (mode == RangeMode::Global) {
        const float lo = *std::min_element(mins.begin(), mins.end());
        const float hi = *std::max_element(maxs.begin(), maxs.end());
        std::fill(mins.begin(), mins.end(), lo);
        std::fill(maxs.begin(), maxs.end(), hi);
    }
    return SQ8Codec(std::move(mins), std::move(maxs));
}

void SQ8Codec::encode_into(std::span<const float> v, std::span<std::uint8_t> out) const {
    if (v.size() != dim() || out.size() != dim()) {
        throw Error("sq8 encode: dimensionality mismatch (got " + std::to_string(v.size()) +
                    ", codec has " + std::to_string(dim()) + ")");
    }
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double lo = mins_[j];
        const double hi = maxs_[j];
        if (hi == lo) {
            out[j] = 0;
            continue;
        }
        if (std::isnan(v[j])) {
            throw Error("sq8 encode: NaN component " + std::to_string(j));
        }
        const double scaled = std::floor(kLevels * ((v[j] - lo) / (hi - lo)));
        out[j] = static_cast<std::uint8_t>(std::clamp(scaled, 0.0, double{kLevels}));
    }
}

std::vector<std::uint8_t> SQ8Codec::encode(std::span<const float> v) const {
    std::vector<std::uint8_t> out(dim());
    encode_into(v, out);
    return out;
}

std::vector<float> SQ8Codec::decode(std::span<const std::uint8_t> q) const {
    if (q.size() != dim()) {
        throw Error("sq8 decode: dimensionality mismatch (got " + std::to_string(q.size()) +
                    ", codec has " + std::to_string(dim()) + ")");
    }
    std::vector<float> out(dim());
    for (std::size_t j = 0; j < q.size(); ++j) {
        if (q[j] > kLevels) {
            throw Error("sq8 decode: code " + std::to_string(q[j]) + " above 127");
        }
        out[j] = decode_component(j, q[j]);
    }
    return out;
}

} // namespace lexclust
