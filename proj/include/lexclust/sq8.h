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

namespace lexclust {

/// How the quantization range is trained.
enum class RangeMode {
    PerDimension, ///< min/max per component
    Global,       ///< one min/max over all components, stored per dimension
};

/// 8-bit scalar quantizer with 127 levels.
///
/// Encoding maps component j to floor(127 * (v - min_j) / (max_j - min_j)),
/// clamped to [0, 127]; a degenerate range (min_j == max_j) encodes to 0.
/// Decoding reconstructs the midpoint of the code's bucket,
/// min_j + (q + 0.5) / 127 * (max_j - min_j), so the round-trip error for
/// in-range inputs never exceeds (max_j - min_j) / 127.
class SQ8Codec {
public:
    static constexpr int kLevels = 127;

    SQ8Codec() = default;
    SQ8Codec(std::vector<float> mins, std::vector<float> maxs);

    static SQ8Codec train(std::span<const float> vectors, std::size_t dim,
                          RangeMode mode = RangeMode::PerDimension);

    std::size_t dim() const { return mins_.size(); }
    std::span<const float> mins() const { return mins_; }
    std::span<const float> maxs() const { return maxs_; }

    std::vector<std::uint8_t> encode(std::span<const float> v) const;
    void encode_into(std::span<const float> v, std::span<std::uint8_t> out) const;

    /// Throws on codes above 127.
    std::vector<float> decode(std::span<const std::uint8_t> q) const;

    /// Unchecked single-component decode shared by decode() and the search
    /// kernels.
    float decode_component(std::size_t j, std::uint8_t q) const {
        return mins_[j] + (static_cast<float>(q) + 0.5f) / static_cast<float>(kLevels) *
                              (maxs_[j] - mins_[j]);
    }

    void decode_unchecked(std::span<const std::uint8_t> q, std::span<float> out) const {
        for (std::size_t j = 0; j < out.size(); ++j) {
            out[j] = decode_component(j, q[j]);
        }
    }

    friend bool operator==(const SQ8Codec&, const SQ8Codec&) = default;

private:
    std::vector<float> mins_;
    std::vector<float> maxs_;
};

} // namespace lexclust
