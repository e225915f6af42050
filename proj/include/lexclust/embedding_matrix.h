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
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace lexclust {

/// Row-major matrix of unit-norm float vectors, one row per term.
class EmbeddingMatrix {
public:
    EmbeddingMatrix() = default;

    /// Renormalizes every row to unit L2 norm. Zero or non-finite rows are
    /// rejected with the offending row index.
    static EmbeddingMatrix from_raw(std::size_t count, std::size_t dim,
                                    std::vector<float> data);

    std::size_t count() const { return count_; }
    std::size_t dim() const { return dim_; }
    bool empty() const { return count_ == 0; }

    std::span<const float> row(std::size_t i) const;
    std::span<const float> data() const { return data_; }

private:
    std::size_t count_{0};
    std::size_t dim_{0};
    std::vector<float> data_;
};

inline constexpr char kEmbeddingMagic[] = "LXEMB1";

/// Reads the LXEMB1 binary format. When expected_count is given it must
/// match the header.
EmbeddingMatrix load_embeddings(const std::filesystem::path& path,
                                std::optional<std::size_t> expected_count = std::nullopt);

EmbeddingMatrix parse_embeddings(std::span<const std::byte> bytes,
                                 std::optional<std::size_t> expected_count = std::nullopt);

/// Writes raw rows as given (no normalization).
void save_embeddings(const std::filesystem::path& path, std::size_t count,
                     std::size_t dim, std::span<const float> data);

} // namespace lexclust
