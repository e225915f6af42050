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

#include "lexclust/embedding_matrix.h"

#include <cmath>
#include <string>

#include "binary_io.h"
#include "lexclust/error.h"
#include "lexclust/term_table.h"

namespace lexclust {

EmbeddingMatrix EmbeddingMatrix::from_raw(std::size_t count, std::size_t dim,
                                          std::vector<float> data) {
    if (dim == 0 && count > 0) {
        throw Error("embedding dimension must be positive");
    }
    if (data.size() != count * dim) {
        throw Error("embedding payload has " + std::to_string(data.size()) +
                    " values, expected " + std::to_string(count * dim));
    }
    for (std::size_t i = 0; i < count; ++i) {
        float* row = data.data() + i * dim;
        double norm2 = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            if (!std::isfinite(row[j])) {
                throw Error("non-finite value in embedding row " + std::to_string(i));
            }
            norm2 += static_cast<double>(row[j]) * row[j];
        }
        if (norm2 == 0.0) {
            throw Error("zero-norm embedding row " + std::to_string(i));
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t j = 0; j < dim; ++j) {
            row[j] = static_cast<float>(row[j] * inv);
        }
    }
    EmbeddingMatrix m;
    m.count_ = count;
    m.dim_ = dim;
    m.data_ = std::move(data);
    return m;
}

std::span<const float> EmbeddingMatrix::row(std::size_t i) const {
    if (i >= count_) {
        throw Error("embedding row " + std::to_string(i) + " out of range (count " +
                    std::to_string(count_) + ")");
    }
    return std::span<const float>(data_).subspan(i * dim_, dim_);
}

EmbeddingMatrix parse_embeddings(std::span<const std::byte> bytes,
                                 std::optional<std::size_t> expected_count) {
    detail::ByteReader in(bytes, "embeddings");
    in.expect_magic(std::string_view(kEmbeddingMagic, 6));
    const std::size_t count = in.get_u32();
    const std::size_t dim = in.get_u32();
    if (expected_count && *expected_count != count) {
        throw Error("embeddings header count " + std::to_string(count) +
                    " does not match expected " + std::to_string(*expected_count));
    }
    if (dim == 0) {
        throw Error("embeddings header has dim 0");
    }
    const std::size_t payload = count * dim * sizeof(float);
    if (in.remaining() != payload) {
        throw Error("embeddings payload is " + std::to_string(in.remaining()) +
                    " bytes, header implies " + std::to_string(payload));
    }
    std::vector<float> data(count * dim);
    for (auto& v : data) {
        v = in.get_f32();
    }
    return EmbeddingMatrix::from_raw(count, dim, std::move(data));
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path,
                                std::optional<std::size_t> expected_count) {
    const auto contents = read_file(path);
    try {
        return parse_embeddings(detail::as_bytes(contents), expected_count);
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

void save_embeddings(const std::filesystem::path& path, std::size_t count,
                     std::size_t dim, std::span<const float> data) {
    if (data.size() != count * dim) {
        throw Error("save_embeddings: data size does not match count*dim");
    }
    detail::ByteWriter out;
    out.put_bytes(std::string_view(kEmbeddingMagic, 6));
    out.put_u32(static_cast<std::uint32_t>(count));
    out.put_u32(static_cast<std::uint32_t>(dim));
    for (float v : data) {
        out.put_f32(v);
    }
    write_file(path, out.take());
}

} // namespace lexclust
