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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexclust/embedding_matrix.h"
#include "lexclust/sq8.h"
#include "lexclust/types.h"

namespace lexclust {

struct SearchParams {
    std::size_t top_k{100};
    std::size_t nprobe{1};
    double sim_threshold{0.70};
};

struct Neighbor {
    TermId id{0};
    double cosine{0.0};

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct IvfBuildParams {
    std::size_t nlist{0}; ///< 0 selects default_nlist(count)
    std::uint64_t seed{1234};
    int kmeans_iters{20};
    RangeMode range_mode{RangeMode::PerDimension};
    /// k-means trains on at most this many points per cell (sampled by seed).
    std::size_t max_train_per_cell{256};
};

/// ceil(4 * sqrt(count)), clamped to [1, count].
std::size_t default_nlist(std::size_t count);

/// ceil(log2(nlist)), at least 1.
std::size_t default_nprobe(std::size_t nlist);

inline constexpr char kIndexMagic[] = "LXIVF1";

/// Inverted-file index over SQ8 codes.
///
/// Postings are stored contiguously in cell order; within a cell, ids are
/// ascending. The decoded-vector norm of every posting is cached so search
/// can report true cosine against the reconstruction.
class IvfIndex {
public:
    IvfIndex() = default;

    static IvfIndex build(const EmbeddingMatrix& matrix, const IvfBuildParams& params,
                          Backend backend = Backend::OpenMP);

    std::size_t nlist() const { return nlist_; }
    std::size_t dim() const { return dim_; }
    std::size_t count() const { return ids_.size(); }

    const SQ8Codec& codec() const { return codec_; }
    std::span<const float> centroids() const { return centroids_; }
    std::span<const float> centroid(std::size_t cell) const;

    std::span<const TermId> posting_ids(std::size_t cell) const;
    /// Codes of a cell, posting_ids(cell).size() * dim bytes.
    std::span<const std::uint8_t> posting_codes(std::size_t cell) const;

    /// Results sorted by cosine descending, then id ascending; at most top_k,
    /// all with decoded-vector cosine > sim_threshold.
    std::vector<Neighbor> search(std::span<const float> query,
                                 const SearchParams& params) const;

    /// Searches nq row-major queries.
    std::vector<std::vector<Neighbor>> search_batch(std::span<const float> queries,
                                                    const SearchParams& params,
                                                    Backend backend = Backend::OpenMP) const;

    std::string serialize() const;
    static IvfIndex deserialize(std::string_view bytes);

    void save(const std::filesystem::path& path) const;
    static IvfIndex load(const std::filesystem::path& path);

private:
    void validate(const SearchParams& params) const;
    void finalize();

    std::size_t nlist_{0};
    std::size_t dim_{0};
    std::vector<float> centroids_;
    SQ8Codec codec_;
    std::vector<std::size_t> offsets_; // nlist + 1
    std::vector<TermId> ids_;
    std::vector<std::uint8_t> codes_;
    std::vector<double> decoded_norm2_;
};

/// Runs every matrix row as a query, drops self-pairs, canonicalizes to
/// a < b and merges the two retrieval directions keeping the max cosine.
/// Output is sorted by (a, b).
std::vector<ScoredCandidate> generate_candidates(const IvfIndex& index,
                                                 const EmbeddingMatrix& matrix,
                                                 const SearchParams& params,
                                                 Backend backend = Backend::OpenMP);

} // namespace lexclust
