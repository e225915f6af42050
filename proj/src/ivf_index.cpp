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

#include "lexclust/ivf_index.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "binary_io.h"
#include "lexclust/error.h"
#include "lexclust/kernels.h"
#include "lexclust/kmeans.h"
#include "lexclust/term_table.h"

namespace lexclust {

std::size_t default_nlist(std::size_t count) {
    if (count == 0) {
        return 1;
    }
    auto n = static_cast<std::size_t>(std::ceil(4.0 * std::sqrt(static_cast<double>(count))));
    return std::clamp<std::size_t>(n, 1, count);
}

std::size_t default_nprobe(std::size_t nlist) {
    std::size_t p = 0;
    while ((std::size_t{1} << p) < nlist) {
        ++p;
    }
    return std::max<std::size_t>(p, 1);
}

namespace {

bool ranks_before(const Neighbor& x, const Neighbor& y) {
    if (x.cosine != y.cosine) {
        return x.cosine > y.cosine;
    }
    return x.id < y.id;
}

// Deterministic subset of row indices for k-means training.
std::vector<std::size_t> training_rows(std::size_t count, std::size_t limit,
                                       std::uint64_t seed) {
    std::vector<std::size_t> rows(count);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    if (count <= limit) {
        return rows;
    }
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (std::size_t i = 0; i < limit; ++i) {
        const auto span = static_cast<double>(count - i);
        const std::size_t j = i + static_cast<std::size_t>(uniform01(rng()) * span);
        std::swap(rows[i], rows[j]);
    }
    rows.resize(limit);
    std::sort(rows.begin(), rows.end());
    return rows;
}

} // namespace

IvfIndex IvfIndex::build(const EmbeddingMatrix& matrix, const IvfBuildParams& params,
                         Backend backend) {
    if (matrix.empty()) {
        throw Error("ivf_build: embedding matrix is empty");
    }
    const std::size_t count = matrix.count();
    const std::size_t dim = matrix.dim();
    const std::size_t nlist = params.nlist == 0 ? default_nlist(count) : params.nlist;

    IvfIndex index;
    index.nlist_ = nlist;
    index.dim_ = dim;
    index.codec_ = SQ8Codec::train(matrix.data(), dim, params.range_mode);

    const auto rows = training_rows(count, nlist * params.max_train_per_cell, params.seed);
    std::vector<float> sample;
    if (rows.size() == count) {
        sample.assign(matrix.data().begin(), matrix.data().end());
    } else {
        sample.reserve(rows.size() * dim);
        for (auto r : rows) {
            auto row = matrix.row(r);
            sample.insert(sample.end(), row.begin(), row.end());
        }
    }
    index.centroids_ = kmeans_train(sample, dim, {nlist, params.kmeans_iters, params.seed},
                                    backend);

    auto assignment = kernels::assign(matrix.data(), dim, index.centroids_, backend);

    index.offsets_.assign(nlist + 1, 0);
    for (auto c : assignment.cell) {
        ++index.offsets_[c + 1];
    }
    std::partial_sum(index.offsets_.begin(), index.offsets_.end(), index.offsets_.begin());

    index.ids_.resize(count);
    index.codes_.resize(count * dim);
    std::vector<std::size_t> fill(index.offsets_.begin(), index.offsets_.end() - 1);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t slot = fill[assignment.cell[i]]++;
        index.ids_[slot] = static_cast<TermId>(i);
        index.codec_.encode_into(matrix.row(i),
                                 std::span<std::uint8_t>(index.codes_).subspan(slot * dim, dim));
    }
    index.finalize();
    return index;
}

void IvfIndex::finalize() {
    decoded_norm2_.resize(ids_.size());
    std::vector<float> buf(dim_);
    for (std::size_t s = 0; s < ids_.size(); ++s) {
        codec_.decode_unchecked(std::span<const std::uint8_t>(codes_).subspan(s * dim_, dim_),
                                buf);
        decoded_norm2_[s] = kernels::norm2(buf);
    }
}

std::span<const float> IvfIndex::centroid(std::size_t cell) const {
    if (cell >= nlist_) {
        throw Error("centroid: cell out of range");
    }
    return std::span<const float>(centroids_).subspan(cell * dim_, dim_);
}

std::span<const TermId> IvfIndex::posting_ids(std::size_t cell) const {
    if (cell >= nlist_) {
        throw Error("posting_ids: cell out of range");
    }
    return std::span<const TermId>(ids_).subspan(offsets_[cell],
                                                 offsets_[cell + 1] - offsets_[cell]);
}

std::span<const std::uint8_t> IvfIndex::posting_codes(std::size_t cell) const {
    if (cell >= nlist_) {
        throw Error("posting_codes: cell out of range");
    }
    return std::span<const std::uint8_t>(codes_).subspan(
        offsets_[cell] * dim_, (offsets_[cell + 1] - offsets_[cell]) * dim_);
}

void IvfIndex::validate(const SearchParams& params) const {
    if (params.top_k < 1) {
        throw Error("search: top_k must be at least 1");
    }
    if (params.nprobe < 1 || params.nprobe > nlist_) {
        throw Error("search: nprobe " + std::to_string(params.nprobe) +
                    " outside [1, nlist=" + std::to_string(nlist_) + "]");
    }
    if (!std::isfinite(params.sim_threshold)) {
        throw Error("search: sim_threshold must be finite");
    }
}

namespace {

// Single-query search body; buf and cells are caller-owned scratch space.
std::vector<Neighbor> search_one(std::span<const float> query, const SearchParams& params,
                                 std::size_t nlist, std::size_t dim,
                                 std::span<const float> centroids, const SQ8Codec& codec,
                                 std::span<const std::size_t> offsets,
                                 std::span<const TermId> ids,
                                 std::span<const std::uint8_t> codes,
                                 std::span<const double> norms, std::vector<float>& buf,
                                 std::vector<std::pair<double, std::uint32_t>>& cells) {
    cells.resize(nlist);
    for (std::size_t c = 0; c < nlist; ++c) {
        cells[c] = {kernels::dot(query, centroids.subspan(c * dim, dim)),
                    static_cast<std::uint32_t>(c)};
    }
    const std::size_t nprobe = params.nprobe;
    std::partial_sort(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(nprobe),
                      cells.end(), [](const auto& x, const auto& y) {
                          return x.first != y.first ? x.first > y.first : x.second < y.second;
                      });

    const double qnorm2 = kernels::norm2(query);
    std::vector<Neighbor> hits;
    buf.resize(dim);
    for (std::size_t p = 0; p < nprobe; ++p) {
        const std::size_t cell = cells[p].second;
        for (std::size_t s = offsets[cell]; s < offsets[cell + 1]; ++s) {
            codec.decode_unchecked(codes.subspan(s * dim, dim), buf);
            const double denom = std::sqrt(qnorm2 * norms[s]);
            const double cosine = denom > 0.0 ? kernels::dot(query, buf) / denom : 0.0;
            if (cosine > params.sim_threshold) {
                hits.push_back({ids[s], cosine});
            }
        }
    }
    if (hits.size() > params.top_k) {
        std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(params.top_k),
                          hits.end(), ranks_before);
        hits.resize(params.top_k);
    } else {
        std::sort(hits.begin(), hits.end(), ranks_before);
    }
    return hits;
}

} // namespace

std::vector<Neighbor> IvfIndex::search(std::span<const float> query,
                                       const SearchParams& params) const {
    if (query.size() != dim_) {
        throw Error("search: query dimensionality " + std::to_string(query.size()) +
                    " does not match index dim " + std::to_string(dim_));
    }
    validate(params);
    std::vector<float> buf;
    std::vector<std::pair<double, std::uint32_t>> cells;
    return search_one(query, params, nlist_, dim_, centroids_, codec_, offsets_, ids_, codes_,
                      decoded_norm2_, buf, cells);
}

std::vector<std::vector<Neighbor>> IvfIndex::search_batch(std::span<const float> queries,
                                                          const SearchParams& params,
                                                          Backend backend) const {
    if (dim_ == 0 || queries.size() % dim_ != 0) {
        throw Error("search_batch: query block is not a whole number of rows");
    }
    validate(params);
    const std::size_t nq = queries.size() / dim_;
    std::vector<std::vector<Neighbor>> results(nq);

    if (backend == Backend::Serial) {
        std::vector<float> buf;
        std::vector<std::pair<double, std::uint32_t>> cells;
        for (std::size_t q = 0; q < nq; ++q) {
            results[q] = search_one(queries.subspan(q * dim_, dim_), params, nlist_, dim_,
                                    centroids_, codec_, offsets_, ids_, codes_,
                                    decoded_norm2_, buf, cells);
        }
        return results;
    }

    const auto nqi = static_cast<std::int64_t>(nq);
#pragma omp parallel
    {
        std::vector<float> buf;
        std::vector<std::pair<double, std::uint32_t>> cells;
#pragma omp for schedule(dynamic, 16)
        for (std::int64_t q = 0; q < nqi; ++q) {
            const auto qi = static_cast<std::size_t>(q);
            results[qi] = search_one(queries.subspan(qi * dim_, dim_), params, nlist_, dim_,
                                     centroids_, codec_, offsets_, ids_, codes_,
                                     decoded_norm2_, buf, cells);
        }
    }
    return results;
}

std::string IvfIndex::serialize() const {
    detail::ByteWriter out;
    out.put_bytes(std::string_view(kIndexMagic, 6));
    out.put_u32(static_cast<std::uint32_t>(nlist_));
    out.put_u32(static_cast<std::uint32_t>(dim_));
    out.put_u32(static_cast<std::uint32_t>(ids_.size()));
    for (float v : centroids_) {
        out.put_f32(v);
    }
    for (float v : codec_.mins()) {
        out.put_f32(v);
    }
    for (float v : codec_.maxs()) {
        out.put_f32(v);
    }
    for (std::size_t c = 0; c < nlist_; ++c) {
        auto cell_ids = posting_ids(c);
        out.put_u32(static_cast<std::uint32_t>(cell_ids.size()));
        for (auto id : cell_ids) {
            out.put_u32(id);
        }
        out.put_u8s(posting_codes(c));
    }
    return out.take();
}

IvfIndex IvfIndex::deserialize(std::string_view bytes) {
    detail::ByteReader in(detail::as_bytes(bytes), "index");
    in.expect_magic(std::string_view(kIndexMagic, 6));
    IvfIndex index;
    index.nlist_ = in.get_u32();
    index.dim_ = in.get_u32();
    const std::size_t count = in.get_u32();
    if (index.nlist_ == 0 || index.dim_ == 0) {
        throw Error("index: nlist and dim must be positive");
    }
    index.centroids_.resize(index.nlist_ * index.dim_);
    for (auto& v : index.centroids_) {
        v = in.get_f32();
    }
    std::vector<float> mins(index.dim_), maxs(index.dim_);
    for (auto& v : mins) {
        v = in.get_f32();
    }
    for (auto& v : maxs) {
        v = in.get_f32();
    }
    index.codec_ = SQ8Codec(std::move(mins), std::move(maxs));

    index.offsets_.assign(index.nlist_ + 1, 0);
    index.ids_.reserve(count);
    index.codes_.reserve(count * index.dim_);
    for (std::size_t c = 0; c < index.nlist_; ++c) {
        const std::size_t n = in.get_u32();
        if (index.ids_.size() + n > count) {
            throw Error("index: posting counts exceed header count");
        }
        for (std::size_t i = 0; i < n; ++i) {
            index.ids_.push_back(in.get_u32());
        }
        auto codes = in.get_bytes(n * index.dim_);
        for (auto b : codes) {
            const auto code = static_cast<std::uint8_t>(b);
            if (code > SQ8Codec::kLevels) {
                throw Error("index: code above 127");
            }
            index.codes_.push_back(code);
        }
        index.offsets_[c + 1] = index.ids_.size();
    }
    if (index.ids_.size() != count) {
        throw Error("index: posting counts sum to " + std::to_string(index.ids_.size()) +
                    ", header says " + std::to_string(count));
    }
    if (in.remaining() != 0) {
        throw Error("index: trailing bytes after postings");
    }
    index.finalize();
    return index;
}

void IvfIndex::save(const std::filesystem::path& path) const {
    write_file(path, serialize());
}

IvfIndex IvfIndex::load(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    try {
        return deserialize(bytes);
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

std::vector<ScoredCandidate> generate_candidates(const IvfIndex& index,
                                                 const EmbeddingMatrix& matrix,
                                                 const SearchParams& params, Backend backend) {
    if (index.count() != matrix.count() || index.dim() != matrix.dim()) {
        throw Error("generate_candidates: index was not built over this matrix");
    }
    auto results = index.search_batch(matrix.data(), params, backend);

    std::vector<ScoredCandidate> pairs;
    for (std::size_t q = 0; q < results.size(); ++q) {
        const auto self = static_cast<TermId>(q);
        for (const auto& hit : results[q]) {
            if (hit.id == self) {
                continue;
            }
            pairs.push_back({std::min(self, hit.id), std::max(self, hit.id), hit.cosine});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) {
        if (x.a != y.a) {
            return x.a < y.a;
        }
        if (x.b != y.b) {
            return x.b < y.b;
        }
        return x.cosine > y.cosine;
    });
    // Sorted with the larger cosine first within a pair, so keep the first.
    auto last = std::unique(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) {
        return x.a == y.a && x.b == y.b;
    });
    pairs.erase(last, pairs.end());
    return pairs;
}

} // namespace lexclust
