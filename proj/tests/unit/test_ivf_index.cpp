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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "lexclust/error.h"
#include "lexclust/ivf_index.h"
#include "lexclust/kernels.h"
#include "lexclust/term_table.h"
#include "test_support.h"

using namespace lexclust;
using lexclust::testing::brute_force_candidates;
using lexclust::testing::brute_force_search;

namespace {

EmbeddingMatrix random_matrix(std::size_t n, std::size_t dim, std::uint64_t seed) {
    return EmbeddingMatrix::from_raw(n, dim, lexclust::testing::random_unit_vectors(n, dim, seed));
}

std::set<TermId> id_set(const std::vector<Neighbor>& hits) {
    std::set<TermId> s;
    for (const auto& h : hits) {
        s.insert(h.id);
    }
    return s;
}

IvfBuildParams build_params(std::size_t nlist, std::uint64_t seed = 1234) {
    IvfBuildParams p;
    p.nlist = nlist;
    p.seed = seed;
    return p;
}

} // namespace

TEST(IvfDefaults, NlistAndNprobe) {
    EXPECT_EQ(default_nlist(1), 1u);
    EXPECT_EQ(default_nlist(2), 2u);
    EXPECT_EQ(default_nlist(100), 40u);
    EXPECT_EQ(default_nlist(10000), 400u);
    EXPECT_EQ(default_nprobe(1), 1u);
    EXPECT_EQ(default_nprobe(2), 1u);
    EXPECT_EQ(default_nprobe(400), 9u);
}

TEST(IvfBuild, SingleCellHoldsEverything) {
    auto m = random_matrix(10, 8, 1);
    auto idx = IvfIndex::build(m, build_params(1));
    ASSERT_EQ(idx.nlist(), 1u);
    EXPECT_EQ(idx.posting_ids(0).size(), 10u);
}

TEST(IvfBuild, EveryIdInExactlyOnePosting) {
    for (std::size_t nlist : {2u, 5u, 10u}) {
        auto m = random_matrix(10, 8, 2);
        auto idx = IvfIndex::build(m, build_params(nlist));
        std::vector<int> seen(10, 0);
        std::size_t total = 0;
        for (std::size_t c = 0; c < idx.nlist(); ++c) {
            auto ids = idx.posting_ids(c);
            EXPECT_TRUE(std::is_sorted(ids.begin(), ids.end()));
            total += ids.size();
            for (auto id : ids) {
                ++seen[id];
            }
        }
        EXPECT_EQ(total, 10u);
        for (int s : seen) {
            EXPECT_EQ(s, 1);
        }
    }
}

TEST(IvfBuild, SameSeedSameBytes) {
    auto m = random_matrix(300, 16, 3);
    auto a = IvfIndex::build(m, build_params(12, 77)).serialize();
    auto b = IvfIndex::build(m, build_params(12, 77)).serialize();
    EXPECT_EQ(a, b);
    auto serial = IvfIndex::build(m, build_params(12, 77), Backend::Serial).serialize();
    EXPECT_EQ(a, serial);
}

TEST(IvfBuild, SerializeRoundTrip) {
    lexclust::testing::TempDir dir;
    auto m = random_matrix(200, 8, 4);
    auto idx = IvfIndex::build(m, build_params(9));
    idx.save(dir / "i.lxivf");
    auto back = IvfIndex::load(dir / "i.lxivf");
    EXPECT_EQ(back.serialize(), idx.serialize());
    SearchParams p{10, 3, 0.2};
    for (std::size_t q = 0; q < 20; ++q) {
        EXPECT_EQ(back.search(m.row(q), p), idx.search(m.row(q), p));
    }
}

TEST(IvfBuild, DeserializeRejectsCorruption) {
    auto m = random_matrix(30, 4, 5);
    auto bytes = IvfIndex::build(m, build_params(3)).serialize();
    EXPECT_THROW(IvfIndex::deserialize(bytes.substr(0, bytes.size() - 1)), Error);
    EXPECT_THROW(IvfIndex::deserialize(bytes + "x"), Error);
    auto bad_magic = bytes;
    bad_magic[0] = 'Q';
    EXPECT_THROW(IvfIndex::deserialize(bad_magic), Error);
    auto bad_code = bytes;
    bad_code.back() = static_cast<char>(200);
    EXPECT_THROW(IvfIndex::deserialize(bad_code), Error);
}

TEST(IvfSearch, SelfMatchRanksFirst) {
    auto m = random_matrix(500, 32, 6);
    auto idx = IvfIndex::build(m, build_params(20));
    SearchParams p{10, idx.nlist(), 0.70};
    for (TermId q : {0u, 17u, 250u, 499u}) {
        auto hits = idx.search(m.row(q), p);
        ASSERT_FALSE(hits.empty());
        EXPECT_EQ(hits[0].id, q);
        EXPECT_NEAR(hits[0].cosine, 1.0, 0.02);
    }
}

TEST(IvfSearch, UnattainableThresholdIsEmpty) {
    auto m = random_matrix(50, 8, 7);
    auto idx = IvfIndex::build(m, build_params(4));
    EXPECT_TRUE(idx.search(m.row(0), {10, 4, 1.1}).empty());
}

TEST(IvfSearch, ResultsSortedAndBounded) {
    auto m = random_matrix(400, 8, 8);
    auto idx = IvfIndex::build(m, build_params(10));
    SearchParams p{25, 5, 0.1};
    for (std::size_t q = 0; q < 50; ++q) {
        auto hits = idx.search(m.row(q), p);
        EXPECT_LE(hits.size(), 25u);
        for (std::size_t i = 0; i < hits.size(); ++i) {
            EXPECT_GT(hits[i].cosine, 0.1);
            if (i > 0) {
                const bool ordered =
                    hits[i - 1].cosine > hits[i].cosine ||
                    (hits[i - 1].cosine == hits[i].cosine && hits[i - 1].id < hits[i].id);
                EXPECT_TRUE(ordered);
            }
        }
    }
}

TEST(IvfSearch, FullProbeMatchesBruteForce) {
    const std::size_t n = 1000, dim = 16;
    auto m = EmbeddingMatrix::from_raw(
        n, dim, lexclust::testing::clustered_unit_vectors(n, dim, 25, 0.25, 9));
    auto idx = IvfIndex::build(m, build_params(0));
    SearchParams p{100, idx.nlist(), 0.70};
    for (std::size_t q = 0; q < n; ++q) {
        auto got = idx.search(m.row(q), p);
        auto want = brute_force_search(idx, m.row(q), p);
        ASSERT_EQ(id_set(got), id_set(want)) << "query " << q;
        ASSERT_EQ(got, want) << "query " << q;
    }
}

TEST(IvfSearch, RecallNonDecreasingInNprobe) {
    const std::size_t n = 2000, dim = 16;
    auto m = EmbeddingMatrix::from_raw(
        n, dim, lexclust::testing::clustered_unit_vectors(n, dim, 40, 0.35, 10));
    auto idx = IvfIndex::build(m, build_params(0));
    SearchParams exact{50, idx.nlist(), 0.5};
    std::vector<std::set<TermId>> truth;
    for (std::size_t q = 0; q < 200; ++q) {
        truth.push_back(id_set(brute_force_search(idx, m.row(q), exact)));
    }
    double prev = -1.0;
    for (std::size_t nprobe = 1; nprobe <= idx.nlist(); nprobe *= 2) {
        SearchParams p{50, nprobe, 0.5};
        std::size_t hit = 0, total = 0;
        for (std::size_t q = 0; q < truth.size(); ++q) {
            auto got = id_set(idx.search(m.row(q), p));
            for (auto id : truth[q]) {
                hit += got.count(id);
            }
            total += truth[q].size();
        }
        const double recall = static_cast<double>(hit) / static_cast<double>(total);
        EXPECT_GE(recall, prev) << "nprobe " << nprobe;
        prev = recall;
    }
}

TEST(IvfSearch, BatchBackendsAgree) {
    auto m = random_matrix(1500, 16, 11);
    auto idx = IvfIndex::build(m, build_params(0));
    SearchParams p{30, 4, 0.3};
    auto serial = idx.search_batch(m.data(), p, Backend::Serial);
    for (int threads : {1, 2, 4}) {
        kernels::ThreadCountGuard guard(threads);
        EXPECT_EQ(idx.search_batch(m.data(), p, Backend::OpenMP), serial);
    }
}

TEST(IvfSearch, RejectsBadParams) {
    auto m = random_matrix(20, 4, 12);
    auto idx = IvfIndex::build(m, build_params(4));
    EXPECT_THROW(idx.search(m.row(0), {0, 1, 0.7}), Error);
    EXPECT_THROW(idx.search(m.row(0), {10, 0, 0.7}), Error);
    EXPECT_THROW(idx.search(m.row(0), {10, 5, 0.7}), Error);
    EXPECT_THROW(idx.search(m.row(0), {10, 1, NAN}), Error);
    std::vector<float> wrong(3, 0.5f);
    EXPECT_THROW(idx.search(wrong, {10, 1, 0.7}), Error);
}

TEST(Candidates, IdenticalVectorsGiveOnePair) {
    auto m = EmbeddingMatrix::from_raw(2, 3, {0.6f, 0.8f, 0.0f, 0.6f, 0.8f, 0.0f});
    auto idx = IvfIndex::build(m, build_params(0));
    auto c = generate_candidates(idx, m, {10, idx.nlist(), 0.70});
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].a, 0u);
    EXPECT_EQ(c[0].b, 1u);
}

TEST(Candidates, OrthogonalVectorsGiveNone) {
    auto m = EmbeddingMatrix::from_raw(2, 2, {1.0f, 0.0f, 0.0f, 1.0f});
    auto idx = IvfIndex::build(m, build_params(0));
    EXPECT_TRUE(generate_candidates(idx, m, {10, idx.nlist(), 0.70}).empty());
}

TEST(Candidates, ToySetMatchesAllPairsOracle) {
    // Five vectors: three near e0, two near e1.
    auto m = EmbeddingMatrix::from_raw(5, 3, {1.0f, 0.1f, 0.0f, 0.9f, 0.2f, 0.1f,
                                              1.0f, -0.1f, 0.2f, 0.1f, 1.0f, 0.0f,
                                              0.0f, 0.9f, 0.3f});
    for (std::size_t nlist : {1u, 2u, 3u}) {
        auto idx = IvfIndex::build(m, build_params(nlist));
        SearchParams p{100, idx.nlist(), 0.70};
        auto got = generate_candidates(idx, m, p);
        EXPECT_EQ(got, brute_force_candidates(idx, m, p)) << "nlist " << nlist;
        std::set<std::pair<TermId, TermId>> pairs;
        for (const auto& c : got) {
            pairs.insert({c.a, c.b});
        }
        std::set<std::pair<TermId, TermId>> expected = {{0, 1}, {0, 2}, {1, 2}, {3, 4}};
        EXPECT_EQ(pairs, expected) << "nlist " << nlist;
    }
}

TEST(Candidates, CanonicalSortedDeterministicAndBackendIndependent) {
    auto m = EmbeddingMatrix::from_raw(
        800, 16, lexclust::testing::clustered_unit_vectors(800, 16, 30, 0.3, 13));
    auto idx = IvfIndex::build(m, build_params(0));
    SearchParams p{20, 3, 0.7};
    auto serial = generate_candidates(idx, m, p, Backend::Serial);
    ASSERT_FALSE(serial.empty());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        EXPECT_LT(serial[i].a, serial[i].b);
        EXPECT_GT(serial[i].cosine, 0.7);
        if (i > 0) {
            EXPECT_LT(std::make_pair(serial[i - 1].a, serial[i - 1].b),
                      std::make_pair(serial[i].a, serial[i].b));
        }
    }
    for (int threads : {1, 2, 4}) {
        kernels::ThreadCountGuard guard(threads);
        EXPECT_EQ(generate_candidates(idx, m, p, Backend::OpenMP), serial);
    }
}

TEST(Candidates, FullProbeMatchesOracle) {
    auto m = EmbeddingMatrix::from_raw(
        600, 12, lexclust::testing::clustered_unit_vectors(600, 12, 20, 0.3, 14));
    auto idx = IvfIndex::build(m, build_params(0));
    SearchParams p{15, idx.nlist(), 0.7};
    EXPECT_EQ(generate_candidates(idx, m, p), brute_force_candidates(idx, m, p));
}

TEST(Candidates, RejectsMismatchedMatrix) {
    auto m = random_matrix(20, 4, 15);
    auto other = random_matrix(21, 4, 16);
    auto idx = IvfIndex::build(m, build_params(2));
    EXPECT_THROW(generate_candidates(idx, other, {10, 1, 0.7}), Error);
}
