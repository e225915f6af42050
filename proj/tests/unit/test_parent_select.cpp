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

#include <cmath>
#include <random>

#include "lexclust/error.h"
#include "lexclust/kernels.h"
#include "lexclust/parent_select.h"
#include "test_support.h"

using namespace lexclust;

namespace {

// Argmax over members of cos(row, mean of unit rows); scores within 1e-9
// count as tied and go to the smallest id.
TermId brute_force_parent(std::vector<TermId> members, const EmbeddingMatrix& m) {
    std::sort(members.begin(), members.end());
    auto unit = [&](TermId t) {
        std::vector<double> u(m.dim());
        double n2 = 0;
        for (std::size_t j = 0; j < m.dim(); ++j) {
            u[j] = m.row(t)[j];
            n2 += u[j] * u[j];
        }
        for (double& x : u) {
            x /= std::sqrt(n2);
        }
        return u;
    };
    std::vector<double> mean(m.dim(), 0.0);
    for (auto t : members) {
        const auto u = unit(t);
        for (std::size_t j = 0; j < m.dim(); ++j) {
            mean[j] += u[j];
        }
    }
    double mn = 0;
    for (double x : mean) {
        mn += x * x;
    }
    mn = std::sqrt(mn);
    TermId best = members[0];
    double best_cos = -2;
    for (auto t : members) {
        const auto u = unit(t);
        double d = 0;
        for (std::size_t j = 0; j < m.dim(); ++j) {
            d += u[j] * mean[j];
        }
        const double c = d / mn;
        if (c > best_cos + 1e-9) {
            best_cos = c;
            best = t;
        }
    }
    return best;
}

TermTable numbered(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back("t" + std::to_string(i));
    }
    return TermTable::from_terms(names);
}

} // namespace

TEST(Centroid, SingleMemberIsItself) {
    auto m = EmbeddingMatrix::from_raw(2, 2, {0.6f, 0.8f, 1.0f, 0.0f});
    std::vector<TermId> one = {0};
    auto c = compute_centroid(one, m);
    EXPECT_NEAR(c[0], 0.6, 1e-7);
    EXPECT_NEAR(c[1], 0.8, 1e-7);
}

TEST(Centroid, OrthogonalPairBisects) {
    auto m = EmbeddingMatrix::from_raw(2, 2, {1.0f, 0.0f, 0.0f, 1.0f});
    std::vector<TermId> both = {0, 1};
    auto c = compute_centroid(both, m);
    EXPECT_NEAR(c[0], 0.70710678, 1e-7);
    EXPECT_NEAR(c[1], 0.70710678, 1e-7);
}

TEST(Centroid, AntipodalPairIsAnError) {
    auto m = EmbeddingMatrix::from_raw(2, 2, {1.0f, 0.0f, -1.0f, 0.0f});
    std::vector<TermId> both = {0, 1};
    EXPECT_THROW(compute_centroid(both, m), Error);
}

TEST(SelectParent, DictionaryMemberWins) {
    auto table = TermTable::from_terms(
        {"VUK", "Vergi Usul K.", "Vergi Usul Kanunu", "Vergi Usul Yasası"});
    // VUK sits closest to the centroid, but the dictionary decides.
    auto m = EmbeddingMatrix::from_raw(4, 3, {1.0f, 0.0f, 0.0f, 0.9f, 0.3f, 0.0f,
                                              0.6f, 0.0f, 0.8f, 0.9f, -0.3f, 0.0f});
    ParentDictionary dict({"Vergi Usul Kanunu", "kanun"});
    std::vector<TermId> members = {0, 1, 2, 3};
    EXPECT_EQ(select_parent(members, dict, m, table), 2u);
    EXPECT_EQ(brute_force_parent(members, m), 0u);
}

TEST(SelectParent, SeveralDictionaryMembersUseCentroid) {
    auto table = TermTable::from_terms({"a", "b", "c", "d"});
    auto m = EmbeddingMatrix::from_raw(4, 2, {1.0f, 0.0f, 0.8f, 0.6f, 0.0f, 1.0f, 0.6f, 0.8f});
    ParentDictionary dict({"a", "c"});
    std::vector<TermId> members = {0, 1, 2, 3};
    // Centroid lies on the diagonal; a and c are symmetric about it, tie to a.
    EXPECT_EQ(select_parent(members, dict, m, table), 0u);
    ParentDictionary dict2({"a", "d"});
    EXPECT_EQ(select_parent(members, dict2, m, table), 3u);
}

TEST(SelectParent, IdenticalRowsTieToSmallestId) {
    auto table = numbered(5);
    std::vector<float> raw;
    for (int i = 0; i < 5; ++i) {
        raw.insert(raw.end(), {0.3f, 0.4f, 0.5f});
    }
    auto m = EmbeddingMatrix::from_raw(5, 3, raw);
    std::vector<TermId> members = {4, 2, 3};
    EXPECT_EQ(select_parent(members, {}, m, table), 2u);
}

TEST(SelectParent, ThreeMemberToyMatchesOracle) {
    auto table = numbered(3);
    auto m = EmbeddingMatrix::from_raw(3, 3, {1.0f, 0.2f, 0.0f, 0.7f, 0.7f, 0.1f,
                                              0.9f, 0.1f, 0.4f});
    std::vector<TermId> members = {0, 1, 2};
    EXPECT_EQ(select_parent(members, {}, m, table), brute_force_parent(members, m));
}

TEST(SelectParent, RandomClustersMatchOracleAndAreScaleInvariant) {
    std::mt19937_64 rng(21);
    const std::size_t n = 60, dim = 10;
    auto raw = lexclust::testing::random_unit_vectors(n, dim, 21);
    auto m = EmbeddingMatrix::from_raw(n, dim, raw);
    auto scaled_raw = raw;
    for (auto& x : scaled_raw) {
        x *= 7.5f;
    }
    auto scaled = EmbeddingMatrix::from_raw(n, dim, scaled_raw);
    auto table = numbered(n);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<TermId> members;
        const std::size_t k = 2 + rng() % 6;
        while (members.size() < k) {
            TermId t = static_cast<TermId>(rng() % n);
            if (std::find(members.begin(), members.end(), t) == members.end()) {
                members.push_back(t);
            }
        }
        std::sort(members.begin(), members.end());
        const auto p = select_parent(members, {}, m, table);
        EXPECT_EQ(p, brute_force_parent(members, m));
        EXPECT_EQ(select_parent(members, {}, scaled, table), p);
        EXPECT_TRUE(std::binary_search(members.begin(), members.end(), p));
    }
}

TEST(SelectParent, ZeroCentroidFallsBackToPairwiseSum) {
    auto table = numbered(4);
    // Rows 0 and 1 cancel, 2 and 3 cancel; pairwise sums decide.
    auto m = EmbeddingMatrix::from_raw(4, 2, {1.0f, 0.0f, -1.0f, 0.0f, 0.0f, 1.0f,
                                              0.0f, -1.0f});
    std::vector<TermId> members = {0, 1, 2, 3};
    const auto p = select_parent(members, {}, m, table);
    EXPECT_EQ(p, 0u);
}

TEST(SelectParent, RejectsSingletonsAndMissingRows) {
    auto table = numbered(3);
    auto m = EmbeddingMatrix::from_raw(2, 2, {1.0f, 0.0f, 0.0f, 1.0f});
    EXPECT_THROW(select_parent(std::vector<TermId>{0}, {}, m, table), Error);
    EXPECT_THROW(select_parent(std::vector<TermId>{0, 2}, {}, m, table), Error);
}

TEST(AssignParents, DictionaryDominanceAndBackendAgreement) {
    const std::size_t n = 300, dim = 8;
    auto m = EmbeddingMatrix::from_raw(n, dim, lexclust::testing::random_unit_vectors(n, dim, 5));
    auto table = numbered(n);
    std::vector<std::vector<TermId>> clusters;
    for (TermId start = 0; start + 3 <= n; start += 3) {
        clusters.push_back({start, start + 1, start + 2});
    }
    std::vector<std::string> dict_terms;
    for (TermId t = 0; t < n; t += 7) {
        dict_terms.push_back(table.term(t));
    }
    ParentDictionary dict(dict_terms);
    auto serial = assign_parents(clusters, dict, m, table, Backend::Serial);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        EXPECT_EQ(serial[i].cluster_id, i);
        bool any_dict = false;
        for (auto t : serial[i].members) {
            any_dict = any_dict || dict.contains(table.term(t));
        }
        if (any_dict) {
            EXPECT_TRUE(dict.contains(table.term(serial[i].parent)));
        }
    }
    for (int threads : {1, 2, 4}) {
        kernels::ThreadCountGuard guard(threads);
        EXPECT_EQ(assign_parents(clusters, dict, m, table, Backend::OpenMP), serial);
    }
}

TEST(ParentDictionary, LoadSkipsBlanksAndDuplicates) {
    lexclust::testing::TempDir dir;
    write_file(dir / "d.txt", "yüz\n\naraba\nyüz\n");
    auto d = ParentDictionary::load(dir / "d.txt");
    EXPECT_EQ(d.size(), 2u);
    EXPECT_TRUE(d.contains("araba"));
    EXPECT_FALSE(d.contains("otomobil"));
}
