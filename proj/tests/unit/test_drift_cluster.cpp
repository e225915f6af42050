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
#include <random>
#include <set>

#include "lexclust/drift_cluster.h"
#include "lexclust/error.h"
#include "lexclust/eval.h"
#include "lexclust/kernels.h"
#include "lexclust/synthetic.h"
#include "lexclust/term_table.h"
#include "test_support.h"

using namespace lexclust;
using lexclust::testing::edges_by_name;
using lexclust::testing::names_of;
using Names = std::vector<std::vector<std::string>>;

namespace {

bool co_clustered(const std::vector<std::vector<TermId>>& clusters, TermId x, TermId y) {
    for (const auto& c : clusters) {
        if (std::binary_search(c.begin(), c.end(), x) && std::binary_search(c.begin(), c.end(), y)) {
            return true;
        }
    }
    return false;
}

} // namespace

TEST(Adjacency, SymmetricAndDeduplicated) {
    std::vector<VerifiedEdge> one = {{0, 1, 0.9}};
    auto adj = AdjacencyMap::build(one, 3);
    EXPECT_EQ(std::vector<TermId>(adj.synonyms(0).begin(), adj.synonyms(0).end()),
              std::vector<TermId>{1});
    EXPECT_EQ(std::vector<TermId>(adj.synonyms(1).begin(), adj.synonyms(1).end()),
              std::vector<TermId>{0});

    std::vector<VerifiedEdge> both = {{0, 1, 0.9}, {1, 0, 0.8}};
    auto adj2 = AdjacencyMap::build(both, 3);
    EXPECT_EQ(adj2.edge_count(), 1u);
    EXPECT_EQ(adj2.synonyms(0).size(), 1u);

    std::vector<VerifiedEdge> path = {{0, 1, 0.9}, {1, 2, 0.8}};
    auto adj3 = AdjacencyMap::build(path, 3);
    EXPECT_EQ(std::vector<TermId>(adj3.synonyms(1).begin(), adj3.synonyms(1).end()),
              (std::vector<TermId>{0, 2}));
    EXPECT_TRUE(adj3.adjacent(2, 1));
    EXPECT_FALSE(adj3.adjacent(0, 2));
}

TEST(Adjacency, RejectsBadEdges) {
    std::vector<VerifiedEdge> loop = {{1, 1, 0.9}};
    EXPECT_THROW(AdjacencyMap::build(loop, 3), Error);
    std::vector<VerifiedEdge> out_of_range = {{0, 3, 0.9}};
    EXPECT_THROW(AdjacencyMap::build(out_of_range, 3), Error);
}

TEST(IntersectionRatio, SetArithmetic) {
    // t=0 with synonyms {1,2}; C = {1,2}.
    std::vector<VerifiedEdge> e = {{0, 1, 0.9}, {0, 2, 0.9}, {0, 3, 0.9}};
    auto adj = AdjacencyMap::build(e, 6);
    std::vector<TermId> c12 = {1, 2};
    EXPECT_DOUBLE_EQ(intersection_ratio(0, c12, adj), 1.0);
    // synonyms {1,2,3}, C = {1,2,4,5}: 2/4.
    std::vector<TermId> c1245 = {1, 2, 4, 5};
    const double r = intersection_ratio(0, c1245, adj);
    EXPECT_DOUBLE_EQ(r, 0.5);
    EXPECT_FALSE(passes_join_test(r, {}));
    std::vector<TermId> c45 = {4, 5};
    EXPECT_DOUBLE_EQ(intersection_ratio(5, c45, adj), 0.0);
    EXPECT_THROW(intersection_ratio(0, std::vector<TermId>{}, adj), Error);
}

TEST(JoinTest, Comparators) {
    EXPECT_FALSE(passes_join_test(0.51, {0.51, JoinComparator::Greater}));
    EXPECT_TRUE(passes_join_test(0.51, {0.51, JoinComparator::GreaterEqual}));
    EXPECT_TRUE(passes_join_test(0.52, {0.51, JoinComparator::Greater}));
    EXPECT_THROW(validate(ClusterConfig{0.0, JoinComparator::Greater}), Error);
    EXPECT_THROW(validate(ClusterConfig{1.01, JoinComparator::Greater}), Error);
}

TEST(ExpansionOrder, SortedByConfidenceThenIds) {
    std::vector<VerifiedEdge> e = {{3, 1, 0.8}, {0, 2, 0.9}, {1, 3, 0.85}, {0, 1, 0.8}};
    auto o = expansion_order(e);
    std::vector<VerifiedEdge> want = {{0, 2, 0.9}, {1, 3, 0.85}, {0, 1, 0.8}};
    EXPECT_EQ(o, want);
}

TEST(Expand, FirstPairCreatesCluster) {
    auto t = TermTable::from_terms({"u", "v"});
    auto e = edges_by_name(t, {{"u", "v", 0.99}});
    auto adj = AdjacencyMap::build(e, 2);
    auto s = expand(e, adj, {});
    EXPECT_EQ(names_of(t, s.clusters), (Names{{"u", "v"}}));
}

TEST(Expand, FourChainIsCut) {
    auto t = TermTable::from_terms({"a", "b", "c", "d"});
    auto e = edges_by_name(t, {{"a", "b", 0.9}, {"b", "c", 0.8}, {"c", "d", 0.7}});
    auto adj = AdjacencyMap::build(e, 4);
    auto s = expand(e, adj, {});
    EXPECT_EQ(names_of(t, s.clusters), (Names{{"a", "b"}, {"c", "d"}}));
    EXPECT_EQ(s.multi_member_count(), 0u);
}

TEST(Expand, TriangleMerges) {
    auto t = TermTable::from_terms({"a", "b", "c"});
    auto e = edges_by_name(t, {{"a", "b", 0.9}, {"b", "c", 0.8}, {"a", "c", 0.7}});
    auto adj = AdjacencyMap::build(e, 3);
    auto s = expand(e, adj, {});
    EXPECT_EQ(names_of(t, s.clusters), (Names{{"a", "b", "c"}}));
}

TEST(DriftCut, FourChainEndpointsNeverTogetherUnderAnyOrdering) {
    std::vector<std::pair<TermId, TermId>> pairs = {{0, 1}, {1, 2}, {2, 3}};
    std::vector<double> confs = {0.9, 0.8, 0.7};
    std::sort(confs.begin(), confs.end());
    do {
        std::vector<VerifiedEdge> e;
        for (std::size_t i = 0; i < 3; ++i) {
            e.push_back({pairs[i].first, pairs[i].second, confs[i]});
        }
        auto clusters = cluster_edges(e, 4, {});
        EXPECT_FALSE(co_clustered(clusters, 0, 3));
        EXPECT_GE(clusters.size(), 1u);
    } while (std::next_permutation(confs.begin(), confs.end()));

    std::vector<VerifiedEdge> stated = {{0, 1, 0.9}, {1, 2, 0.8}, {2, 3, 0.7}};
    EXPECT_EQ(cluster_edges(stated, 4, {}).size(), 2u);
}

TEST(Vote, HierarchyLevels) {
    // t=0 adjacent to 1,2,3,4.
    std::vector<VerifiedEdge> e = {{0, 1, .9}, {0, 2, .9}, {0, 3, .9}, {0, 4, .9}};
    auto adj = AdjacencyMap::build(e, 12);

    // Majority: overlap 3 beats overlap 1.
    std::vector<TermId> big = {0, 1, 2, 3}, small = {0, 4, 5};
    std::vector<ClusterCandidate> c1 = {{0, small}, {1, big}};
    EXPECT_EQ(vote(0, c1, adj), 1u);

    // Overlap tie at 2: smaller cardinality wins.
    std::vector<TermId> five = {0, 1, 2, 6, 7}, three = {0, 3, 4};
    std::vector<ClusterCandidate> c2 = {{0, five}, {1, three}};
    EXPECT_EQ(vote(0, c2, adj), 1u);

    // Overlap and size tie: smaller id wins, whatever the candidate order.
    std::vector<TermId> x = {0, 1, 8}, y = {0, 2, 9};
    std::vector<ClusterCandidate> c3 = {{7, x}, {4, y}};
    EXPECT_EQ(vote(0, c3, adj), 4u);

    std::vector<ClusterCandidate> single = {{3, x}};
    EXPECT_EQ(vote(0, single, adj), 3u);
    EXPECT_THROW(vote(0, std::vector<ClusterCandidate>{}, adj), Error);
}

TEST(Reduce, YuzGoesToAnatomicalCluster) {
    auto t = TermTable::from_terms({"yüz", "çehre", "surat", "sima", "yüzer", "yüzde"});
    auto e = edges_by_name(t, {{"yüz", "yüzer", 0.99},
                               {"çehre", "surat", 0.97},
                               {"yüz", "çehre", 0.96},
                               {"yüz", "surat", 0.95},
                               {"yüz", "sima", 0.94},
                               {"çehre", "sima", 0.93},
                               {"surat", "sima", 0.92},
                               {"yüzer", "yüzde", 0.90}});
    auto adj = AdjacencyMap::build(e, t.size());
    auto s = expand(e, adj, {});
    EXPECT_EQ(s.membership[t.id("yüz")].size(), 2u);
    auto clusters = reduce(s, adj);
    ASSERT_EQ(clusters.size(), 1u);
    EXPECT_EQ(names_of(t, clusters), (Names{{"yüz", "çehre", "surat", "sima"}}));
}

TEST(Reduce, DissolvesClustersLeftWithOneMember) {
    SoftClusterState s;
    s.clusters = {{0, 1}, {1, 2, 3}};
    s.membership = {{0}, {0, 1}, {1}, {1}};
    std::vector<VerifiedEdge> e = {{0, 1, .9}, {1, 2, .9}, {1, 3, .9}, {2, 3, .9}};
    auto adj = AdjacencyMap::build(e, 4);
    auto out = reduce(s, adj);
    EXPECT_EQ(out, (std::vector<std::vector<TermId>>{{1, 2, 3}}));
}

namespace {

std::vector<VerifiedEdge> random_graph(std::uint64_t seed, std::size_t n, std::size_t m) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<TermId> pick(0, static_cast<TermId>(n - 1));
    std::uniform_real_distribution<double> conf(0.71, 1.0);
    std::vector<VerifiedEdge> e;
    while (e.size() < m) {
        TermId a = pick(rng), b = pick(rng);
        if (a != b) {
            e.push_back({a, b, conf(rng)});
        }
    }
    return e;
}

} // namespace

TEST(ClusterProperties, HardPartitionAndSoftAdjacency) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const std::size_t n = 80;
        auto e = random_graph(seed, n, 240);
        auto adj = AdjacencyMap::build(e, n);
        auto soft = expand(e, adj, {});
        for (const auto& members : soft.clusters) {
            for (auto m : members) {
                bool linked = false;
                for (auto o : members) {
                    linked = linked || adj.adjacent(m, o);
                }
                EXPECT_TRUE(linked) << "term " << m << " has no neighbor in its soft cluster";
            }
        }
        auto clusters = reduce(soft, adj);
        std::vector<int> count(n, 0);
        for (const auto& c : clusters) {
            EXPECT_GE(c.size(), 2u);
            EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
            for (auto t : c) {
                ++count[t];
            }
        }
        for (int k : count) {
            EXPECT_LE(k, 1);
        }
    }
}

TEST(ClusterProperties, InputOrderIrrelevant) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto e = random_graph(seed, 60, 150);
        auto base = cluster_edges(e, 60, {}, Backend::Serial);
        std::mt19937_64 rng(seed + 1000);
        for (int k = 0; k < 3; ++k) {
            auto shuffled = e;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            for (auto& x : shuffled) {
                if (rng() & 1) {
                    std::swap(x.a, x.b);
                }
            }
            EXPECT_EQ(cluster_edges(shuffled, 60, {}, Backend::Serial), base);
        }
    }
}

TEST(ClusterProperties, ReduceBackendsAgree) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto e = random_graph(seed, 500, 2500);
        auto adj = AdjacencyMap::build(e, 500);
        auto soft = expand(e, adj, {});
        auto serial = reduce(soft, adj, Backend::Serial);
        for (int threads : {1, 2, 4}) {
            kernels::ThreadCountGuard guard(threads);
            EXPECT_EQ(reduce(soft, adj, Backend::OpenMP), serial);
        }
    }
}

TEST(ClusterProperties, GoldRecoveryWithoutBridges) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto spec = random_synthetic_spec(seed);
        spec.chain_links.clear();
        spec.polysemy_terms.clear();
        for (auto& g : spec.concept_groups) {
            g.density = 1.0;
        }
        auto corpus = generate_synthetic(spec);
        auto clusters = cluster_edges(corpus.edges, corpus.table.size(), {});
        ASSERT_EQ(clusters.size(), spec.concept_groups.size()) << "seed " << seed;
        std::set<std::vector<TermId>> got(clusters.begin(), clusters.end());
        std::vector<std::vector<TermId>> gold(spec.concept_groups.size());
        for (TermId t = 0; t < corpus.gold.size(); ++t) {
            gold[corpus.gold[t]].push_back(t);
        }
        EXPECT_EQ(got, std::set<std::vector<TermId>>(gold.begin(), gold.end())) << "seed " << seed;
    }
}
