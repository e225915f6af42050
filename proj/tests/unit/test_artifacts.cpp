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

#include "lexclust/artifacts.h"
#include "lexclust/error.h"
#include "test_support.h"

using namespace lexclust;
using lexclust::testing::TempDir;

TEST(Tsv, CandidatesRoundTrip) {
    TempDir dir;
    std::vector<ScoredCandidate> c = {{0, 1, 0.912345}, {2, 7, 0.7}};
    write_candidates_tsv(dir / "c.tsv", c);
    EXPECT_EQ(read_file(dir / "c.tsv"), "a_id\tb_id\tcosine\n0\t1\t0.912345\n2\t7\t0.700000\n");
    EXPECT_EQ(read_candidates_tsv(dir / "c.tsv"), c);
}

TEST(Tsv, EdgesRoundTrip) {
    TempDir dir;
    std::vector<VerifiedEdge> e = {{3, 4, 0.86}, {0, 9, 0.99}};
    write_edges_tsv(dir / "e.tsv", e);
    EXPECT_EQ(read_edges_tsv(dir / "e.tsv"), e);
}

TEST(Tsv, ClustersAndParentsRoundTrip) {
    TempDir dir;
    std::vector<std::vector<TermId>> clusters = {{6, 7, 8, 9}, {0, 1}};
    write_clusters_tsv(dir / "k.tsv", clusters);
    EXPECT_EQ(read_file(dir / "k.tsv"), "cluster_id\tmember_ids\n0\t6 7 8 9\n1\t0 1\n");
    EXPECT_EQ(read_clusters_tsv(dir / "k.tsv"), clusters);
    std::vector<TermId> parents = {6, 0};
    write_parents_tsv(dir / "p.tsv", parents);
    EXPECT_EQ(read_parents_tsv(dir / "p.tsv"), parents);
}

TEST(Tsv, RejectsMalformedFiles) {
    TempDir dir;
    write_file(dir / "noheader.tsv", "0\t1\t0.9\n");
    EXPECT_THROW(read_candidates_tsv(dir / "noheader.tsv"), Error);
    write_file(dir / "cols.tsv", "a_id\tb_id\tcosine\n0\t1\n");
    EXPECT_THROW(read_candidates_tsv(dir / "cols.tsv"), Error);
    write_file(dir / "num.tsv", "a_id\tb_id\tconfidence\n0\tx\t0.9\n");
    EXPECT_THROW(read_edges_tsv(dir / "num.tsv"), Error);
    write_file(dir / "gap.tsv", "cluster_id\tmember_ids\n0\t1 2\n2\t3 4\n");
    EXPECT_THROW(read_clusters_tsv(dir / "gap.tsv"), Error);
}

TEST(ClustersJson, SingleClusterFormat) {
    auto table = TermTable::from_terms({"a", "b"});
    std::vector<FinalCluster> c = {{0, {0, 1}, 0}};
    EXPECT_EQ(clusters_to_json(c, table),
              "[\n{\"cluster_id\":0,\"parent\":\"a\",\"members\":[\"a\",\"b\"]}\n]\n");
}

TEST(ClustersJson, EmptyIsEmptyArray) {
    EXPECT_EQ(clusters_to_json({}, TermTable{}), "[]\n");
}

TEST(ClustersJson, MembersSortedByIdWithParentRepeatedAndUtf8Kept) {
    auto table = TermTable::from_terms({"yüz", "çehre", "surat"});
    std::vector<FinalCluster> c = {{0, {2, 0, 1}, 0}};
    EXPECT_EQ(clusters_to_json(c, table),
              "[\n{\"cluster_id\":0,\"parent\":\"yüz\",\"members\":[\"yüz\",\"çehre\","
              "\"surat\"]}\n]\n");
}

TEST(ClustersJson, EmitRejectsParentOutsideCluster) {
    TempDir dir;
    auto table = TermTable::from_terms({"a", "b", "c"});
    std::vector<FinalCluster> c = {{0, {0, 1}, 2}};
    EXPECT_THROW(emit_clusters(c, table, dir / "o.json"), Error);
}

TEST(Digest, Fnv1aReferenceValues) {
    // Published FNV-1a 64-bit test vectors.
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
    EXPECT_EQ(hex64(0xabcULL), "0000000000000abc");
}

TEST(SoftState, ListsMultiMembers) {
    auto table = TermTable::from_terms({"a", "b", "c"});
    SoftClusterState s;
    s.clusters = {{0, 1}, {0, 2}};
    s.membership = {{0, 1}, {0}, {1}};
    const auto json = soft_state_to_json(s, table);
    EXPECT_NE(json.find("\"multi_members\""), std::string::npos);
    EXPECT_NE(json.find("\"term\": \"a\""), std::string::npos) << json;
}
