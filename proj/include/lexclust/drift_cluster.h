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

#include "lexclust/types.h"

namespace lexclust {

/// Symmetric synonym neighborhoods built from verified edges.
class AdjacencyMap {
public:
    AdjacencyMap() = default;
    explicit AdjacencyMap(std::size_t num_terms) : neighbors_(num_terms) {}

    /// Rejects self-loops and ids >= num_terms. Duplicate and reversed edges
    /// collapse to one neighbor entry.
    static AdjacencyMap build(std::span<const VerifiedEdge> edges, std::size_t num_terms);

    std::size_t num_terms() const { return neighbors_.size(); }

    /// Sorted neighbor ids.
    std::span<const TermId> synonyms(TermId t) const;
    bool adjacent(TermId t, TermId u) const;

    std::size_t edge_count() const;

private:
    std::vector<std::vector<TermId>> neighbors_;
};

enum class JoinComparator {
    Greater,      ///< ratio > threshold
    GreaterEqual, ///< ratio >= threshold
};

struct ClusterConfig {
    double intersection_ratio_threshold{0.51};
    JoinComparator comparator{JoinComparator::Greater};
};

void validate(const ClusterConfig& config);

/// Soft clusters after expansion. Cluster ids are creation indices. Member
/// lists and membership lists are kept sorted.
struct SoftClusterState {
    std::vector<std::vector<TermId>> clusters;
    std::vector<std::vector<std::uint32_t>> membership; // indexed by TermId

    std::size_t multi_member_count() const;
};

/// |synonyms(t) ∩ members| / |members|. Throws on an empty member set.
double intersection_ratio(TermId t, std::span<const TermId> members, const AdjacencyMap& adj);

bool passes_join_test(double ratio, const ClusterConfig& config);

/// Edges sorted by confidence descending, ties by (a, b) ascending, after
/// canonicalizing to a < b and merging duplicates (max confidence).
std::vector<VerifiedEdge> expansion_order(std::span<const VerifiedEdge> edges);

/// Confidence-ordered expansion.
///
/// For each pair (u, v): if neither endpoint belongs to a cluster, {u, v}
/// becomes a new cluster. Otherwise u is tested against every cluster of v
/// it is not already in, then v against every cluster of u, and joins each
/// cluster whose intersection ratio passes the join test. Ratios are taken
/// against the cluster as it stands at that moment, so a term can collect
/// several memberships.
SoftClusterState expand(std::span<const VerifiedEdge> edges, const AdjacencyMap& adj,
                        const ClusterConfig& config);

struct ClusterCandidate {
    std::uint32_t cluster_id{0};
    std::span<const TermId> members;
};

/// Picks the cluster sharing the most synonyms with t; ties go to the
/// smaller cluster, then to the smaller cluster id. t itself never counts
/// toward overlap. Needs at least one candidate.
std::uint32_t vote(TermId t, std::span<const ClusterCandidate> candidates,
                   const AdjacencyMap& adj);

/// Resolves every multi-membership by vote against the unmodified soft
/// state, removes the losing memberships, and drops clusters left with
/// fewer than two members. Surviving clusters keep creation order.
std::vector<std::vector<TermId>> reduce(const SoftClusterState& state, const AdjacencyMap& adj,
                                        Backend backend = Backend::OpenMP);

/// expand followed by reduce.
std::vector<std::vector<TermId>> cluster_edges(std::span<const VerifiedEdge> edges,
                                               std::size_t num_terms,
                                               const ClusterConfig& config,
                                               Backend backend = Backend::OpenMP);

} // namespace lexclust
