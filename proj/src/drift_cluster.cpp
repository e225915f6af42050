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

#include "lexclust/drift_cluster.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "lexclust/error.h"

namespace lexclust {

namespace {

template <typename T>
bool sorted_contains(const std::vector<T>& v, T x) {
    return std::binary_search(v.begin(), v.end(), x);
}

template <typename T>
void sorted_insert(std::vector<T>& v, T x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) {
        v.insert(it, x);
    }
}

} // namespace

AdjacencyMap AdjacencyMap::build(std::span<const VerifiedEdge> edges, std::size_t num_terms) {
    AdjacencyMap adj(num_terms);
    for (const auto& e : edges) {
        if (e.a == e.b) {
            throw Error("adjacency: self-loop on term " + std::to_string(e.a));
        }
        if (e.a >= num_terms || e.b >= num_terms) {
            throw Error("adjacency: edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) +
                        ") references a term outside the table of " +
                        std::to_string(num_terms));
        }
        adj.neighbors_[e.a].push_back(e.b);
        adj.neighbors_[e.b].push_back(e.a);
    }
    for (auto& n : adj.neighbors_) {
        std::sort(n.begin(), n.end());
        n.erase(std::unique(n.begin(), n.end()), n.end());
    }
    return adj;
}

std::span<const TermId> AdjacencyMap::synonyms(TermId t) const {
    if (t >= neighbors_.size()) {
        throw Error("adjacency: term " + std::to_string(t) + " out of range");
    }
    return neighbors_[t];
}

bool AdjacencyMap::adjacent(TermId t, TermId u) const {
    return t < neighbors_.size() && sorted_contains(neighbors_[t], u);
}

std::size_t AdjacencyMap::edge_count() const {
    std::size_t total = 0;
    for (const auto& n : neighbors_) {
        total += n.size();
    }
    return total / 2;
}

void validate(const ClusterConfig& config) {
    const double t = config.intersection_ratio_threshold;
    if (!(t > 0.0 && t <= 1.0)) {
        throw Error("intersection ratio threshold must be in (0, 1]");
    }
}

std::size_t SoftClusterState::multi_member_count() const {
    return static_cast<std::size_t>(std::count_if(
        membership.begin(), membership.end(), [](const auto& m) { return m.size() > 1; }));
}

double intersection_ratio(TermId t, std::span<const TermId> members, const AdjacencyMap& adj) {
    if (members.empty()) {
        throw Error("intersection_ratio: empty cluster");
    }
    std::size_t shared = 0;
    for (auto m : members) {
        if (adj.adjacent(t, m)) {
            ++shared;
        }
    }
    return static_cast<double>(shared) / static_cast<double>(members.size());
}

bool passes_join_test(double ratio, const ClusterConfig& config) {
    return config.comparator == JoinComparator::Greater
               ? ratio > config.intersection_ratio_threshold
               : ratio >= config.intersection_ratio_threshold;
}

std::vector<VerifiedEdge> expansion_order(std::span<const VerifiedEdge> edges) {
    std::vector<VerifiedEdge> sorted;
    sorted.reserve(edges.size());
    for (const auto& e : edges) {
        sorted.push_back({std::min(e.a, e.b), std::max(e.a, e.b), e.confidence});
    }
    std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
        if (x.a != y.a) {
            return x.a < y.a;
        }
        if (x.b != y.b) {
            return x.b < y.b;
        }
        return x.confidence > y.confidence;
    });
    sorted.erase(std::unique(sorted.begin(), sorted.end(),
                             [](const auto& x, const auto& y) { return x.a == y.a && x.b == y.b; }),
                 sorted.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
        return x.confidence > y.confidence;
    });
    return sorted;
}

SoftClusterState expand(std::span<const VerifiedEdge> edges, const AdjacencyMap& adj,
                        const ClusterConfig& config) {
    validate(config);
    SoftClusterState state;
    state.membership.resize(adj.num_terms());

    auto try_join = [&](TermId term, TermId partner) {
        for (auto c : state.membership[partner]) {
            auto& members = state.clusters[c];
            if (sorted_contains(members, term)) {
                continue;
            }
            if (passes_join_test(intersection_ratio(term, members, adj), config)) {
                sorted_insert(members, term);
                sorted_insert(state.membership[term], c);
            }
        }
    };

    for (const auto& e : expansion_order(edges)) {
        if (e.a == e.b) {
            throw Error("expand: self-loop on term " + std::to_string(e.a));
        }
        if (e.b >= adj.num_terms()) {
            throw Error("expand: edge references term " + std::to_string(e.b) +
                        " outside the adjacency map");
        }
        const TermId u = e.a;
        const TermId v = e.b;
        if (state.membership[u].empty() && state.membership[v].empty()) {
            const auto id = static_cast<std::uint32_t>(state.clusters.size());
            state.clusters.push_back({u, v});
            state.membership[u].push_back(id);
            state.membership[v].push_back(id);
            continue;
        }
        try_join(u, v);
        try_join(v, u);
    }
    return state;
}

std::uint32_t vote(TermId t, std::span<const ClusterCandidate> candidates,
                   const AdjacencyMap& adj) {
    if (candidates.empty()) {
        throw Error("vote: no candidate clusters for term " + std::to_string(t));
    }
    std::uint32_t best_id = 0;
    std::size_t best_overlap = 0;
    std::size_t best_size = 0;
    bool first = true;
    for (const auto& c : candidates) {
        std::size_t overlap = 0;
        for (auto m : c.members) {
            if (m != t && adj.adjacent(t, m)) {
                ++overlap;
            }
        }
        const std::size_t size = c.members.size();
        const bool better = first || overlap > best_overlap ||
                            (overlap == best_overlap &&
                             (size < best_size || (size == best_size && c.cluster_id < best_id)));
        if (better) {
            best_id = c.cluster_id;
            best_overlap = overlap;
            best_size = size;
            first = false;
        }
    }
    return best_id;
}

namespace {

std::uint32_t vote_in_state(TermId t, const SoftClusterState& state, const AdjacencyMap& adj) {
    std::vector<ClusterCandidate> candidates;
    candidates.reserve(state.membership[t].size());
    for (auto c : state.membership[t]) {
        candidates.push_back({c, state.clusters[c]});
    }
    return vote(t, candidates, adj);
}

} // namespace

std::vector<std::vector<TermId>> reduce(const SoftClusterState& state, const AdjacencyMap& adj,
                                        Backend backend) {
    std::vector<TermId> polysemous;
    for (std::size_t t = 0; t < state.membership.size(); ++t) {
        if (state.membership[t].size() > 1) {
            polysemous.push_back(static_cast<TermId>(t));
        }
    }

    std::vector<std::uint32_t> winners(polysemous.size());
    if (backend == Backend::Serial) {
        for (std::size_t k = 0; k < polysemous.size(); ++k) {
            winners[k] = vote_in_state(polysemous[k], state, adj);
        }
    } else {
        const auto np = static_cast<std::int64_t>(polysemous.size());
#pragma omp parallel for schedule(dynamic, 64)
        for (std::int64_t k = 0; k < np; ++k) {
            const auto i = static_cast<std::size_t>(k);
            winners[i] = vote_in_state(polysemous[i], state, adj);
        }
    }

    auto clusters = state.clusters;
    for (std::size_t k = 0; k < polysemous.size(); ++k) {
        const TermId t = polysemous[k];
        for (auto c : state.membership[t]) {
            if (c == winners[k]) {
                continue;
            }
            auto& members = clusters[c];
            members.erase(std::lower_bound(members.begin(), members.end(), t));
        }
    }

    std::vector<std::vector<TermId>> out;
    for (auto& members : clusters) {
        if (members.size() >= 2) {
            out.push_back(std::move(members));
        }
    }
    return out;
}

std::vector<std::vector<TermId>> cluster_edges(std::span<const VerifiedEdge> edges,
                                               std::size_t num_terms,
                                               const ClusterConfig& config, Backend backend) {
    const auto adj = AdjacencyMap::build(edges, num_terms);
    return reduce(expand(edges, adj, config), adj, backend);
}

} // namespace lexclust
