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
#include <string>
#include <string_view>
#include <vector>

#include "lexclust/term_table.h"
#include "lexclust/types.h"

namespace lexclust {

struct ConceptGroup {
    std::string name;
    std::vector<std::string> terms;
    /// Probability that a given intra-group pair is an edge. Inclusion is a
    /// hash of (group, i, j) and does not depend on the seed.
    double density{1.0};
};

/// Low-confidence bridge between terms of two different groups.
struct ChainLink {
    std::string a;
    std::string b;
};

/// A polysemy term is linked to the first `count` terms of `group`.
struct PolysemyWiring {
    std::string group;
    std::size_t count{0};
};

struct PolysemyTerm {
    std::string term;
    std::vector<PolysemyWiring> wiring;
};

struct SyntheticSpec {
    std::vector<ConceptGroup> concept_groups;
    std::vector<ChainLink> chain_links;
    std::vector<PolysemyTerm> polysemy_terms;
    std::uint64_t seed{0};
};

inline constexpr double kIntraConfidenceMin = 0.85; // intra edges in [0.85, 1.0)
inline constexpr double kBridgeConfidenceMin = 0.70; // bridges in (0.70, 0.75]
inline constexpr double kBridgeConfidenceMax = 0.75;

/// Throws Error on: empty or duplicate group names, groups under two terms,
/// density outside [0, 1], a term in two groups, polysemy terms that are
/// also group members or wired into fewer than two groups, wiring counts
/// outside [1, group size], tied majority wiring, and chain links that are
/// not between members of two distinct groups.
void validate(const SyntheticSpec& spec);

SyntheticSpec parse_synthetic_spec(std::string_view json_text);
SyntheticSpec load_synthetic_spec(const std::filesystem::path& path);

struct SyntheticCorpus {
    TermTable table;
    /// Canonical (a < b), sorted by (a, b).
    std::vector<VerifiedEdge> edges;
    /// Gold group index per TermId; polysemy terms get their majority group.
    std::vector<std::uint32_t> gold;
    std::vector<TermId> polysemy_ids;
    std::size_t bridge_count{0};
};

/// Group terms take ids in declaration order, then polysemy terms. Topology
/// depends on groups and wiring but not on the seed, which only drives
/// confidences.
SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

/// Random valid spec for property tests and benchmarks.
SyntheticSpec random_synthetic_spec(std::uint64_t seed);

} // namespace lexclust
