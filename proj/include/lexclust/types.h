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

#include <cstdint>
#include <string_view>
#include <vector>

namespace lexclust {

/// Line index of a term in the terms file.
using TermId = std::uint32_t;

/// Relation classes with stable numeric codes.
enum class RelationLabel : std::uint8_t {
    Antonym = 0,
    CoHyponym = 1,
    Synonym = 2,
};

int relation_code(RelationLabel label);
RelationLabel relation_from_code(int code);

/// Lower-case names used in TSV files: antonym, cohyponym, synonym.
std::string_view relation_name(RelationLabel label);
RelationLabel parse_relation_name(std::string_view name);

/// Candidate pair from vector search. Canonical order a < b.
struct ScoredCandidate {
    TermId a{0};
    TermId b{0};
    double cosine{0.0};

    friend bool operator==(const ScoredCandidate&, const ScoredCandidate&) = default;
};

/// Unordered synonym edge that survived relation gating.
struct VerifiedEdge {
    TermId a{0};
    TermId b{0};
    double confidence{0.0};

    friend bool operator==(const VerifiedEdge&, const VerifiedEdge&) = default;
};

/// Disjoint output cluster. Members are sorted by TermId and include the parent.
struct FinalCluster {
    std::uint32_t cluster_id{0};
    std::vector<TermId> members;
    TermId parent{0};

    friend bool operator==(const FinalCluster&, const FinalCluster&) = default;
};

/// Execution backend for the data-parallel kernels. Serial is the reference
/// path; OpenMP results are merged in index order and match it exactly.
enum class Backend {
    Serial,
    OpenMP,
};

} // namespace lexclust
