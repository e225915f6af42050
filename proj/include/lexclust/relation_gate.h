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

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexclust/term_table.h"
#include "lexclust/types.h"

namespace lexclust {

struct RelationScore {
    RelationLabel label{RelationLabel::CoHyponym};
    double confidence{0.0};

    friend bool operator==(const RelationScore&, const RelationScore&) = default;
};

/// Directional relation classifier over term strings. score(a, b) and
/// score(b, a) may differ. Implementations must be deterministic.
class RelationScorer {
public:
    virtual ~RelationScorer() = default;

    virtual RelationScore score(std::string_view a, std::string_view b) const = 0;

    /// Whether score() may be called from several threads at once. When
    /// false the gate scores on a single thread.
    virtual bool thread_safe() const { return false; }
};

/// Lookup table keyed by the ordered string pair, with a fallback score for
/// pairs that are not listed.
class TableScorer final : public RelationScorer {
public:
    explicit TableScorer(RelationScore fallback = {RelationLabel::CoHyponym, 0.0})
        : fallback_(fallback) {}

    /// Replaces any existing entry for (a, b).
    void set(std::string a, std::string b, RelationScore s);

    RelationScore score(std::string_view a, std::string_view b) const override;
    bool thread_safe() const override { return true; }

    std::size_t size() const { return table_.size(); }
    RelationScore fallback() const { return fallback_; }

    /// TSV rows: term_a, term_b, label (antonym|cohyponym|synonym), confidence.
    /// A first row starting with "term_a" is treated as a header.
    static TableScorer load(const std::filesystem::path& path, RelationScore fallback);
    static TableScorer parse(std::string_view tsv, RelationScore fallback,
                             std::string_view source = "scorer table");

private:
    std::map<std::pair<std::string, std::string>, RelationScore, std::less<>> table_;
    RelationScore fallback_;
};

enum class ConflictPolicy {
    /// Drop a pair only when the reverse direction says Antonym.
    AntonymConflict,
    /// Keep a pair only when the reverse direction is also Synonym above
    /// the threshold.
    StrictBothSynonym,
};

/// CLI/config names: "antonym-conflict" and "strict-both-synonym".
std::string_view conflict_policy_name(ConflictPolicy p);
ConflictPolicy parse_conflict_policy(std::string_view name);

struct GateConfig {
    double synonym_confidence_threshold{0.70};
    ConflictPolicy conflict_policy{ConflictPolicy::AntonymConflict};
};

void validate(const GateConfig& config);

/// Scores (table[a], table[b]); scorer failures are rethrown with the pair
/// attached. Confidences outside [0, 1] are rejected.
RelationScore score_pair(const RelationScorer& scorer, TermId a, TermId b,
                         const TermTable& table);

enum class SymmetryDecision { Keep, Drop };

/// Synonym above threshold, compared strictly.
bool passes_synonym_filter(const RelationScore& s, const GateConfig& config);

/// Applies the conflict policy given an already-accepted forward score.
SymmetryDecision check_symmetry(const RelationScore& forward, const RelationScore& reverse,
                                const GateConfig& config);

/// Scores both directions of every candidate and keeps the synonym edges
/// that survive the confidence filter and the conflict policy. Edge
/// confidence is min(forward, reverse) when the reverse direction also
/// passes the synonym filter, otherwise the forward confidence. Output keeps
/// the candidate order.
std::vector<VerifiedEdge> gate_candidates(std::span<const ScoredCandidate> candidates,
                                          const RelationScorer& scorer,
                                          const GateConfig& config, const TermTable& table,
                                          Backend backend = Backend::OpenMP);

} // namespace lexclust
