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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexclust/drift_cluster.h"
#include "lexclust/term_table.h"
#include "lexclust/types.h"

namespace lexclust {

// Intermediate files between pipeline phases. TSV files carry a header row;
// floating-point columns use 6 decimal places.

void write_candidates_tsv(const std::filesystem::path& path,
                          std::span<const ScoredCandidate> candidates);
std::vector<ScoredCandidate> read_candidates_tsv(const std::filesystem::path& path);

void write_edges_tsv(const std::filesystem::path& path, std::span<const VerifiedEdge> edges);
std::vector<VerifiedEdge> read_edges_tsv(const std::filesystem::path& path);

/// cluster_id, then space-separated member ids.
void write_clusters_tsv(const std::filesystem::path& path,
                        const std::vector<std::vector<TermId>>& clusters);
std::vector<std::vector<TermId>> read_clusters_tsv(const std::filesystem::path& path);

/// cluster_id, parent_id.
void write_parents_tsv(const std::filesystem::path& path, std::span<const TermId> parents);
std::vector<TermId> read_parents_tsv(const std::filesystem::path& path);

/// [{"cluster_id": int, "parent": string, "members": [string...]}, ...]
/// One cluster object per line, ordered by cluster_id; members by TermId.
std::string clusters_to_json(std::span<const FinalCluster> clusters, const TermTable& table);
void emit_clusters(std::span<const FinalCluster> clusters, const TermTable& table,
                   const std::filesystem::path& path);

/// Debug dump of the soft state: clusters with member strings plus every
/// term holding more than one membership.
std::string soft_state_to_json(const SoftClusterState& state, const TermTable& table);

std::string format_fixed6(double v);

/// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);
std::string file_digest(const std::filesystem::path& path);

} // namespace lexclust
