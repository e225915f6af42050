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
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "lexclust/embedding_matrix.h"
#include "lexclust/term_table.h"
#include "lexclust/types.h"

namespace lexclust {

/// Exact-match set of preferred parent terms.
class ParentDictionary {
public:
    ParentDictionary() = default;
    explicit ParentDictionary(std::vector<std::string> terms);

    /// One term per line; blank lines ignored, duplicates collapsed.
    static ParentDictionary load(const std::filesystem::path& path);

    bool contains(std::string_view term) const;
    std::size_t size() const { return terms_.size(); }

private:
    std::unordered_set<std::string> terms_;
};

/// Cosines closer than this are treated as equal when ranking members.
inline constexpr double kCosineTieTolerance = 1e-9;

/// Normalized mean of the member rows. Throws when the mean has zero norm.
std::vector<double> compute_centroid(std::span<const TermId> members,
                                     const EmbeddingMatrix& matrix);

/// Dictionary members win outright; among several, and for clusters with
/// none, the member closest to the centroid wins, ties to the smallest id.
/// A zero-norm centroid falls back to the highest summed pairwise cosine.
TermId select_parent(std::span<const TermId> members, const ParentDictionary& dict,
                     const EmbeddingMatrix& matrix, const TermTable& table);

/// Assigns parents to every cluster; cluster_id is the position in the list.
std::vector<FinalCluster> assign_parents(const std::vector<std::vector<TermId>>& clusters,
                                         const ParentDictionary& dict,
                                         const EmbeddingMatrix& matrix, const TermTable& table,
                                         Backend backend = Backend::OpenMP);

} // namespace lexclust
