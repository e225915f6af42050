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
#include <string>
#include <vector>

#include "lexclust/drift_cluster.h"
#include "lexclust/synthetic.h"
#include "lexclust/types.h"

namespace lexclust {

/// Transitive closure of the edge set. Only terms that touch an edge appear.
/// Components are sorted internally and ordered by their smallest member.
std::vector<std::vector<TermId>> connected_components(std::span<const VerifiedEdge> edges);

struct ContaminationMetrics {
    std::size_t cluster_count{0};
    /// Share of clusters holding members of more than one gold group.
    double cross_group_cluster_fraction{0.0};
    /// Share of polysemy terms whose cluster's dominant gold group (over the
    /// other members, ties to the lower group index) is their own gold group.
    /// Unclustered polysemy terms count as misses; 1.0 with no polysemy terms.
    double polysemy_resolution_accuracy{1.0};
};

struct ContaminationReport {
    ContaminationMetrics drift_cluster;
    ContaminationMetrics baseline_comparison; ///< connected components
};

/// Clusters must be disjoint.
ContaminationMetrics evaluate(const std::vector<std::vector<TermId>>& clusters,
                              std::span<const std::uint32_t> gold,
                              std::span<const TermId> polysemy_ids);

ContaminationReport run_eval(const SyntheticSpec& spec, const ClusterConfig& config = {});

std::string report_to_json(const ContaminationReport& report);

} // namespace lexclust
