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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexclust/drift_cluster.h"
#include "lexclust/relation_gate.h"
#include "lexclust/sq8.h"
#include "lexclust/types.h"

namespace lexclust {

struct PipelineConfig {
    std::filesystem::path terms;
    std::filesystem::path embeddings;
    std::filesystem::path dictionary; ///< optional; empty means no dictionary
    std::filesystem::path scorer_table;
    std::filesystem::path workdir{"lexclust-work"};
    std::filesystem::path output; ///< final JSON; empty means <workdir>/clusters.json

    double sim_threshold{0.70};
    std::size_t top_k{100};
    std::size_t nlist{0};  ///< 0: ceil(4 sqrt(count))
    std::size_t nprobe{0}; ///< 0: ceil(log2(nlist))
    std::uint64_t seed{1234};
    int kmeans_iters{20};
    RangeMode range_mode{RangeMode::PerDimension};

    double synonym_confidence_threshold{0.70};
    ConflictPolicy conflict_policy{ConflictPolicy::AntonymConflict};
    RelationScore scorer_fallback{RelationLabel::CoHyponym, 0.0};

    double intersection_ratio_threshold{0.51};
    JoinComparator ratio_comparator{JoinComparator::Greater};

    int threads{0}; ///< 0: OpenMP default
    bool dump_soft_state{false};

    GateConfig gate_config() const {
        return {synonym_confidence_threshold, conflict_policy};
    }
    ClusterConfig cluster_config() const {
        return {intersection_ratio_threshold, ratio_comparator};
    }
    std::filesystem::path output_path() const {
        return output.empty() ? workdir / "clusters.json" : output;
    }
};

/// Range checks on every threshold and count.
void validate(const PipelineConfig& config);

/// Reads a JSON config. Relative paths resolve against the file's directory.
/// Unknown keys are rejected.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
PipelineConfig parse_pipeline_config(std::string_view json_text,
                                     const std::filesystem::path& base_dir);

/// JSON rendering used in the run manifest.
std::string config_to_json(const PipelineConfig& config);

struct ClusterStats {
    std::size_t cluster_count{0};
    std::size_t median_size{0}; ///< lower median for even counts
    double mean_size{0.0};
    std::size_t max_size{0};
    std::size_t unclustered_term_count{0};

    friend bool operator==(const ClusterStats&, const ClusterStats&) = default;
};

ClusterStats compute_stats(const std::vector<std::vector<TermId>>& clusters,
                           std::size_t term_count);
ClusterStats compute_stats(std::span<const FinalCluster> clusters, std::size_t term_count);

/// Mean rounded to two decimals.
std::string stats_to_json(const ClusterStats& stats);

enum class Phase { Index, Candidates, Gate, Cluster, Parents, Emit, Stats };

inline constexpr Phase kAllPhases[] = {Phase::Index,   Phase::Candidates, Phase::Gate,
                                       Phase::Cluster, Phase::Parents,    Phase::Emit,
                                       Phase::Stats};

std::string_view phase_name(Phase phase);
Phase parse_phase(std::string_view name);

/// Runs phases against files in the work directory. Each phase checks that
/// its upstream artifacts exist and were produced under the current
/// configuration (via manifest.json) before doing any work.
class Pipeline {
public:
    explicit Pipeline(PipelineConfig config);

    void run(Phase phase);
    void run_all();

    std::filesystem::path artifact_path(Phase phase) const;
    std::filesystem::path manifest_path() const { return config_.workdir / "manifest.json"; }
    const PipelineConfig& config() const { return config_; }

    /// Hash of the configuration and inputs a phase's artifact depends on,
    /// including all upstream phases.
    std::string phase_hash(Phase phase);

private:
    void run_index();
    void run_candidates();
    void run_gate();
    void run_cluster();
    void run_parents();
    void run_emit();
    void run_stats();

    void require_upstream(Phase upstream);
    void require_input(const std::filesystem::path& path, std::string_view what) const;
    void record(Phase phase, std::size_t rows);
    const std::string& input_digest(const std::filesystem::path& path);

    PipelineConfig config_;
    std::map<std::string, std::string> digest_cache_;
};

} // namespace lexclust
