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

#include "lexclust/pipeline.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <numeric>

#include "lexclust/artifacts.h"
#include "lexclust/embedding_matrix.h"
#include "lexclust/error.h"
#include "lexclust/ivf_index.h"
#include "lexclust/kernels.h"
#include "lexclust/parent_select.h"
#include "lexclust/term_table.h"

namespace lexclust {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string_view range_mode_name(RangeMode m) {
    return m == RangeMode::PerDimension ? "per-dimension" : "global";
}

RangeMode parse_range_mode(std::string_view s) {
    if (s == "per-dimension") {
        return RangeMode::PerDimension;
    }
    if (s == "global") {
        return RangeMode::Global;
    }
    throw Error("unknown quantizer range mode \"" + std::string(s) +
                "\" (expected per-dimension or global)");
}

std::string_view comparator_name(JoinComparator c) {
    return c == JoinComparator::Greater ? "gt" : "ge";
}

JoinComparator parse_comparator(std::string_view s) {
    if (s == "gt") {
        return JoinComparator::Greater;
    }
    if (s == "ge") {
        return JoinComparator::GreaterEqual;
    }
    throw Error("unknown ratio comparator \"" + std::string(s) + "\" (expected gt or ge)");
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void validate(const PipelineConfig& c) {
    if (!(c.sim_threshold >= -1.0 && c.sim_threshold <= 1.0)) {
        throw Error("sim_threshold must be in [-1, 1]");
    }
    if (c.top_k < 1) {
        throw Error("top_k must be at least 1");
    }
    if (c.kmeans_iters < 1) {
        throw Error("kmeans_iters must be at least 1");
    }
    if (c.nlist > 0 && c.nprobe > c.nlist) {
        throw Error("nprobe " + std::to_string(c.nprobe) + " exceeds nlist " +
                    std::to_string(c.nlist));
    }
    validate(c.gate_config());
    validate(c.cluster_config());
    if (!(c.scorer_fallback.confidence >= 0.0 && c.scorer_fallback.confidence <= 1.0)) {
        throw Error("scorer fallback confidence must be in [0, 1]");
    }
}

PipelineConfig parse_pipeline_config(std::string_view json_text, const fs::path& base_dir) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) {
        throw Error("config: top level must be an object");
    }
    PipelineConfig c;
    auto path_of = [&](const nlohmann::json& v) {
        fs::path p = v.get<std::string>();
        return p.is_relative() ? base_dir / p : p;
    };
    try {
        for (const auto& [key, v] : doc.items()) {
            if (key == "terms") {
                c.terms = path_of(v);
            } else if (key == "embeddings") {
                c.embeddings = path_of(v);
            } else if (key == "dictionary") {
                c.dictionary = path_of(v);
            } else if (key == "scorer_table") {
                c.scorer_table = path_of(v);
            } else if (key == "workdir") {
                c.workdir = path_of(v);
            } else if (key == "output") {
                c.output = path_of(v);
            } else if (key == "sim_threshold") {
                c.sim_threshold = v.get<double>();
            } else if (key == "top_k") {
                c.top_k = v.get<std::size_t>();
            } else if (key == "nlist") {
                c.nlist = v.get<std::size_t>();
            } else if (key == "nprobe") {
                c.nprobe = v.get<std::size_t>();
            } else if (key == "seed") {
                c.seed = v.get<std::uint64_t>();
            } else if (key == "kmeans_iters") {
                c.kmeans_iters = v.get<int>();
            } else if (key == "quantizer_range") {
                c.range_mode = parse_range_mode(v.get<std::string>());
            } else if (key == "syn_conf") {
                c.synonym_confidence_threshold = v.get<double>();
            } else if (key == "conflict_policy") {
                c.conflict_policy = parse_conflict_policy(v.get<std::string>());
            } else if (key == "scorer_default_label") {
                c.scorer_fallback.label = parse_relation_name(v.get<std::string>());
            } else if (key == "scorer_default_confidence") {
                c.scorer_fallback.confidence = v.get<double>();
            } else if (key == "ratio") {
                c.intersection_ratio_threshold = v.get<double>();
            } else if (key == "ratio_comparator") {
                c.ratio_comparator = parse_comparator(v.get<std::string>());
            } else if (key == "threads") {
                c.threads = v.get<int>();
            } else if (key == "dump_soft_state") {
                c.dump_soft_state = v.get<bool>();
            } else {
                throw Error("unknown key \"" + key + "\"");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("config: ") + e.what());
    } catch (const Error& e) {
        throw Error(std::string("config: ") + e.what());
    }
    validate(c);
    return c;
}

PipelineConfig load_pipeline_config(const fs::path& path) {
    try {
        return parse_pipeline_config(read_file(path), path.parent_path());
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

std::string config_to_json(const PipelineConfig& c) {
    ordered_json j;
    j["terms"] = c.terms.string();
    j["embeddings"] = c.embeddings.string();
    j["dictionary"] = c.dictionary.string();
    j["scorer_table"] = c.scorer_table.string();
    j["workdir"] = c.workdir.string();
    j["output"] = c.output_path().string();
    j["sim_threshold"] = c.sim_threshold;
    j["top_k"] = c.top_k;
    j["nlist"] = c.nlist;
    j["nprobe"] = c.nprobe;
    j["seed"] = c.seed;
    j["kmeans_iters"] = c.kmeans_iters;
    j["quantizer_range"] = range_mode_name(c.range_mode);
    j["syn_conf"] = c.synonym_confidence_threshold;
    j["conflict_policy"] = conflict_policy_name(c.conflict_policy);
    j["scorer_default_label"] = relation_name(c.scorer_fallback.label);
    j["scorer_default_confidence"] = c.scorer_fallback.confidence;
    j["ratio"] = c.intersection_ratio_threshold;
    j["ratio_comparator"] = comparator_name(c.ratio_comparator);
    return j.dump(2);
}

ClusterStats compute_stats(const std::vector<std::vector<TermId>>& clusters,
                           std::size_t term_count) {
    ClusterStats s;
    s.cluster_count = clusters.size();
    std::size_t total = 0;
    std::vector<std::size_t> sizes;
    sizes.reserve(clusters.size());
    for (const auto& c : clusters) {
        sizes.push_back(c.size());
        total += c.size();
    }
    if (total > term_count) {
        throw Error("compute_stats: clusters hold more members than there are terms");
    }
    s.unclustered_term_count = term_count - total;
    if (sizes.empty()) {
        return s;
    }
    std::sort(sizes.begin(), sizes.end());
    s.median_size = sizes[(sizes.size() - 1) / 2];
    s.max_size = sizes.back();
    s.mean_size = static_cast<double>(total) / static_cast<double>(sizes.size());
    return s;
}

ClusterStats compute_stats(std::span<const FinalCluster> clusters, std::size_t term_count) {
    std::vector<std::vector<TermId>> members;
    members.reserve(clusters.size());
    for (const auto& c : clusters) {
        members.push_back(c.members);
    }
    return compute_stats(members, term_count);
}

std::string stats_to_json(const ClusterStats& s) {
    ordered_json j;
    j["cluster_count"] = s.cluster_count;
    j["median_size"] = s.median_size;
    j["mean_size"] = std::round(s.mean_size * 100.0) / 100.0;
    j["max_size"] = s.max_size;
    j["unclustered_term_count"] = s.unclustered_term_count;
    j["median_rule"] = "lower";
    return j.dump(2) + "\n";
}

std::string_view phase_name(Phase phase) {
    switch (phase) {
    case Phase::Index:
        return "index";
    case Phase::Candidates:
        return "candidates";
    case Phase::Gate:
        return "gate";
    case Phase::Cluster:
        return "cluster";
    case Phase::Parents:
        return "parents";
    case Phase::Emit:
        return "emit";
    case Phase::Stats:
        return "stats";
    }
    throw Error("invalid phase");
}

Phase parse_phase(std::string_view name) {
    for (auto p : kAllPhases) {
        if (phase_name(p) == name) {
            return p;
        }
    }
    throw Error("unknown phase \"" + std::string(name) + "\"");
}

Pipeline::Pipeline(PipelineConfig config) : config_(std::move(config)) {
    validate(config_);
}

fs::path Pipeline::artifact_path(Phase phase) const {
    switch (phase) {
    case Phase::Index:
        return config_.workdir / "index.lxivf";
    case Phase::Candidates:
        return config_.workdir / "candidates.tsv";
    case Phase::Gate:
        return config_.workdir / "edges.tsv";
    case Phase::Cluster:
        return config_.workdir / "clusters.tsv";
    case Phase::Parents:
        return config_.workdir / "parents.tsv";
    case Phase::Emit:
        return config_.output_path();
    case Phase::Stats:
        return config_.workdir / "stats.json";
    }
    throw Error("invalid phase");
}

const std::string& Pipeline::input_digest(const fs::path& path) {
    auto key = path.string();
    auto it = digest_cache_.find(key);
    if (it == digest_cache_.end()) {
        it = digest_cache_.emplace(key, path.empty() ? "none" : file_digest(path)).first;
    }
    return it->second;
}

std::string Pipeline::phase_hash(Phase phase) {
    const auto& c = config_;
    std::string material;
    switch (phase) {
    case Phase::Index:
        material = "index|terms=" + input_digest(c.terms) +
                   "|embeddings=" + input_digest(c.embeddings) +
                   "|nlist=" + std::to_string(c.nlist) + "|seed=" + std::to_string(c.seed) +
                   "|iters=" + std::to_string(c.kmeans_iters) +
                   "|range=" + std::string(range_mode_name(c.range_mode));
        break;
    case Phase::Candidates:
        material = "candidates|" + phase_hash(Phase::Index) +
                   "|top_k=" + std::to_string(c.top_k) + "|nprobe=" + std::to_string(c.nprobe) +
                   "|sim=" + num(c.sim_threshold);
        break;
    case Phase::Gate:
        material = "gate|" + phase_hash(Phase::Candidates) +
                   "|scorer=" + input_digest(c.scorer_table) +
                   "|syn_conf=" + num(c.synonym_confidence_threshold) +
                   "|policy=" + std::string(conflict_policy_name(c.conflict_policy)) +
                   "|fallback=" + std::string(relation_name(c.scorer_fallback.label)) + ":" +
                   num(c.scorer_fallback.confidence);
        break;
    case Phase::Cluster:
        material = "cluster|" + phase_hash(Phase::Gate) +
                   "|ratio=" + num(c.intersection_ratio_threshold) +
                   "|cmp=" + std::string(comparator_name(c.ratio_comparator));
        break;
    case Phase::Parents:
        material = "parents|" + phase_hash(Phase::Cluster) +
                   "|dictionary=" + input_digest(c.dictionary);
        break;
    case Phase::Emit:
        material = "emit|" + phase_hash(Phase::Parents);
        break;
    case Phase::Stats:
        material = "stats|" + phase_hash(Phase::Cluster);
        break;
    }
    return hex64(fnv1a64(material));
}

void Pipeline::require_input(const fs::path& path, std::string_view what) const {
    if (path.empty()) {
        throw Error(std::string(what) + " path is not configured");
    }
    if (!fs::exists(path)) {
        throw Error(std::string(what) + " file does not exist: " + path.string());
    }
}

namespace {

ordered_json read_manifest(const fs::path& path) {
    if (!fs::exists(path)) {
        return ordered_json::object();
    }
    try {
        return ordered_json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error(path.string() + ": unreadable manifest: " + e.what());
    }
}

} // namespace

void Pipeline::require_upstream(Phase upstream) {
    const auto path = artifact_path(upstream);
    const auto name = std::string(phase_name(upstream));
    if (!fs::exists(path)) {
        throw MissingArtifactError("missing artifact from phase '" + name + "': " +
                                   path.string() + " (run the '" + name + "' phase first)");
    }
    const auto manifest = read_manifest(manifest_path());
    if (!manifest.contains("phases") || !manifest["phases"].contains(name)) {
        throw StaleArtifactError("artifact " + path.string() + " has no manifest record; rerun '" +
                                 name + "'");
    }
    const auto& entry = manifest["phases"][name];
    if (entry.value("config_hash", "") != phase_hash(upstream)) {
        throw StaleArtifactError("artifact " + path.string() +
                                 " was produced under a different configuration or inputs; "
                                 "rerun '" + name + "'");
    }
    if (entry.value("artifact_digest", "") != file_digest(path)) {
        throw StaleArtifactError("artifact " + path.string() +
                                 " changed since it was recorded; rerun '" + name + "'");
    }
}

void Pipeline::record(Phase phase, std::size_t rows) {
    auto manifest = read_manifest(manifest_path());
    ordered_json phases = manifest.contains("phases") ? manifest["phases"] : ordered_json::object();

    ordered_json entry;
    entry["config_hash"] = phase_hash(phase);
    entry["artifact"] = artifact_path(phase).filename().string();
    entry["artifact_digest"] = file_digest(artifact_path(phase));
    entry["rows"] = rows;
    phases[std::string(phase_name(phase))] = entry;

    ordered_json out;
    out["config"] = ordered_json::parse(config_to_json(config_));
    out["seed"] = config_.seed;
    ordered_json inputs;
    inputs["terms"] = input_digest(config_.terms);
    inputs["embeddings"] = input_digest(config_.embeddings);
    inputs["scorer_table"] = config_.scorer_table.empty() || !fs::exists(config_.scorer_table)
                                 ? "none"
                                 : input_digest(config_.scorer_table);
    inputs["dictionary"] = config_.dictionary.empty() || !fs::exists(config_.dictionary)
                               ? "none"
                               : input_digest(config_.dictionary);
    out["inputs"] = inputs;
    // Canonical phase order so the manifest does not depend on run order.
    ordered_json ordered = ordered_json::object();
    for (auto p : kAllPhases) {
        const auto key = std::string(phase_name(p));
        if (phases.contains(key)) {
            ordered[key] = phases[key];
        }
    }
    out["phases"] = ordered;
    write_file(manifest_path(), out.dump(2) + "\n");
}

void Pipeline::run(Phase phase) {
    kernels::ThreadCountGuard threads(config_.threads);
    fs::create_directories(config_.workdir);
    switch (phase) {
    case Phase::Index:
        run_index();
        break;
    case Phase::Candidates:
        run_candidates();
        break;
    case Phase::Gate:
        run_gate();
        break;
    case Phase::Cluster:
        run_cluster();
        break;
    case Phase::Parents:
        run_parents();
        break;
    case Phase::Emit:
        run_emit();
        break;
    case Phase::Stats:
        run_stats();
        break;
    }
}

void Pipeline::run_all() {
    for (auto p : kAllPhases) {
        run(p);
    }
}

void Pipeline::run_index() {
    require_input(config_.terms, "terms");
    require_input(config_.embeddings, "embeddings");
    const auto table = load_term_table(config_.terms);
    const auto matrix = load_embeddings(config_.embeddings, table.size());
    IvfBuildParams params;
    params.nlist = config_.nlist;
    params.seed = config_.seed;
    params.kmeans_iters = config_.kmeans_iters;
    params.range_mode = config_.range_mode;
    const auto index = IvfIndex::build(matrix, params);
    index.save(artifact_path(Phase::Index));
    record(Phase::Index, index.count());
}

void Pipeline::run_candidates() {
    require_upstream(Phase::Index);
    require_input(config_.embeddings, "embeddings");
    const auto index = IvfIndex::load(artifact_path(Phase::Index));
    const auto matrix = load_embeddings(config_.embeddings, index.count());
    SearchParams params;
    params.top_k = config_.top_k;
    params.nprobe = config_.nprobe == 0 ? default_nprobe(index.nlist()) : config_.nprobe;
    params.nprobe = std::min(params.nprobe, index.nlist());
    params.sim_threshold = config_.sim_threshold;
    const auto candidates = generate_candidates(index, matrix, params);
    write_candidates_tsv(artifact_path(Phase::Candidates), candidates);
    record(Phase::Candidates, candidates.size());
}

void Pipeline::run_gate() {
    require_upstream(Phase::Candidates);
    require_input(config_.terms, "terms");
    require_input(config_.scorer_table, "scorer table");
    const auto table = load_term_table(config_.terms);
    const auto scorer = TableScorer::load(config_.scorer_table, config_.scorer_fallback);
    const auto candidates = read_candidates_tsv(artifact_path(Phase::Candidates));
    const auto edges = gate_candidates(candidates, scorer, config_.gate_config(), table);
    write_edges_tsv(artifact_path(Phase::Gate), edges);
    record(Phase::Gate, edges.size());
}

void Pipeline::run_cluster() {
    require_upstream(Phase::Gate);
    require_input(config_.terms, "terms");
    const auto table = load_term_table(config_.terms);
    const auto edges = read_edges_tsv(artifact_path(Phase::Gate));
    const auto adj = AdjacencyMap::build(edges, table.size());
    const auto soft = expand(edges, adj, config_.cluster_config());
    if (config_.dump_soft_state) {
        write_file(config_.workdir / "soft_state.json", soft_state_to_json(soft, table));
    }
    const auto clusters = reduce(soft, adj);
    write_clusters_tsv(artifact_path(Phase::Cluster), clusters);
    record(Phase::Cluster, clusters.size());
}

void Pipeline::run_parents() {
    require_upstream(Phase::Cluster);
    require_input(config_.terms, "terms");
    require_input(config_.embeddings, "embeddings");
    const auto table = load_term_table(config_.terms);
    const auto matrix = load_embeddings(config_.embeddings, table.size());
    ParentDictionary dict;
    if (!config_.dictionary.empty()) {
        require_input(config_.dictionary, "dictionary");
        dict = ParentDictionary::load(config_.dictionary);
    }
    const auto clusters = read_clusters_tsv(artifact_path(Phase::Cluster));
    const auto final_clusters = assign_parents(clusters, dict, matrix, table);
    std::vector<TermId> parents;
    parents.reserve(final_clusters.size());
    for (const auto& c : final_clusters) {
        parents.push_back(c.parent);
    }
    write_parents_tsv(artifact_path(Phase::Parents), parents);
    record(Phase::Parents, parents.size());
}

void Pipeline::run_emit() {
    require_upstream(Phase::Cluster);
    require_upstream(Phase::Parents);
    require_input(config_.terms, "terms");
    const auto table = load_term_table(config_.terms);
    const auto clusters = read_clusters_tsv(artifact_path(Phase::Cluster));
    const auto parents = read_parents_tsv(artifact_path(Phase::Parents));
    if (parents.size() != clusters.size()) {
        throw StaleArtifactError("parents.tsv and clusters.tsv disagree on cluster count");
    }
    std::vector<FinalCluster> out(clusters.size());
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        out[i].cluster_id = static_cast<std::uint32_t>(i);
        out[i].members = clusters[i];
        std::sort(out[i].members.begin(), out[i].members.end());
        out[i].parent = parents[i];
    }
    emit_clusters(out, table, artifact_path(Phase::Emit));
    record(Phase::Emit, out.size());
}

void Pipeline::run_stats() {
    require_upstream(Phase::Cluster);
    require_input(config_.terms, "terms");
    const auto table = load_term_table(config_.terms);
    const auto clusters = read_clusters_tsv(artifact_path(Phase::Cluster));
    const auto stats = compute_stats(clusters, table.size());
    write_file(artifact_path(Phase::Stats), stats_to_json(stats));
    record(Phase::Stats, stats.cluster_count);
}

} // namespace lexclust
