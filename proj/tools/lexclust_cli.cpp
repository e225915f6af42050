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

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "lexclust/error.h"
#include "lexclust/eval.h"
#include "lexclust/pipeline.h"
#include "lexclust/term_table.h"

namespace {

using namespace lexclust;

struct Overrides {
    std::string config;
    std::optional<std::string> terms, embeddings, dictionary, scorer_table, workdir, output;
    std::optional<double> sim_threshold, syn_conf, ratio;
    std::optional<std::size_t> top_k, nlist, nprobe;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> conflict_policy, ratio_comparator;
    std::optional<int> threads;
    bool dump_soft_state{false};
};

void add_pipeline_options(CLI::App& cmd, Overrides& o) {
    cmd.add_option("--config", o.config, "JSON config file");
    cmd.add_option("--terms", o.terms, "term list, one per line");
    cmd.add_option("--embeddings", o.embeddings, "LXEMB1 embedding file");
    cmd.add_option("--dictionary", o.dictionary, "parent dictionary, one term per line");
    cmd.add_option("--scorer-table", o.scorer_table, "relation scorer TSV");
    cmd.add_option("--workdir", o.workdir, "directory for intermediate artifacts");
    cmd.add_option("--output", o.output, "final clusters JSON");
    cmd.add_option("--sim-threshold", o.sim_threshold, "candidate cosine threshold");
    cmd.add_option("--top-k", o.top_k, "neighbors per query");
    cmd.add_option("--nlist", o.nlist, "IVF cells (0: automatic)");
    cmd.add_option("--nprobe", o.nprobe, "cells probed per query (0: automatic)");
    cmd.add_option("--seed", o.seed, "k-means seed");
    cmd.add_option("--syn-conf", o.syn_conf, "synonym confidence threshold");
    cmd.add_option("--conflict-policy", o.conflict_policy,
                   "antonym-conflict or strict-both-synonym");
    cmd.add_option("--ratio", o.ratio, "intersection ratio threshold");
    cmd.add_option("--ratio-comparator", o.ratio_comparator, "gt or ge");
    cmd.add_option("--threads", o.threads, "worker threads (0: default)");
    cmd.add_flag("--dump-soft-state", o.dump_soft_state, "write soft_state.json");
}

PipelineConfig resolve(const Overrides& o) {
    PipelineConfig c = o.config.empty() ? PipelineConfig{} : load_pipeline_config(o.config);
    if (o.terms) c.terms = *o.terms;
    if (o.embeddings) c.embeddings = *o.embeddings;
    if (o.dictionary) c.dictionary = *o.dictionary;
    if (o.scorer_table) c.scorer_table = *o.scorer_table;
    if (o.workdir) c.workdir = *o.workdir;
    if (o.output) c.output = *o.output;
    if (o.sim_threshold) c.sim_threshold = *o.sim_threshold;
    if (o.top_k) c.top_k = *o.top_k;
    if (o.nlist) c.nlist = *o.nlist;
    if (o.nprobe) c.nprobe = *o.nprobe;
    if (o.seed) c.seed = *o.seed;
    if (o.syn_conf) c.synonym_confidence_threshold = *o.syn_conf;
    if (o.conflict_policy) c.conflict_policy = parse_conflict_policy(*o.conflict_policy);
    if (o.ratio) c.intersection_ratio_threshold = *o.ratio;
    if (o.ratio_comparator) {
        if (*o.ratio_comparator == "gt") {
            c.ratio_comparator = JoinComparator::Greater;
        } else if (*o.ratio_comparator == "ge") {
            c.ratio_comparator = JoinComparator::GreaterEqual;
        } else {
            throw Error("--ratio-comparator must be gt or ge");
        }
    }
    if (o.threads) c.threads = *o.threads;
    if (o.dump_soft_state) c.dump_soft_state = true;
    validate(c);
    return c;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lexclust: antonym-free synonym clustering over term embeddings"};
    app.require_subcommand(1);

    Overrides overrides;
    struct Entry {
        CLI::App* cmd;
        std::optional<Phase> phase;
    };
    std::vector<Entry> pipeline_cmds;
    for (auto phase : kAllPhases) {
        auto* cmd = app.add_subcommand(std::string(phase_name(phase)),
                                       "run the " + std::string(phase_name(phase)) + " phase");
        add_pipeline_options(*cmd, overrides);
        pipeline_cmds.push_back({cmd, phase});
    }
    auto* all = app.add_subcommand("all", "run every phase in order");
    add_pipeline_options(*all, overrides);
    pipeline_cmds.push_back({all, std::nullopt});

    std::string spec_path;
    std::string report_path;
    double eval_ratio = 0.51;
    auto* eval = app.add_subcommand("eval", "contamination report on a synthetic spec");
    eval->add_option("--spec", spec_path, "synthetic spec JSON")->required();
    eval->add_option("--report", report_path, "write the report here instead of stdout");
    eval->add_option("--ratio", eval_ratio, "intersection ratio threshold");

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval->parsed()) {
            ClusterConfig cc;
            cc.intersection_ratio_threshold = eval_ratio;
            validate(cc);
            const auto report = report_to_json(run_eval(load_synthetic_spec(spec_path), cc));
            if (report_path.empty()) {
                std::cout << report;
            } else {
                write_file(report_path, report);
            }
            return 0;
        }
        for (const auto& entry : pipeline_cmds) {
            if (!entry.cmd->parsed()) {
                continue;
            }
            Pipeline pipeline(resolve(overrides));
            if (entry.phase) {
                pipeline.run(*entry.phase);
            } else {
                pipeline.run_all();
            }
            return 0;
        }
    } catch (const MissingArtifactError& e) {
        std::fprintf(stderr, "lexclust: %s\n", e.what());
        return 3;
    } catch (const StaleArtifactError& e) {
        std::fprintf(stderr, "lexclust: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "lexclust: %s\n", e.what());
        return 1;
    }
    return 0;
}
