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

#include "lexclust/relation_gate.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <optional>

#include "lexclust/error.h"

namespace lexclust {

void TableScorer::set(std::string a, std::string b, RelationScore s) {
    table_[{std::move(a), std::move(b)}] = s;
}

RelationScore TableScorer::score(std::string_view a, std::string_view b) const {
    auto it = table_.find(std::pair<std::string, std::string>(a, b));
    return it == table_.end() ? fallback_ : it->second;
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

double parse_confidence(std::string_view text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v) || v < 0.0 ||
        v > 1.0) {
        throw Error("confidence \"" + std::string(text) + "\" is not a number in [0, 1]");
    }
    return v;
}

} // namespace

TableScorer TableScorer::parse(std::string_view tsv, RelationScore fallback,
                               std::string_view source) {
    TableScorer scorer(fallback);
    auto lines = split_lines(tsv);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line = lines[i];
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty() || (i == 0 && line.starts_with("term_a\t"))) {
            continue;
        }
        auto fields = split_tabs(line);
        try {
            if (fields.size() != 4) {
                throw Error("expected 4 tab-separated fields, got " +
                            std::to_string(fields.size()));
            }
            scorer.set(std::string(fields[0]), std::string(fields[1]),
                       {parse_relation_name(fields[2]), parse_confidence(fields[3])});
        } catch (const Error& e) {
            throw Error(std::string(source) + ":" + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return scorer;
}

TableScorer TableScorer::load(const std::filesystem::path& path, RelationScore fallback) {
    return parse(read_file(path), fallback, path.string());
}

std::string_view conflict_policy_name(ConflictPolicy p) {
    return p == ConflictPolicy::AntonymConflict ? "antonym-conflict" : "strict-both-synonym";
}

ConflictPolicy parse_conflict_policy(std::string_view name) {
    if (name == "antonym-conflict") {
        return ConflictPolicy::AntonymConflict;
    }
    if (name == "strict-both-synonym") {
        return ConflictPolicy::StrictBothSynonym;
    }
    throw Error("unknown conflict policy \"" + std::string(name) +
                "\" (expected antonym-conflict or strict-both-synonym)");
}

void validate(const GateConfig& config) {
    const double t = config.synonym_confidence_threshold;
    if (!(t >= 0.0 && t <= 1.0)) {
        throw Error("synonym confidence threshold must be in [0, 1]");
    }
}

RelationScore score_pair(const RelationScorer& scorer, TermId a, TermId b,
                         const TermTable& table) {
    const auto& ta = table.term(a);
    const auto& tb = table.term(b);
    RelationScore s;
    try {
        s = scorer.score(ta, tb);
    } catch (const std::exception& e) {
        throw Error("scorer failed on pair (" + std::to_string(a) + " \"" + ta + "\", " +
                    std::to_string(b) + " \"" + tb + "\"): " + e.what());
    }
    if (!(s.confidence >= 0.0 && s.confidence <= 1.0)) {
        throw Error("scorer returned confidence outside [0, 1] for pair (" + ta + ", " + tb +
                    ")");
    }
    return s;
}

bool passes_synonym_filter(const RelationScore& s, const GateConfig& config) {
    return s.label == RelationLabel::Synonym &&
           s.confidence > config.synonym_confidence_threshold;
}

SymmetryDecision check_symmetry(const RelationScore& /*forward*/, const RelationScore& reverse,
                                const GateConfig& config) {
    switch (config.conflict_policy) {
    case ConflictPolicy::AntonymConflict:
        return reverse.label == RelationLabel::Antonym ? SymmetryDecision::Drop
                                                       : SymmetryDecision::Keep;
    case ConflictPolicy::StrictBothSynonym:
        return passes_synonym_filter(reverse, config) ? SymmetryDecision::Keep
                                                      : SymmetryDecision::Drop;
    }
    return SymmetryDecision::Drop;
}

namespace {

std::optional<VerifiedEdge> gate_one(const ScoredCandidate& c, const RelationScorer& scorer,
                                     const GateConfig& config, const TermTable& table) {
    if (c.a == c.b) {
        throw Error("gate: self-pair on term " + std::to_string(c.a));
    }
    const auto forward = score_pair(scorer, c.a, c.b, table);
    if (!passes_synonym_filter(forward, config)) {
        return std::nullopt;
    }
    const auto reverse = score_pair(scorer, c.b, c.a, table);
    if (check_symmetry(forward, reverse, config) == SymmetryDecision::Drop) {
        return std::nullopt;
    }
    const double confidence = passes_synonym_filter(reverse, config)
                                  ? std::min(forward.confidence, reverse.confidence)
                                  : forward.confidence;
    return VerifiedEdge{c.a, c.b, confidence};
}

} // namespace

std::vector<VerifiedEdge> gate_candidates(std::span<const ScoredCandidate> candidates,
                                          const RelationScorer& scorer,
                                          const GateConfig& config, const TermTable& table,
                                          Backend backend) {
    validate(config);
    const std::size_t n = candidates.size();
    std::vector<std::optional<VerifiedEdge>> slots(n);

    if (backend == Backend::Serial || !scorer.thread_safe()) {
        for (std::size_t i = 0; i < n; ++i) {
            slots[i] = gate_one(candidates[i], scorer, config, table);
        }
    } else {
        // Exceptions cannot leave an OpenMP region; keep the lowest-index one.
        std::vector<std::exception_ptr> errors(n);
        const auto ni = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 256)
        for (std::int64_t i = 0; i < ni; ++i) {
            const auto k = static_cast<std::size_t>(i);
            try {
                slots[k] = gate_one(candidates[k], scorer, config, table);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
        for (const auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    std::vector<VerifiedEdge> edges;
    for (auto& s : slots) {
        if (s) {
            edges.push_back(*s);
        }
    }
    return edges;
}

} // namespace lexclust
