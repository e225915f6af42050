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

#include "lexclust/artifacts.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <json.hpp>

#include "lexclust/error.h"

namespace lexclust {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string_view> split_on(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

template <typename T>
T parse_number(std::string_view text, const std::string& where) {
    T v{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(where + ": cannot parse \"" + std::string(text) + "\"");
    }
    return v;
}

// Rows of a TSV file with the expected header removed.
std::vector<std::vector<std::string_view>> read_rows(const std::string& contents,
                                                     std::string_view header,
                                                     std::size_t columns,
                                                     const std::filesystem::path& path,
                                                     std::vector<std::string>& storage) {
    storage = split_lines(contents);
    if (storage.empty() || storage.front() != header) {
        throw Error(path.string() + ": missing header \"" + std::string(header) + "\"");
    }
    std::vector<std::vector<std::string_view>> rows;
    for (std::size_t i = 1; i < storage.size(); ++i) {
        auto fields = split_on(storage[i], '\t');
        if (fields.size() != columns) {
            throw Error(path.string() + ":" + std::to_string(i + 1) + ": expected " +
                        std::to_string(columns) + " columns");
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

std::string where(const std::filesystem::path& path, std::size_t row) {
    return path.string() + ":" + std::to_string(row + 2);
}

} // namespace

std::string format_fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

void write_candidates_tsv(const std::filesystem::path& path,
                          std::span<const ScoredCandidate> candidates) {
    std::string out = "a_id\tb_id\tcosine\n";
    for (const auto& c : candidates) {
        out += std::to_string(c.a) + '\t' + std::to_string(c.b) + '\t' + format_fixed6(c.cosine) +
               '\n';
    }
    write_file(path, out);
}

std::vector<ScoredCandidate> read_candidates_tsv(const std::filesystem::path& path) {
    std::vector<std::string> storage;
    const auto rows = read_rows(read_file(path), "a_id\tb_id\tcosine", 3, path, storage);
    std::vector<ScoredCandidate> out;
    out.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.push_back({parse_number<TermId>(rows[i][0], where(path, i)),
                       parse_number<TermId>(rows[i][1], where(path, i)),
                       parse_number<double>(rows[i][2], where(path, i))});
    }
    return out;
}

void write_edges_tsv(const std::filesystem::path& path, std::span<const VerifiedEdge> edges) {
    std::string out = "a_id\tb_id\tconfidence\n";
    for (const auto& e : edges) {
        out += std::to_string(e.a) + '\t' + std::to_string(e.b) + '\t' +
               format_fixed6(e.confidence) + '\n';
    }
    write_file(path, out);
}

std::vector<VerifiedEdge> read_edges_tsv(const std::filesystem::path& path) {
    std::vector<std::string> storage;
    const auto rows = read_rows(read_file(path), "a_id\tb_id\tconfidence", 3, path, storage);
    std::vector<VerifiedEdge> out;
    out.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.push_back({parse_number<TermId>(rows[i][0], where(path, i)),
                       parse_number<TermId>(rows[i][1], where(path, i)),
                       parse_number<double>(rows[i][2], where(path, i))});
    }
    return out;
}

void write_clusters_tsv(const std::filesystem::path& path,
                        const std::vector<std::vector<TermId>>& clusters) {
    std::string out = "cluster_id\tmember_ids\n";
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        out += std::to_string(c) + '\t';
        for (std::size_t i = 0; i < clusters[c].size(); ++i) {
            if (i > 0) {
                out += ' ';
            }
            out += std::to_string(clusters[c][i]);
        }
        out += '\n';
    }
    write_file(path, out);
}

std::vector<std::vector<TermId>> read_clusters_tsv(const std::filesystem::path& path) {
    std::vector<std::string> storage;
    const auto rows = read_rows(read_file(path), "cluster_id\tmember_ids", 2, path, storage);
    std::vector<std::vector<TermId>> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (parse_number<std::size_t>(rows[i][0], where(path, i)) != i) {
            throw Error(where(path, i) + ": cluster ids must be dense and in order");
        }
        std::vector<TermId> members;
        for (auto f : split_on(rows[i][1], ' ')) {
            members.push_back(parse_number<TermId>(f, where(path, i)));
        }
        out.push_back(std::move(members));
    }
    return out;
}

void write_parents_tsv(const std::filesystem::path& path, std::span<const TermId> parents) {
    std::string out = "cluster_id\tparent_id\n";
    for (std::size_t c = 0; c < parents.size(); ++c) {
        out += std::to_string(c) + '\t' + std::to_string(parents[c]) + '\n';
    }
    write_file(path, out);
}

std::vector<TermId> read_parents_tsv(const std::filesystem::path& path) {
    std::vector<std::string> storage;
    const auto rows = read_rows(read_file(path), "cluster_id\tparent_id", 2, path, storage);
    std::vector<TermId> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (parse_number<std::size_t>(rows[i][0], where(path, i)) != i) {
            throw Error(where(path, i) + ": cluster ids must be dense and in order");
        }
        out.push_back(parse_number<TermId>(rows[i][1], where(path, i)));
    }
    return out;
}

std::string clusters_to_json(std::span<const FinalCluster> clusters, const TermTable& table) {
    if (clusters.empty()) {
        return "[]\n";
    }
    std::vector<const FinalCluster*> ordered;
    for (const auto& c : clusters) {
        ordered.push_back(&c);
    }
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](auto* x, auto* y) { return x->cluster_id < y->cluster_id; });
    std::string out = "[\n";
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        const auto& c = *ordered[i];
        auto members = c.members;
        std::sort(members.begin(), members.end());
        ordered_json obj;
        obj["cluster_id"] = c.cluster_id;
        obj["parent"] = table.term(c.parent);
        obj["members"] = ordered_json::array();
        for (auto m : members) {
            obj["members"].push_back(table.term(m));
        }
        out += obj.dump();
        out += i + 1 < ordered.size() ? ",\n" : "\n";
    }
    out += "]\n";
    return out;
}

void emit_clusters(std::span<const FinalCluster> clusters, const TermTable& table,
                   const std::filesystem::path& path) {
    for (const auto& c : clusters) {
        if (std::find(c.members.begin(), c.members.end(), c.parent) == c.members.end()) {
            throw Error("emit: parent of cluster " + std::to_string(c.cluster_id) +
                        " is not a member");
        }
    }
    write_file(path, clusters_to_json(clusters, table));
}

std::string soft_state_to_json(const SoftClusterState& state, const TermTable& table) {
    ordered_json doc;
    doc["clusters"] = ordered_json::array();
    for (std::size_t c = 0; c < state.clusters.size(); ++c) {
        ordered_json obj;
        obj["cluster_id"] = c;
        obj["members"] = ordered_json::array();
        for (auto m : state.clusters[c]) {
            obj["members"].push_back(table.term(m));
        }
        doc["clusters"].push_back(std::move(obj));
    }
    doc["multi_members"] = ordered_json::array();
    for (std::size_t t = 0; t < state.membership.size(); ++t) {
        if (state.membership[t].size() > 1) {
            ordered_json obj;
            obj["term"] = table.term(static_cast<TermId>(t));
            obj["cluster_ids"] = state.membership[t];
            doc["multi_members"].push_back(std::move(obj));
        }
    }
    return doc.dump(2) + "\n";
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string file_digest(const std::filesystem::path& path) {
    return "fnv1a64:" + hex64(fnv1a64(read_file(path)));
}

} // namespace lexclust
