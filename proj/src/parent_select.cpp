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

#include "lexclust/parent_select.h"

#include <algorithm>
#include <cmath>
#include <exception>

#include "lexclust/error.h"
#include "lexclust/kernels.h"

namespace lexclust {

ParentDictionary::ParentDictionary(std::vector<std::string> terms)
    : terms_(std::make_move_iterator(terms.begin()), std::make_move_iterator(terms.end())) {}

ParentDictionary ParentDictionary::load(const std::filesystem::path& path) {
    std::vector<std::string> terms;
    for (auto& line : split_lines(read_file(path))) {
        if (!line.empty()) {
            terms.push_back(std::move(line));
        }
    }
    return ParentDictionary(std::move(terms));
}

bool ParentDictionary::contains(std::string_view term) const {
    return terms_.count(std::string(term)) > 0;
}

namespace {

void check_rows(std::span<const TermId> members, const EmbeddingMatrix& matrix) {
    for (auto m : members) {
        if (m >= matrix.count()) {
            throw Error("no embedding row for term " + std::to_string(m) + " (matrix has " +
                        std::to_string(matrix.count()) + " rows)");
        }
    }
}

// Stored rows are unit length only to float precision; renormalizing in
// double keeps symmetric ties (e.g. any two-member cluster) within the tie
// tolerance.
std::vector<double> unit_row(std::span<const float> row) {
    std::vector<double> u(row.begin(), row.end());
    const double inv = 1.0 / std::sqrt(kernels::norm2(row));
    for (auto& x : u) {
        x *= inv;
    }
    return u;
}

double dot_with(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        acc += a[j] * b[j];
    }
    return acc;
}

// members is sorted, so keeping the first member that is not beaten by more
// than the tie tolerance resolves ties to the smallest id.
TermId argmax_member(std::span<const TermId> members, const std::vector<double>& scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < members.size(); ++i) {
        if (scores[i] > scores[best] + kCosineTieTolerance) {
            best = i;
        }
    }
    return members[best];
}

} // namespace

std::vector<double> compute_centroid(std::span<const TermId> members,
                                     const EmbeddingMatrix& matrix) {
    if (members.empty()) {
        throw Error("compute_centroid: empty member set");
    }
    check_rows(members, matrix);
    std::vector<double> mean(matrix.dim(), 0.0);
    for (auto m : members) {
        const auto u = unit_row(matrix.row(m));
        for (std::size_t j = 0; j < u.size(); ++j) {
            mean[j] += u[j];
        }
    }
    double norm2 = 0.0;
    for (auto& v : mean) {
        v /= static_cast<double>(members.size());
        norm2 += v * v;
    }
    if (!(norm2 > 1e-24)) {
        throw Error("compute_centroid: member embeddings cancel to a zero-norm mean");
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : mean) {
        v *= inv;
    }
    return mean;
}

TermId select_parent(std::span<const TermId> members_in, const ParentDictionary& dict,
                     const EmbeddingMatrix& matrix, const TermTable& table) {
    if (members_in.size() < 2) {
        throw Error("select_parent: cluster needs at least two members");
    }
    std::vector<TermId> members(members_in.begin(), members_in.end());
    std::sort(members.begin(), members.end());
    check_rows(members, matrix);

    std::vector<TermId> pool;
    for (auto m : members) {
        if (dict.contains(table.term(m))) {
            pool.push_back(m);
        }
    }
    if (pool.size() == 1) {
        return pool.front();
    }
    if (pool.empty()) {
        pool = members;
    }

    std::vector<double> scores(pool.size());
    try {
        const auto centroid = compute_centroid(members, matrix);
        for (std::size_t i = 0; i < pool.size(); ++i) {
            scores[i] = dot_with(unit_row(matrix.row(pool[i])), centroid);
        }
    } catch (const Error&) {
        // Zero-norm centroid: rank by total cosine to the other members.
        for (std::size_t i = 0; i < pool.size(); ++i) {
            double total = 0.0;
            for (auto m : members) {
                if (m != pool[i]) {
                    total += dot_with(unit_row(matrix.row(pool[i])), unit_row(matrix.row(m)));
                }
            }
            scores[i] = total;
        }
    }
    return argmax_member(pool, scores);
}

std::vector<FinalCluster> assign_parents(const std::vector<std::vector<TermId>>& clusters,
                                         const ParentDictionary& dict,
                                         const EmbeddingMatrix& matrix, const TermTable& table,
                                         Backend backend) {
    std::vector<FinalCluster> out(clusters.size());
    auto one = [&](std::size_t i) {
        auto members = clusters[i];
        std::sort(members.begin(), members.end());
        out[i].cluster_id = static_cast<std::uint32_t>(i);
        out[i].parent = select_parent(members, dict, matrix, table);
        out[i].members = std::move(members);
    };
    if (backend == Backend::Serial) {
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            one(i);
        }
        return out;
    }
    std::vector<std::exception_ptr> errors(clusters.size());
    const auto n = static_cast<std::int64_t>(clusters.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            one(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

} // namespace lexclust
