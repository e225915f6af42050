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

// Serial reference vs OpenMP for the parallel kernels. Arg(0) is the serial
// path, Arg(1) the OpenMP path; both produce identical output.

#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lexclust/drift_cluster.h"
#include "lexclust/embedding_matrix.h"
#include "lexclust/ivf_index.h"
#include "lexclust/kernels.h"
#include "lexclust/relation_gate.h"
#include "lexclust/synthetic.h"
#include "lexclust/term_table.h"

using namespace lexclust;

namespace {

Backend backend_of(const benchmark::State& state) {
    return state.range(0) == 0 ? Backend::Serial : Backend::OpenMP;
}

std::vector<float> unit_vectors(std::size_t n, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<float> g;
    std::vector<float> v(n * dim);
    for (std::size_t i = 0; i < n; ++i) {
        double n2 = 0;
        for (std::size_t j = 0; j < dim; ++j) {
            v[i * dim + j] = g(rng);
            n2 += double(v[i * dim + j]) * v[i * dim + j];
        }
        const float inv = float(1.0 / std::sqrt(n2));
        for (std::size_t j = 0; j < dim; ++j) {
            v[i * dim + j] *= inv;
        }
    }
    return v;
}

constexpr std::size_t kCount = 10000;
constexpr std::size_t kDim = 32;

const EmbeddingMatrix& matrix() {
    static const auto m = EmbeddingMatrix::from_raw(kCount, kDim, unit_vectors(kCount, kDim, 7));
    return m;
}

const IvfIndex& index() {
    static const auto idx = IvfIndex::build(matrix(), IvfBuildParams{});
    return idx;
}

void BM_Assign(benchmark::State& state) {
    const auto centroids = unit_vectors(400, kDim, 11);
    const auto& m = matrix();
    for (auto _ : state) {
        auto a = kernels::assign(m.data(), kDim, centroids, backend_of(state));
        benchmark::DoNotOptimize(a.cell.data());
    }
}
BENCHMARK(BM_Assign)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SearchBatch(benchmark::State& state) {
    const auto queries = unit_vectors(1000, kDim, 13);
    SearchParams params{100, 8, 0.2};
    const auto& idx = index();
    for (auto _ : state) {
        auto r = idx.search_batch(queries, params, backend_of(state));
        benchmark::DoNotOptimize(r.data());
    }
}
BENCHMARK(BM_SearchBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Gate(benchmark::State& state) {
    constexpr std::size_t n = 2000;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back("t" + std::to_string(i));
    }
    const auto table = TermTable::from_terms(names);
    TableScorer scorer;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.5, 1.0);
    std::vector<ScoredCandidate> cands;
    for (TermId a = 0; a + 1 < n; ++a) {
        for (TermId b = a + 1; b < std::min<TermId>(n, a + 10); ++b) {
            cands.push_back({a, b, 0.8});
            scorer.set(names[a], names[b], {RelationLabel::Synonym, u(rng)});
            scorer.set(names[b], names[a], {RelationLabel::Synonym, u(rng)});
        }
    }
    for (auto _ : state) {
        auto e = gate_candidates(cands, scorer, GateConfig{}, table, backend_of(state));
        benchmark::DoNotOptimize(e.data());
    }
}
BENCHMARK(BM_Gate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Reduce(benchmark::State& state) {
    SyntheticSpec spec;
    spec.seed = 5;
    for (int g = 0; g < 60; ++g) {
        ConceptGroup group{"g" + std::to_string(g), {}, 0.7};
        for (int i = 0; i < 12; ++i) {
            group.terms.push_back("g" + std::to_string(g) + "_" + std::to_string(i));
        }
        spec.concept_groups.push_back(group);
    }
    const auto corpus = generate_synthetic(spec);
    const auto n = corpus.table.size();
    const auto adj = AdjacencyMap::build(corpus.edges, n);
    const auto soft = expand(corpus.edges, adj, ClusterConfig{});
    for (auto _ : state) {
        auto c = reduce(soft, adj, backend_of(state));
        benchmark::DoNotOptimize(c.data());
    }
}
BENCHMARK(BM_Reduce)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
