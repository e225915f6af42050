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

#include "lexclust/synthetic.h"

#include <algorithm>
#include <json.hpp>
#include <map>
#include <random>
#include <set>

#include "lexclust/error.h"
#include "lexclust/kmeans.h"

namespace lexclust {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double pair_hash01(std::size_t group, std::size_t i, std::size_t j) {
    std::uint64_t h = splitmix64(group);
    h = splitmix64(h ^ i);
    h = splitmix64(h ^ j);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::size_t group_index(const SyntheticSpec& spec, std::string_view name) {
    for (std::size_t g = 0; g < spec.concept_groups.size(); ++g) {
        if (spec.concept_groups[g].name == name) {
            return g;
        }
    }
    throw Error("synthetic spec: unknown group \"" + std::string(name) + "\"");
}

std::uint32_t majority_group(const SyntheticSpec& spec, const PolysemyTerm& p) {
    std::map<std::size_t, std::size_t> counts;
    for (const auto& w : p.wiring) {
        counts[group_index(spec, w.group)] += w.count;
    }
    std::size_t best = 0;
    std::size_t best_count = 0;
    bool tied = false;
    for (const auto& [g, c] : counts) {
        if (c > best_count) {
            best = g;
            best_count = c;
            tied = false;
        } else if (c == best_count) {
            tied = true;
        }
    }
    if (tied) {
        throw Error("synthetic spec: polysemy term \"" + p.term +
                    "\" has tied majority wiring");
    }
    return static_cast<std::uint32_t>(best);
}

} // namespace

void validate(const SyntheticSpec& spec) {
    std::set<std::string> names;
    std::map<std::string, std::size_t> owner;
    for (std::size_t g = 0; g < spec.concept_groups.size(); ++g) {
        const auto& group = spec.concept_groups[g];
        if (group.name.empty() || !names.insert(group.name).second) {
            throw Error("synthetic spec: empty or duplicate group name \"" + group.name + "\"");
        }
        if (group.terms.size() < 2) {
            throw Error("synthetic spec: group \"" + group.name + "\" needs at least two terms");
        }
        if (!(group.density >= 0.0 && group.density <= 1.0)) {
            throw Error("synthetic spec: group \"" + group.name + "\" density must be in [0, 1]");
        }
        for (const auto& t : group.terms) {
            if (!owner.emplace(t, g).second) {
                throw Error("synthetic spec: term \"" + t + "\" appears in more than one group");
            }
        }
    }
    std::set<std::string> poly_seen;
    for (const auto& p : spec.polysemy_terms) {
        if (owner.count(p.term) != 0) {
            throw Error("synthetic spec: polysemy term \"" + p.term + "\" is also a group member");
        }
        if (!poly_seen.insert(p.term).second) {
            throw Error("synthetic spec: duplicate polysemy term \"" + p.term + "\"");
        }
        std::set<std::size_t> groups;
        for (const auto& w : p.wiring) {
            const auto g = group_index(spec, w.group);
            if (!groups.insert(g).second) {
                throw Error("synthetic spec: polysemy term \"" + p.term + "\" wires group \"" +
                            w.group + "\" twice");
            }
            if (w.count < 1 || w.count > spec.concept_groups[g].terms.size()) {
                throw Error("synthetic spec: polysemy term \"" + p.term +
                            "\" has wiring count out of range for group \"" + w.group + "\"");
            }
        }
        if (groups.size() < 2) {
            throw Error("synthetic spec: polysemy term \"" + p.term +
                        "\" must be wired into at least two groups");
        }
        majority_group(spec, p);
    }
    for (const auto& link : spec.chain_links) {
        auto ia = owner.find(link.a);
        auto ib = owner.find(link.b);
        if (ia == owner.end() || ib == owner.end()) {
            throw Error("synthetic spec: chain link " + link.a + " - " + link.b +
                        " must join group members");
        }
        if (ia->second == ib->second) {
            throw Error("synthetic spec: chain link " + link.a + " - " + link.b +
                        " stays inside one group");
        }
    }
}

SyntheticSpec parse_synthetic_spec(std::string_view json_text) {
    SyntheticSpec spec;
    try {
        const auto doc = nlohmann::json::parse(json_text);
        spec.seed = doc.value("seed", std::uint64_t{0});
        for (const auto& g : doc.at("concept_groups")) {
            ConceptGroup group;
            group.name = g.at("name").get<std::string>();
            group.terms = g.at("terms").get<std::vector<std::string>>();
            group.density = g.value("density", 1.0);
            spec.concept_groups.push_back(std::move(group));
        }
        if (doc.contains("chain_links")) {
            for (const auto& l : doc["chain_links"]) {
                spec.chain_links.push_back({l.at("a").get<std::string>(),
                                            l.at("b").get<std::string>()});
            }
        }
        if (doc.contains("polysemy_terms")) {
            for (const auto& p : doc["polysemy_terms"]) {
                PolysemyTerm term;
                term.term = p.at("term").get<std::string>();
                for (const auto& w : p.at("wiring")) {
                    term.wiring.push_back({w.at("group").get<std::string>(),
                                           w.at("count").get<std::size_t>()});
                }
                spec.polysemy_terms.push_back(std::move(term));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("synthetic spec: ") + e.what());
    }
    validate(spec);
    return spec;
}

SyntheticSpec load_synthetic_spec(const std::filesystem::path& path) {
    try {
        return parse_synthetic_spec(read_file(path));
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
    validate(spec);
    SyntheticCorpus out;
    std::vector<std::string> terms;
    std::vector<std::size_t> group_start;
    for (std::size_t g = 0; g < spec.concept_groups.size(); ++g) {
        group_start.push_back(terms.size());
        for (const auto& t : spec.concept_groups[g].terms) {
            terms.push_back(t);
            out.gold.push_back(static_cast<std::uint32_t>(g));
        }
    }
    for (const auto& p : spec.polysemy_terms) {
        out.polysemy_ids.push_back(static_cast<TermId>(terms.size()));
        terms.push_back(p.term);
        out.gold.push_back(majority_group(spec, p));
    }
    out.table = TermTable::from_terms(std::move(terms));

    struct Planned {
        TermId a, b;
        bool bridge;
    };
    std::vector<Planned> planned;
    for (std::size_t g = 0; g < spec.concept_groups.size(); ++g) {
        const auto& group = spec.concept_groups[g];
        for (std::size_t i = 0; i < group.terms.size(); ++i) {
            for (std::size_t j = i + 1; j < group.terms.size(); ++j) {
                if (group.density >= 1.0 || pair_hash01(g, i, j) < group.density) {
                    planned.push_back({static_cast<TermId>(group_start[g] + i),
                                       static_cast<TermId>(group_start[g] + j), false});
                }
            }
        }
    }
    for (std::size_t k = 0; k < spec.polysemy_terms.size(); ++k) {
        for (const auto& w : spec.polysemy_terms[k].wiring) {
            const auto g = group_index(spec, w.group);
            for (std::size_t i = 0; i < w.count; ++i) {
                planned.push_back({static_cast<TermId>(group_start[g] + i), out.polysemy_ids[k],
                                   false});
            }
        }
    }
    for (const auto& link : spec.chain_links) {
        auto a = out.table.id(link.a);
        auto b = out.table.id(link.b);
        planned.push_back({std::min(a, b), std::max(a, b), true});
    }
    std::sort(planned.begin(), planned.end(), [](const Planned& x, const Planned& y) {
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    // Two declared links over the same pair collapse to one edge.
    planned.erase(std::unique(planned.begin(), planned.end(),
                              [](const Planned& x, const Planned& y) {
                                  return x.a == y.a && x.b == y.b;
                              }),
                  planned.end());

    std::mt19937_64 rng(spec.seed);
    for (const auto& p : planned) {
        const double u = uniform01(rng());
        double conf;
        if (p.bridge) {
            conf = kBridgeConfidenceMax - (kBridgeConfidenceMax - kBridgeConfidenceMin) * u;
            ++out.bridge_count;
        } else {
            conf = kIntraConfidenceMin + (1.0 - kIntraConfidenceMin) * u;
        }
        out.edges.push_back({p.a, p.b, conf});
    }
    return out;
}

SyntheticSpec random_synthetic_spec(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };
    SyntheticSpec spec;
    spec.seed = seed;
    const std::size_t groups = pick(2, 5);
    for (std::size_t g = 0; g < groups; ++g) {
        ConceptGroup group;
        group.name = "g" + std::to_string(g);
        const std::size_t n = pick(3, 8);
        for (std::size_t i = 0; i < n; ++i) {
            group.terms.push_back("g" + std::to_string(g) + "_" + std::to_string(i));
        }
        group.density = pick(0, 1) == 0 ? 1.0 : 0.5 + 0.5 * uniform01(rng());
        spec.concept_groups.push_back(std::move(group));
    }
    const std::size_t links = pick(0, 3);
    for (std::size_t k = 0; k < links; ++k) {
        const std::size_t ga = pick(0, groups - 1);
        std::size_t gb = pick(0, groups - 2);
        if (gb >= ga) {
            ++gb;
        }
        const auto& ta = spec.concept_groups[ga].terms;
        const auto& tb = spec.concept_groups[gb].terms;
        spec.chain_links.push_back({ta[pick(0, ta.size() - 1)], tb[pick(0, tb.size() - 1)]});
    }
    const std::size_t poly = pick(0, 2);
    for (std::size_t k = 0; k < poly; ++k) {
        const std::size_t ga = pick(0, groups - 1);
        std::size_t gb = pick(0, groups - 2);
        if (gb >= ga) {
            ++gb;
        }
        const std::size_t na = spec.concept_groups[ga].terms.size();
        const std::size_t nb = spec.concept_groups[gb].terms.size();
        std::size_t ca = pick(1, na);
        std::size_t cb = pick(1, nb);
        if (ca == cb) {
            if (ca < na) {
                ++ca;
            } else {
                --cb;
            }
        }
        spec.polysemy_terms.push_back(
            {"p" + std::to_string(k),
             {{spec.concept_groups[ga].name, ca}, {spec.concept_groups[gb].name, cb}}});
    }
    validate(spec);
    return spec;
}

} // namespace lexclust
