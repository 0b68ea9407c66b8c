#pragma once

// Shared graph fixtures for tests: a deterministic random-topology generator
// small enough for brute-force oracles, plus equality/oracle helpers that
// deliberately use different algorithms than the library.

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "bgpsim/rng.hpp"
#include "bgpsim/topology.hpp"

namespace testsupport {

/** Random connected relationship graph with 3..max_nodes ASes. Provider
 *  edges always run from a lower ASN to a higher one, which keeps the
 *  provider/customer digraph acyclic by construction. Regenerates until at
 *  least two edge ASes (stubs or multihomed) exist so attack scenarios can
 *  draw a victim and an attacker. */
inline bgpsim::ASGraph random_graph(bgpsim::Rng& rng, std::uint64_t max_nodes = 30) {
    for (;;) {
        const std::uint64_t n = 3 + rng.below(max_nodes - 2);
        bgpsim::ASGraphBuilder builder;
        std::set<std::pair<std::uint32_t, std::uint32_t>> used;
        auto add_edge = [&](std::uint64_t low, std::uint64_t high, bool p2c) {
            if (!used.insert({low, high}).second) return;
            if (p2c)
                builder.add_provider_customer(static_cast<bgpsim::ASNumber>(low + 1),
                                              static_cast<bgpsim::ASNumber>(high + 1));
            else
                builder.add_peers(static_cast<bgpsim::ASNumber>(low + 1),
                                  static_cast<bgpsim::ASNumber>(high + 1));
        };
        // spanning attachment keeps the graph connected
        for (std::uint64_t i = 1; i < n; ++i)
            add_edge(rng.below(i), i, rng.unit() < 0.75);
        // extra cross links
        const std::uint64_t extra = rng.below(n);
        for (std::uint64_t e = 0; e < extra; ++e) {
            std::uint64_t a = rng.below(n), b = rng.below(n);
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            add_edge(a, b, rng.unit() < 0.6);
        }
        bgpsim::ASGraph g = builder.build();
        std::size_t edge_ases =
            bgpsim::deployment_set(g, bgpsim::DeploymentType::Stubs).size() +
            bgpsim::deployment_set(g, bgpsim::DeploymentType::Multihomed).size();
        if (edge_ases >= 2) return g;
    }
}

/// Structural equality: same ASes, same neighbor sets per role, same clique.
inline bool same_graph(const bgpsim::ASGraph& a, const bgpsim::ASGraph& b) {
    if (a.asns() != b.asns() || a.input_clique() != b.input_clique()) return false;
    auto asns_of = [](const bgpsim::ASGraph& g, const std::vector<std::uint32_t>& idxs) {
        std::vector<bgpsim::ASNumber> out;
        for (auto i : idxs) out.push_back(g.asn_at(i));
        return out;
    };
    for (std::uint32_t i = 0; i < a.node_count(); ++i) {
        const std::uint32_t j = b.index_of(a.asn_at(i));
        if (asns_of(a, a.customers(i)) != asns_of(b, b.customers(j))) return false;
        if (asns_of(a, a.peers(i)) != asns_of(b, b.peers(j))) return false;
        if (asns_of(a, a.providers(i)) != asns_of(b, b.providers(j))) return false;
    }
    return true;
}

/** Customer-cone oracle by transitive-closure relaxation over the full
 *  boolean matrix (vs. the library's DFS). O(n^4); fine for oracle-sized
 *  graphs. */
inline std::vector<bgpsim::ASNumber> cone_oracle(const bgpsim::ASGraph& g, bgpsim::ASNumber root) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::uint32_t u = 0; u < n; ++u) {
        reach[u][u] = true;
        for (std::uint32_t c : g.customers(u)) reach[u][c] = true;
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (std::uint32_t u = 0; u < n; ++u)
            for (std::uint32_t w = 0; w < n; ++w)
                if (reach[u][w])
                    for (std::uint32_t v = 0; v < n; ++v)
                        if (reach[w][v] && !reach[u][v]) {
                            reach[u][v] = true;
                            changed = true;
                        }
    }
    std::vector<bgpsim::ASNumber> cone;
    const std::uint32_t r = g.index_of(root);
    for (std::uint32_t v = 0; v < n; ++v)
        if (reach[r][v]) cone.push_back(g.asn_at(v));
    return cone;
}

} // namespace testsupport
