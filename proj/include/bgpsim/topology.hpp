#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bgpsim/errors.hpp"

namespace bgpsim {

/// AS numbers are plain 32-bit integers; zero is rejected at every parse
/// boundary so a valid graph never contains it.
using ASNumber = std::uint32_t;

/// Role of the *neighbor* relative to the local AS.
enum class Relationship : std::uint8_t { Customer = 0, Peer = 1, Provider = 2 };

const char* to_string(Relationship rel);

enum class DeploymentType : std::uint8_t {
    InputClique = 0,
    Stubs = 1,
    Multihomed = 2,
    NoDeploymentType = 3,
};

const char* to_string(DeploymentType d);
DeploymentType deployment_from_string(std::string_view name); // throws ConfigError

/** Immutable business-relationship graph. Nodes are stored sorted by ASN and
 *  addressed by dense index, so "iterate indices ascending" doubles as
 *  "iterate ASNs ascending" — every consumer gets determinism for free.
 *  Adjacency lists hold indices and are sorted. */
class ASGraph {
public:
    std::size_t node_count() const { return asns_.size(); }
    bool contains(ASNumber asn) const { return index_.count(asn) != 0; }

    /// Dense index for an ASN; throws TopologyError when absent.
    std::uint32_t index_of(ASNumber asn) const;
    ASNumber asn_at(std::uint32_t idx) const { return asns_[idx]; }
    const std::vector<ASNumber>& asns() const { return asns_; }

    const std::vector<std::uint32_t>& customers(std::uint32_t idx) const { return customers_[idx]; }
    const std::vector<std::uint32_t>& peers(std::uint32_t idx) const { return peers_[idx]; }
    const std::vector<std::uint32_t>& providers(std::uint32_t idx) const { return providers_[idx]; }

    /// 0 for ASes with no customers, else 1 + max over customer ranks.
    std::uint32_t rank(std::uint32_t idx) const { return rank_[idx]; }
    std::uint32_t max_rank() const { return max_rank_; }

    /// All node indices ordered by (rank ascending, ASN ascending): the
    /// canonical sweep order for propagation.
    const std::vector<std::uint32_t>& up_order() const { return up_order_; }

    const std::vector<ASNumber>& input_clique() const { return clique_; }

    std::size_t p2c_edge_count() const { return p2c_edges_; }
    std::size_t p2p_edge_count() const { return p2p_edges_; }

private:
    friend class ASGraphBuilder;
    ASGraph() = default;

    std::vector<ASNumber> asns_; // sorted ascending
    std::unordered_map<ASNumber, std::uint32_t> index_;
    std::vector<std::vector<std::uint32_t>> customers_;
    std::vector<std::vector<std::uint32_t>> peers_;
    std::vector<std::vector<std::uint32_t>> providers_;
    std::vector<std::uint32_t> rank_;
    std::vector<std::uint32_t> up_order_;
    std::vector<ASNumber> clique_;
    std::uint32_t max_rank_ = 0;
    std::size_t p2c_edges_ = 0;
    std::size_t p2p_edges_ = 0;
};

/** Accumulates relationship edges, then validates and freezes them into an
 *  ASGraph. Validation covers: nonzero ASNs, no self loops, no duplicate or
 *  conflicting edges, provider/customer acyclicity (with the offending ASes
 *  named), and clique members being present and pairwise peers. */
class ASGraphBuilder {
public:
    void add_provider_customer(ASNumber provider, ASNumber customer);
    void add_peers(ASNumber a, ASNumber b);
    void set_input_clique(std::vector<ASNumber> clique);

    ASGraph build();

private:
    void note_as(ASNumber asn);
    void check_new_edge(ASNumber a, ASNumber b, const char* kind);

    std::vector<std::pair<ASNumber, ASNumber>> p2c_; // provider, customer
    std::vector<std::pair<ASNumber, ASNumber>> p2p_;
    std::vector<ASNumber> clique_;
    std::vector<ASNumber> seen_order_;
    std::unordered_map<std::uint64_t, char> edge_kind_; // packed pair -> '-'/'='
};

/** Parses CAIDA serial-2 relationship text: `provider|customer|-1` and
 *  `peer|peer|0` lines (a trailing `|source` field is tolerated), `#`
 *  comments, and an optional `# input clique: A B C` header. Parse errors
 *  carry 1-based line numbers. */
ASGraph parse_caida(std::string_view text);

/// Inverse of parse_caida, normalized: clique header first, then sorted p2c
/// lines, then sorted p2p lines (each peer pair emitted once, low ASN first).
std::string serialize_caida(const ASGraph& graph);

/** Members of one deployment category, sorted by ASN.
 *  - Stubs: no customers, no peers, exactly one provider.
 *  - Multihomed: no customers, and two+ providers or at least one peer.
 *  - InputClique: the topology header's clique, or `clique_override` when
 *    non-empty; requesting it with neither present is a ConfigError.
 *  - NoDeploymentType: every AS. */
std::vector<ASNumber> deployment_set(const ASGraph& graph, DeploymentType type,
                                     std::span<const ASNumber> clique_override = {});

/// All ASes reachable by walking provider->customer edges from `asn`,
/// including `asn` itself. Sorted by ASN.
std::vector<ASNumber> customer_cone(const ASGraph& graph, ASNumber asn);

/// Node/edge/clique counts as a JSON object string (stable key order).
std::string graph_stats_json(const ASGraph& graph, bool include_deployment_sizes);

} // namespace bgpsim
