#include "bgpsim/topology.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "json.hpp"

namespace bgpsim {

const char* to_string(Relationship rel) {
    switch (rel) {
        case Relationship::Customer: return "Customer";
        case Relationship::Peer: return "Peer";
        case Relationship::Provider: return "Provider";
    }
    return "?";
}

const char* to_string(DeploymentType d) {
    switch (d) {
        case DeploymentType::InputClique: return "InputClique";
        case DeploymentType::Stubs: return "Stubs";
        case DeploymentType::Multihomed: return "Multihomed";
        case DeploymentType::NoDeploymentType: return "NoDeploymentType";
    }
    return "?";
}

DeploymentType deployment_from_string(std::string_view name) {
    if (name == "InputClique") return DeploymentType::InputClique;
    if (name == "Stubs") return DeploymentType::Stubs;
    if (name == "Multihomed") return DeploymentType::Multihomed;
    if (name == "NoDeploymentType") return DeploymentType::NoDeploymentType;
    throw ConfigError("unknown deployment type '" + std::string(name) +
                      "' (expected InputClique, Stubs, Multihomed or NoDeploymentType)");
}

std::uint32_t ASGraph::index_of(ASNumber asn) const {
    auto it = index_.find(asn);
    if (it == index_.end())
        throw TopologyError("AS " + std::to_string(asn) + " not present in topology");
    return it->second;
}

// --- builder -----------------------------------------------------------

namespace {
std::uint64_t pack_pair(ASNumber a, ASNumber b) {
    if (a > b) std::swap(a, b);
    return static_cast<std::uint64_t>(a) << 32 | b;
}
} // namespace

void ASGraphBuilder::note_as(ASNumber asn) {
    if (asn == 0) throw TopologyError("AS number 0 is not allowed");
    seen_order_.push_back(asn);
}

void ASGraphBuilder::check_new_edge(ASNumber a, ASNumber b, const char* kind) {
    if (a == b) throw TopologyError("self loop on AS " + std::to_string(a));
    auto [it, inserted] = edge_kind_.try_emplace(pack_pair(a, b), kind[0]);
    if (!inserted)
        throw TopologyError("duplicate or conflicting edge between AS " + std::to_string(a) +
                            " and AS " + std::to_string(b));
}

void ASGraphBuilder::add_provider_customer(ASNumber provider, ASNumber customer) {
    note_as(provider);
    note_as(customer);
    check_new_edge(provider, customer, "-");
    p2c_.emplace_back(provider, customer);
}

void ASGraphBuilder::add_peers(ASNumber a, ASNumber b) {
    note_as(a);
    note_as(b);
    check_new_edge(a, b, "=");
    p2p_.emplace_back(a, b);
}

void ASGraphBuilder::set_input_clique(std::vector<ASNumber> clique) {
    for (ASNumber asn : clique)
        if (asn == 0) throw TopologyError("AS number 0 is not allowed in the input clique");
    std::sort(clique.begin(), clique.end());
    clique.erase(std::unique(clique.begin(), clique.end()), clique.end());
    clique_ = std::move(clique);
}

ASGraph ASGraphBuilder::build() {
    ASGraph g;
    g.asns_ = seen_order_;
    std::sort(g.asns_.begin(), g.asns_.end());
    g.asns_.erase(std::unique(g.asns_.begin(), g.asns_.end()), g.asns_.end());
    if (g.asns_.empty()) throw TopologyError("topology has no ASes");

    g.index_.reserve(g.asns_.size());
    for (std::uint32_t i = 0; i < g.asns_.size(); ++i) g.index_[g.asns_[i]] = i;

    const std::size_t n = g.asns_.size();
    g.customers_.resize(n);
    g.peers_.resize(n);
    g.providers_.resize(n);
    for (auto [p, c] : p2c_) {
        const std::uint32_t pi = g.index_[p], ci = g.index_[c];
        g.customers_[pi].push_back(ci);
        g.providers_[ci].push_back(pi);
    }
    for (auto [a, b] : p2p_) {
        const std::uint32_t ai = g.index_[a], bi = g.index_[b];
        g.peers_[ai].push_back(bi);
        g.peers_[bi].push_back(ai);
    }
    for (auto* lists : {&g.customers_, &g.peers_, &g.providers_})
        for (auto& v : *lists) std::sort(v.begin(), v.end());
    g.p2c_edges_ = p2c_.size();
    g.p2p_edges_ = p2p_.size();

    // Propagation ranks by Kahn's algorithm over customer->provider edges:
    // rank 0 = no customers, otherwise 1 + max over customers. Nodes left
    // unprocessed sit on a provider/customer cycle.
    g.rank_.assign(n, 0);
    std::vector<std::uint32_t> pending(n);
    for (std::uint32_t i = 0; i < n; ++i) pending[i] = static_cast<std::uint32_t>(g.customers_[i].size());
    std::vector<std::uint32_t> queue;
    queue.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i)
        if (pending[i] == 0) queue.push_back(i);
    std::size_t processed = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::uint32_t u = queue[head];
        ++processed;
        for (std::uint32_t p : g.providers_[u]) {
            g.rank_[p] = std::max(g.rank_[p], g.rank_[u] + 1);
            if (--pending[p] == 0) queue.push_back(p);
        }
    }
    if (processed != n) {
        std::string names;
        int shown = 0;
        for (std::uint32_t i = 0; i < n && shown < 5; ++i) {
            if (pending[i] == 0) continue;
            if (shown++) names += ", ";
            names += std::to_string(g.asns_[i]);
        }
        throw TopologyError("provider/customer cycle involving AS " + names);
    }
    g.max_rank_ = 0;
    for (std::uint32_t r : g.rank_) g.max_rank_ = std::max(g.max_rank_, r);

    // ASN order is index order, so a stable sort by rank yields
    // (rank asc, ASN asc).
    g.up_order_.resize(n);
    std::iota(g.up_order_.begin(), g.up_order_.end(), 0u);
    std::stable_sort(g.up_order_.begin(), g.up_order_.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return g.rank_[a] < g.rank_[b]; });

    for (ASNumber asn : clique_) {
        if (!g.index_.count(asn))
            throw TopologyError("input clique AS " + std::to_string(asn) +
                                " does not appear in any relationship line");
    }
    for (std::size_t i = 0; i < clique_.size(); ++i) {
        const auto& peers = g.peers_[g.index_[clique_[i]]];
        for (std::size_t j = i + 1; j < clique_.size(); ++j) {
            if (!std::binary_search(peers.begin(), peers.end(), g.index_[clique_[j]]))
                throw TopologyError("input clique ASes " + std::to_string(clique_[i]) + " and " +
                                    std::to_string(clique_[j]) + " are not peers");
        }
    }
    g.clique_ = std::move(clique_);
    return g;
}

// --- serial-2 text ------------------------------------------------------

namespace {

bool parse_asn(std::string_view field, ASNumber& out) {
    std::uint64_t v = 0;
    auto [next, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || next != field.data() + field.size()) return false;
    if (v == 0 || v > 0xffffffffULL) return false;
    out = static_cast<ASNumber>(v);
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what) {
    throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

} // namespace

ASGraph parse_caida(std::string_view text) {
    ASGraphBuilder builder;
    bool saw_clique = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '#') {
            std::string_view body = trim(line.substr(1));
            if (!body.starts_with("input clique")) continue; // ordinary comment
            if (saw_clique) fail_line(line_no, "second input clique header");
            body.remove_prefix(std::string_view("input clique").size());
            body = trim(body);
            if (body.starts_with(":")) body = trim(body.substr(1));
            std::vector<ASNumber> clique;
            std::size_t i = 0;
            while (i < body.size()) {
                while (i < body.size() && (body[i] == ' ' || body[i] == '\t' || body[i] == '|')) ++i;
                std::size_t j = i;
                while (j < body.size() && body[j] != ' ' && body[j] != '\t' && body[j] != '|') ++j;
                if (j > i) {
                    ASNumber asn = 0;
                    if (!parse_asn(body.substr(i, j - i), asn))
                        fail_line(line_no, "bad AS number '" + std::string(body.substr(i, j - i)) +
                                               "' in input clique header");
                    clique.push_back(asn);
                }
                i = j;
            }
            builder.set_input_clique(std::move(clique));
            saw_clique = true;
            continue;
        }

        // relationship line: a|b|rel with an optional trailing |source field
        std::string_view fields[4];
        int nfields = 0;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == '|') {
                if (nfields == 4) fail_line(line_no, "too many fields");
                fields[nfields++] = trim(line.substr(start, i - start));
                start = i + 1;
            }
        }
        if (nfields < 3) fail_line(line_no, "expected provider|customer|-1 or peer|peer|0");
        ASNumber a = 0, b = 0;
        if (!parse_asn(fields[0], a)) fail_line(line_no, "bad AS number '" + std::string(fields[0]) + "'");
        if (!parse_asn(fields[1], b)) fail_line(line_no, "bad AS number '" + std::string(fields[1]) + "'");
        try {
            if (fields[2] == "-1") {
                builder.add_provider_customer(a, b);
            } else if (fields[2] == "0") {
                builder.add_peers(a, b);
            } else {
                fail_line(line_no, "bad relationship '" + std::string(fields[2]) + "' (expected -1 or 0)");
            }
        } catch (const TopologyError& e) {
            fail_line(line_no, e.what());
        }
    }
    try {
        return builder.build();
    } catch (const TopologyError&) {
        throw; // structural errors are not tied to a line
    }
}

std::string serialize_caida(const ASGraph& g) {
    std::string out;
    if (!g.input_clique().empty()) {
        out += "# input clique:";
        for (ASNumber asn : g.input_clique()) {
            out += ' ';
            out += std::to_string(asn);
        }
        out += '\n';
    }
    const std::size_t n = g.node_count();
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t c : g.customers(i))
            out += std::to_string(g.asn_at(i)) + "|" + std::to_string(g.asn_at(c)) + "|-1\n";
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t p : g.peers(i))
            if (i < p) out += std::to_string(g.asn_at(i)) + "|" + std::to_string(g.asn_at(p)) + "|0\n";
    return out;
}

// --- derived sets -------------------------------------------------------

std::vector<ASNumber> deployment_set(const ASGraph& g, DeploymentType type,
                                     std::span<const ASNumber> clique_override) {
    std::vector<ASNumber> out;
    switch (type) {
        case DeploymentType::InputClique: {
            if (!clique_override.empty()) {
                out.assign(clique_override.begin(), clique_override.end());
                for (ASNumber asn : out)
                    if (!g.contains(asn))
                        throw ConfigError("input clique override AS " + std::to_string(asn) +
                                          " not present in topology");
                std::sort(out.begin(), out.end());
                out.erase(std::unique(out.begin(), out.end()), out.end());
            } else {
                out = g.input_clique();
            }
            if (out.empty())
                throw ConfigError("InputClique deployment requested but the topology has no input "
                                  "clique header and no override was configured");
            return out;
        }
        case DeploymentType::Stubs:
        case DeploymentType::Multihomed: {
            for (std::uint32_t i = 0; i < g.node_count(); ++i) {
                if (!g.customers(i).empty()) continue;
                const std::size_t np = g.providers(i).size(), npeer = g.peers(i).size();
                const bool stub = npeer == 0 && np == 1;
                const bool multihomed = !stub && (np >= 2 || npeer >= 1);
                if ((type == DeploymentType::Stubs) ? stub : multihomed) out.push_back(g.asn_at(i));
            }
            return out;
        }
        case DeploymentType::NoDeploymentType:
            return g.asns();
    }
    throw ConfigError("bad deployment type");
}

std::vector<ASNumber> customer_cone(const ASGraph& g, ASNumber asn) {
    std::vector<bool> seen(g.node_count(), false);
    std::vector<std::uint32_t> stack{g.index_of(asn)};
    seen[stack[0]] = true;
    std::vector<ASNumber> cone;
    while (!stack.empty()) {
        const std::uint32_t u = stack.back();
        stack.pop_back();
        cone.push_back(g.asn_at(u));
        for (std::uint32_t c : g.customers(u)) {
            if (!seen[c]) {
                seen[c] = true;
                stack.push_back(c);
            }
        }
    }
    std::sort(cone.begin(), cone.end());
    return cone;
}

std::string graph_stats_json(const ASGraph& g, bool include_deployment_sizes) {
    nlohmann::ordered_json j;
    j["nodes"] = g.node_count();
    j["p2c_edges"] = g.p2c_edge_count();
    j["p2p_edges"] = g.p2p_edge_count();
    j["input_clique_size"] = g.input_clique().size();
    if (include_deployment_sizes) {
        j["stubs"] = deployment_set(g, DeploymentType::Stubs).size();
        j["multihomed"] = deployment_set(g, DeploymentType::Multihomed).size();
        j["no_deployment_type"] = g.node_count();
    }
    return j.dump(2) + "\n";
}

} // namespace bgpsim
