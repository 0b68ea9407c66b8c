#include "bgpsim/attestation.hpp"

#include <algorithm>

#include "json.hpp"

#include "bgpsim/errors.hpp"

namespace bgpsim {

const char* to_string(ValidityState v) {
    switch (v) {
        case ValidityState::Unknown: return "Unknown";
        case ValidityState::Valid: return "Valid";
        case ValidityState::Invalid: return "Invalid";
    }
    return "?";
}

void RoaTable::add(const ROA& roa) {
    if (roa.origin == 0) throw ConfigError("ROA origin must be a nonzero AS number");
    if (roa.max_length < roa.prefix.length || roa.max_length > 32)
        throw ConfigError("ROA max_length " + std::to_string(roa.max_length) + " out of range for " +
                          roa.prefix.str());
    entries_.push_back(roa);
}

ValidityState RoaTable::validity(const Prefix& prefix, ASNumber origin) const {
    bool covered = false;
    for (const ROA& roa : entries_) {
        if (!roa.prefix.covers(prefix)) continue;
        covered = true;
        if (roa.origin == origin && prefix.length <= roa.max_length) return ValidityState::Valid;
    }
    return covered ? ValidityState::Invalid : ValidityState::Unknown;
}

void AspaTable::add(ASNumber customer, std::vector<ASNumber> providers) {
    if (customer == 0) throw ConfigError("ASPA customer must be a nonzero AS number");
    std::sort(providers.begin(), providers.end());
    providers.erase(std::unique(providers.begin(), providers.end()), providers.end());
    if (!records_.emplace(customer, std::move(providers)).second)
        throw ConfigError("duplicate ASPA record for AS " + std::to_string(customer));
}

const std::vector<ASNumber>* AspaTable::providers_of(ASNumber customer) const {
    auto it = records_.find(customer);
    return it == records_.end() ? nullptr : &it->second;
}

std::vector<ASNumber> AspaTable::customers() const {
    std::vector<ASNumber> out;
    out.reserve(records_.size());
    for (const auto& [customer, providers] : records_) out.push_back(customer);
    std::sort(out.begin(), out.end());
    return out;
}

HopAttestation hop_attestation(const AspaTable& table, ASNumber customer, ASNumber candidate) {
    const std::vector<ASNumber>* providers = table.providers_of(customer);
    if (!providers) return HopAttestation::NoAttestation;
    return std::binary_search(providers->begin(), providers->end(), candidate)
               ? HopAttestation::ProviderPlus
               : HopAttestation::NotProviderPlus;
}

ValidityState aspa_validity(std::span<const ASNumber> path, Relationship from_rel,
                            const AspaTable& table) {
    // Work in origin order: q[0] = origin, q[m] = the sending neighbor.
    // Link i joins q[i-1] (origin side) and q[i]; on an up-ramp q[i-1] is the
    // customer and must attest q[i], on a down-ramp the roles flip.
    const std::size_t n = path.size();
    const std::size_t m = n - 1;
    auto q = [&](std::size_t i) { return path[n - 1 - i]; };
    auto up = [&](std::size_t i) { return hop_attestation(table, q(i - 1), q(i)); };
    auto down = [&](std::size_t i) { return hop_attestation(table, q(i), q(i - 1)); };

    if (from_rel != Relationship::Provider) {
        // Route arrived from a customer or lateral peer: the whole path must
        // climb. One hop off the ramp is proof of a leak or forgery.
        bool all_strict = true;
        for (std::size_t i = 1; i <= m; ++i) {
            const HopAttestation h = up(i);
            if (h == HopAttestation::NotProviderPlus) return ValidityState::Invalid;
            if (h != HopAttestation::ProviderPlus) all_strict = false;
        }
        return all_strict ? ValidityState::Valid : ValidityState::Unknown;
    }

    // Route arrived from a provider: an up-ramp from the origin meets a
    // down-ramp from the sending neighbor. The one link between the ramps is
    // exempt from attestation — that is the path's apex, legitimately a peer
    // link that neither side lists as a provider. Two or more links off the
    // ramps cannot be explained by any valley-free shape.
    std::size_t strict_up = 0;
    while (strict_up < m && up(strict_up + 1) == HopAttestation::ProviderPlus) ++strict_up;
    std::size_t weak_up = 0;
    while (weak_up < m && up(weak_up + 1) != HopAttestation::NotProviderPlus) ++weak_up;
    std::size_t strict_down = 0;
    while (strict_down < m && down(m - strict_down) == HopAttestation::ProviderPlus)
        ++strict_down;
    std::size_t weak_down = 0;
    while (weak_down < m && down(m - weak_down) != HopAttestation::NotProviderPlus) ++weak_down;

    if (strict_up + strict_down + 1 >= m) return ValidityState::Valid;
    if (weak_up + weak_down + 1 < m) return ValidityState::Invalid;
    return ValidityState::Unknown;
}

AspaTable build_aspa_records(const ASGraph& graph, std::span<const ASNumber> registrants) {
    AspaTable table;
    for (ASNumber asn : registrants) {
        std::vector<ASNumber> providers;
        for (std::uint32_t p : graph.providers(graph.index_of(asn))) providers.push_back(graph.asn_at(p));
        table.add(asn, std::move(providers));
    }
    return table;
}

// --- JSON ----------------------------------------------------------------

std::string roa_table_json(const RoaTable& table) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const ROA& roa : table.entries())
        arr.push_back({{"prefix", roa.prefix.str()}, {"origin", roa.origin}, {"max_length", roa.max_length}});
    return arr.dump(2) + "\n";
}

RoaTable roa_table_from_json(std::string_view text) {
    RoaTable table;
    const auto arr = nlohmann::json::parse(text);
    for (const auto& item : arr)
        table.add(ROA{Prefix::parse(item.at("prefix").get<std::string>()),
                      item.at("origin").get<ASNumber>(),
                      item.at("max_length").get<std::uint8_t>()});
    return table;
}

std::string aspa_table_json(const AspaTable& table) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (ASNumber customer : table.customers())
        arr.push_back({{"customer", customer}, {"providers", *table.providers_of(customer)}});
    return arr.dump(2) + "\n";
}

AspaTable aspa_table_from_json(std::string_view text) {
    AspaTable table;
    const auto arr = nlohmann::json::parse(text);
    for (const auto& item : arr)
        table.add(item.at("customer").get<ASNumber>(), item.at("providers").get<std::vector<ASNumber>>());
    return table;
}

} // namespace bgpsim
