#pragma once

// Exhaustive ramp-split oracle for ASPA path checks. Written before the
// library algorithm and kept maximally literal: try every split point and
// re-walk every link with direct set membership, no precomputation.

#include <algorithm>
#include <span>
#include <utility>
#include <vector>

#include "bgpsim/attestation.hpp"

namespace testsupport {

enum class HopVerdict { Plus, NotPlus, Silent };

inline HopVerdict oracle_hop(const bgpsim::AspaTable& table, bgpsim::ASNumber customer,
                             bgpsim::ASNumber candidate) {
    const auto* providers = table.providers_of(customer);
    if (!providers) return HopVerdict::Silent;
    return std::find(providers->begin(), providers->end(), candidate) != providers->end()
               ? HopVerdict::Plus
               : HopVerdict::NotPlus;
}

inline bgpsim::ValidityState aspa_oracle(std::span<const bgpsim::ASNumber> path,
                                         bgpsim::Relationship from_rel,
                                         const bgpsim::AspaTable& table) {
    using bgpsim::ValidityState;
    // origin-first copy of the path
    std::vector<bgpsim::ASNumber> q(path.rbegin(), path.rend());
    const std::size_t links = q.size() - 1;

    // A split (k, skip) means links 1..k climb away from the origin, link
    // k+1 is the apex when skip == 1 (exempt from attestation — a peer link
    // neither side lists), and the rest descend toward the receiver. Routes
    // from customers or peers may only climb: the single allowed split is
    // (links, 0).
    std::vector<std::pair<std::size_t, std::size_t>> splits;
    if (from_rel == bgpsim::Relationship::Provider) {
        for (std::size_t k = 0; k <= links; ++k)
            for (std::size_t skip = 0; skip <= 1 && k + skip <= links; ++skip)
                splits.emplace_back(k, skip);
    } else {
        splits.emplace_back(links, 0);
    }

    auto split_passes = [&](std::size_t k, std::size_t skip, bool strict) {
        for (std::size_t i = 1; i <= links; ++i) {
            if (i == k + 1 && skip == 1) continue; // the apex link
            const bool is_up = i <= k;
            // on an up link the origin-side AS attests the other end as its
            // provider; on a down link the receiver-side AS does
            const HopVerdict v = is_up ? oracle_hop(table, q[i - 1], q[i])
                                       : oracle_hop(table, q[i], q[i - 1]);
            if (strict && v != HopVerdict::Plus) return false;
            if (!strict && v == HopVerdict::NotPlus) return false;
        }
        return true;
    };

    for (const auto& [k, skip] : splits)
        if (split_passes(k, skip, true)) return ValidityState::Valid;
    for (const auto& [k, skip] : splits)
        if (split_passes(k, skip, false)) return ValidityState::Unknown;
    return ValidityState::Invalid;
}

} // namespace testsupport
