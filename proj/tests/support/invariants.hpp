#pragma once

// Path-shape invariants checked against the raw relationship graph.

#include <optional>
#include <set>
#include <span>
#include <vector>

#include "bgpsim/routing.hpp"
#include "bgpsim/topology.hpp"

namespace testsupport {

/// Relationship of `b` from `a`'s point of view, or nullopt when the two are
/// not adjacent at all.
inline std::optional<bgpsim::Relationship> rel_of(const bgpsim::ASGraph& g, bgpsim::ASNumber a,
                                                  bgpsim::ASNumber b) {
    const auto ai = g.index_of(a), bi = g.index_of(b);
    for (auto c : g.customers(ai))
        if (c == bi) return bgpsim::Relationship::Customer;
    for (auto p : g.peers(ai))
        if (p == bi) return bgpsim::Relationship::Peer;
    for (auto p : g.providers(ai))
        if (p == bi) return bgpsim::Relationship::Provider;
    return std::nullopt;
}

/** Gao-Rexford shape check for a full origin-to-holder AS sequence: every
 *  consecutive pair must be adjacent, and the step directions must match
 *  up* across? down* — once a route crosses a peer link or descends, it may
 *  never climb again, and it crosses at most one peer link. */
inline bool valley_free(const bgpsim::ASGraph& g, std::span<const bgpsim::ASNumber> origin_to_holder) {
    int stage = 0; // 0 = climbing, 1 = crossed the peer link, 2 = descending
    for (std::size_t i = 0; i + 1 < origin_to_holder.size(); ++i) {
        const auto rel = rel_of(g, origin_to_holder[i], origin_to_holder[i + 1]);
        if (!rel) return false;
        switch (*rel) {
            case bgpsim::Relationship::Provider: // step up
                if (stage != 0) return false;
                break;
            case bgpsim::Relationship::Peer:
                if (stage != 0) return false;
                stage = 1;
                break;
            case bgpsim::Relationship::Customer: // step down
                stage = 2;
                break;
        }
    }
    return true;
}

inline bool loop_free(std::span<const bgpsim::ASNumber> path) {
    std::set<bgpsim::ASNumber> seen(path.begin(), path.end());
    return seen.size() == path.size();
}

/** Origin-to-holder sequence for a RIB entry held at `holder`: the stored
 *  path reversed, plus the holder itself. A forged-origin seed fabricates
 *  its final element (attacker claims to have heard from the victim); pass
 *  that pair so the fabricated first element is dropped before checking
 *  adjacency. */
inline std::vector<bgpsim::ASNumber> full_route(const bgpsim::Announcement& ann,
                                                bgpsim::ASNumber holder,
                                                bgpsim::ASNumber forged_attacker = 0,
                                                bgpsim::ASNumber forged_origin = 0) {
    std::vector<bgpsim::ASNumber> seq(ann.as_path.rbegin(), ann.as_path.rend());
    if (seq.size() >= 2 && seq[0] == forged_origin && seq[1] == forged_attacker)
        seq.erase(seq.begin());
    if (seq.empty() || seq.back() != holder) seq.push_back(holder);
    return seq;
}

} // namespace testsupport
