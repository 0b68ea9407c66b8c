#include "bgpsim/policies.hpp"

#include <algorithm>

#include "bgpsim/errors.hpp"

namespace bgpsim {

const char* to_string(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::BGP: return "BGP";
        case PolicyKind::ROV: return "ROV";
        case PolicyKind::PeerROV: return "PeerROV";
        case PolicyKind::ASPA: return "ASPA";
        case PolicyKind::ASCones: return "ASCones";
        case PolicyKind::ROVPPv1Lite: return "ROVPPv1Lite";
        case PolicyKind::ROVPPv2Lite: return "ROVPPv2Lite";
        case PolicyKind::ROVPPv2ImprovedLite: return "ROVPPv2ImprovedLite";
    }
    return "?";
}

PolicyKind policy_from_string(std::string_view name) {
    for (PolicyKind kind : kAllPolicyKinds)
        if (name == to_string(kind)) return kind;
    throw ConfigError("unknown policy '" + std::string(name) + "'");
}

const char* base_policy_label(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::BGP:
        case PolicyKind::ROV:
        case PolicyKind::PeerROV: return "BGP";
        case PolicyKind::ASPA: return "ROV";
        case PolicyKind::ASCones: return "OnlyToCustomers";
        case PolicyKind::ROVPPv1Lite:
        case PolicyKind::ROVPPv2Lite:
        case PolicyKind::ROVPPv2ImprovedLite: return "ROV";
    }
    return "?";
}

namespace {

bool is_rovpp(PolicyKind kind) {
    return kind == PolicyKind::ROVPPv1Lite || kind == PolicyKind::ROVPPv2Lite ||
           kind == PolicyKind::ROVPPv2ImprovedLite;
}

} // namespace

DeployedPolicies::DeployedPolicies(const ASGraph& graph, PolicyKind adopted,
                                   std::span<const ASNumber> adopters, RoaTable roas,
                                   AspaTable aspa, PolicyOptions options)
    : graph_(graph), adopted_(adopted), adopter_(graph.node_count(), false),
      roas_(std::move(roas)), aspa_(std::move(aspa)), options_(options),
      cones_(graph.node_count()), cone_ready_(graph.node_count(), false) {
    for (ASNumber asn : adopters) adopter_[graph.index_of(asn)] = true;
}

bool DeployedPolicies::origin_in_cone(std::uint32_t customer_idx, ASNumber origin) const {
    if (!cone_ready_[customer_idx]) {
        cones_[customer_idx] = customer_cone(graph_, graph_.asn_at(customer_idx));
        cone_ready_[customer_idx] = true;
    }
    const auto& cone = cones_[customer_idx];
    return std::binary_search(cone.begin(), cone.end(), origin);
}

bool DeployedPolicies::ingress_accept(std::uint32_t receiver, const Announcement& ann,
                                      Relationship from_rel) const {
    const PolicyKind kind = kind_at(receiver);
    if (kind == PolicyKind::BGP) return true;

    const ValidityState roa = roas_.validity(ann.prefix, ann.origin());
    switch (kind) {
        case PolicyKind::ROV:
        case PolicyKind::ROVPPv1Lite:
        case PolicyKind::ROVPPv2Lite:
        case PolicyKind::ROVPPv2ImprovedLite:
            return roa != ValidityState::Invalid;

        case PolicyKind::PeerROV:
            return !(from_rel == Relationship::Peer && roa == ValidityState::Invalid);

        case PolicyKind::ASPA:
            return roa != ValidityState::Invalid &&
                   aspa_validity(ann.as_path, from_rel, aspa_) != ValidityState::Invalid;

        case PolicyKind::ASCones: {
            if (roa == ValidityState::Invalid) return false;
            // RFC 9234 style leak defense: an OTC-marked route must never
            // arrive from below or sideways.
            if (ann.otc && (from_rel == Relationship::Customer || from_rel == Relationship::Peer))
                return false;
            if (options_.ascones_cone_check && from_rel == Relationship::Customer &&
                !origin_in_cone(graph_.index_of(ann.first_hop()), ann.origin()))
                return false;
            return true;
        }
        case PolicyKind::BGP: break;
    }
    return true;
}

bool DeployedPolicies::rib_react(std::uint32_t receiver, const Announcement& ann, bool accepted,
                                 LocalRib& rib) const {
    // ROV++ blackholing: a rejected hijack that is *more specific* than some
    // ROA'd space gets a local null route, so the adopter drops that traffic
    // instead of misdelivering it along the covering route. Equal-length
    // hijacks (the plain prefix hijack) are left alone — the adopter's own
    // valid route already covers that space.
    if (accepted || !is_rovpp(kind_at(receiver)) || ann.blackhole) return false;
    if (roas_.validity(ann.prefix, ann.origin()) != ValidityState::Invalid) return false;
    bool shorter_cover = false;
    for (const ROA& roa : roas_.entries())
        if (roa.prefix.covers(ann.prefix) && roa.prefix.length < ann.prefix.length)
            shorter_cover = true;
    if (!shorter_cover) return false;
    if (rib.find(ann.prefix)) return false; // never displace a held route

    Announcement hole;
    hole.prefix = ann.prefix;
    hole.as_path = {graph_.asn_at(receiver)};
    hole.blackhole = true;
    rib.upsert(std::move(hole));
    return true;
}

std::optional<Announcement> DeployedPolicies::egress_transform(std::uint32_t sender,
                                                               const Announcement& ann,
                                                               Relationship to) const {
    if (kind_at(sender) != PolicyKind::ASCones) return ann;
    // a held mark means "this route already went down or sideways once";
    // letting it continue to a peer or provider would be the leak itself
    if (ann.otc && to != Relationship::Customer) return std::nullopt;
    Announcement out = ann;
    if ((to == Relationship::Customer || to == Relationship::Peer) && !out.otc && !out.blackhole)
        out.otc = graph_.asn_at(sender);
    return out;
}

PolicyModel::BlackholeScope DeployedPolicies::blackhole_scope(std::uint32_t sender) const {
    switch (kind_at(sender)) {
        case PolicyKind::ROVPPv1Lite: return BlackholeScope::Never;
        case PolicyKind::ROVPPv2Lite: return options_.v2_scope;
        case PolicyKind::ROVPPv2ImprovedLite: return options_.v2_improved_scope;
        default: return BlackholeScope::Normal;
    }
}

bool DeployedPolicies::valid_beats_blackhole(std::uint32_t receiver, const Announcement& ann) const {
    return kind_at(receiver) == PolicyKind::ROVPPv2ImprovedLite && !ann.blackhole &&
           roas_.validity(ann.prefix, ann.origin()) == ValidityState::Valid;
}

} // namespace bgpsim
