#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "bgpsim/attestation.hpp"
#include "bgpsim/routing.hpp"
#include "bgpsim/topology.hpp"

namespace bgpsim {

enum class PolicyKind : std::uint8_t {
    BGP = 0,
    ROV = 1,
    PeerROV = 2,
    ASPA = 3,
    ASCones = 4,
    ROVPPv1Lite = 5,
    ROVPPv2Lite = 6,
    ROVPPv2ImprovedLite = 7,
};

inline constexpr PolicyKind kAllPolicyKinds[] = {
    PolicyKind::BGP,         PolicyKind::ROV,         PolicyKind::PeerROV,
    PolicyKind::ASPA,        PolicyKind::ASCones,     PolicyKind::ROVPPv1Lite,
    PolicyKind::ROVPPv2Lite, PolicyKind::ROVPPv2ImprovedLite,
};

/// CSV spelling; also the accepted config spelling.
const char* to_string(PolicyKind kind);
PolicyKind policy_from_string(std::string_view name); // throws ConfigError

/// The family a policy extends, as reported in the BasePolicyCls CSV column.
const char* base_policy_label(PolicyKind kind);

struct PolicyOptions {
    /// ASCones also checks that a customer-learned route's origin sits inside
    /// the sending customer's cone (computed from the graph, cached).
    bool ascones_cone_check = true;
    /// Where the exporting ROV++ variants send their blackholes.
    PolicyModel::BlackholeScope v2_scope = PolicyModel::BlackholeScope::Customers;
    PolicyModel::BlackholeScope v2_improved_scope = PolicyModel::BlackholeScope::All;
};

/** One trial's deployment: `adopters` run `adopted`, every other AS runs
 *  plain BGP. Holds the trial's ROA and ASPA registries. Stateless across
 *  calls apart from a lazily filled customer-cone cache, so a single trial
 *  must stay on one thread (trials are the unit of parallelism anyway). */
class DeployedPolicies : public PolicyModel {
public:
    DeployedPolicies(const ASGraph& graph, PolicyKind adopted, std::span<const ASNumber> adopters,
                     RoaTable roas, AspaTable aspa, PolicyOptions options = {});

    PolicyKind kind_at(std::uint32_t idx) const {
        return adopter_[idx] ? adopted_ : PolicyKind::BGP;
    }
    const RoaTable& roas() const { return roas_; }

    bool ingress_accept(std::uint32_t receiver, const Announcement& ann,
                        Relationship from_rel) const override;
    bool rib_react(std::uint32_t receiver, const Announcement& ann, bool accepted,
                   LocalRib& rib) const override;
    std::optional<Announcement> egress_transform(std::uint32_t sender, const Announcement& ann,
                                                 Relationship to) const override;
    BlackholeScope blackhole_scope(std::uint32_t sender) const override;
    bool valid_beats_blackhole(std::uint32_t receiver, const Announcement& ann) const override;

private:
    bool origin_in_cone(std::uint32_t customer_idx, ASNumber origin) const;

    const ASGraph& graph_;
    PolicyKind adopted_;
    std::vector<bool> adopter_;
    RoaTable roas_;
    AspaTable aspa_;
    PolicyOptions options_;
    // customer-cone cache for the ASCones containment check, filled on demand
    mutable std::vector<std::vector<ASNumber>> cones_;
    mutable std::vector<bool> cone_ready_;
};

} // namespace bgpsim
