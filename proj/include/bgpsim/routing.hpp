#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bgpsim/prefix.hpp"
#include "bgpsim/topology.hpp"

namespace bgpsim {

/** One route as held in a RIB or sent on the wire. `as_path[0]` is the most
 *  recent sender and `as_path.back()` the origin. `from_rel` is the sending
 *  neighbor's relationship to the holder; it is empty for seeded routes and
 *  for locally created blackhole entries. */
struct Announcement {
    Prefix prefix;
    std::vector<ASNumber> as_path;
    std::optional<Relationship> from_rel;
    std::optional<ASNumber> otc;    // only-to-customer marker: ASN that set it
    bool blackhole = false;
    bool seeded = false;

    ASNumber first_hop() const { return as_path.front(); }
    ASNumber origin() const { return as_path.back(); }
    bool contains_as(ASNumber asn) const {
        for (ASNumber hop : as_path)
            if (hop == asn) return true;
        return false;
    }

    friend bool operator==(const Announcement&, const Announcement&) = default;
};

/** Route selection: true when `candidate` should replace `incumbent` for the
 *  same prefix. Seeded routes beat everything; then the classic cascade —
 *  relationship (Customer > Peer > Provider), shorter path, lower first-hop
 *  ASN. Full ties keep the incumbent, which is what makes repeated sweeps
 *  reach a fixpoint. Locally created entries (no from_rel) outrank any
 *  learned relationship. */
bool prefer(const Announcement& candidate, const Announcement& incumbent);

/// Valley-free export: seeded and customer-learned routes go to everyone;
/// peer- and provider-learned routes go to customers only.
bool export_allowed(const Announcement& ann, Relationship to);

/// Per-AS routing table: at most one announcement per exact prefix, kept
/// sorted by prefix.
class LocalRib {
public:
    const Announcement* find(const Prefix& prefix) const;
    /// Longest-prefix match among entries covering `target`; nullptr if none.
    const Announcement* most_specific(const Prefix& target) const;
    /// Inserts or replaces the entry for ann.prefix.
    void upsert(Announcement ann);
    const std::vector<Announcement>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

private:
    std::vector<Announcement> entries_;
};

/** Receiver- and sender-side decisions the propagation engine delegates to
 *  the deployed policies. Implementations are per-trial and must be pure
 *  functions of (AS, announcement, relationship) — no hidden mutable state,
 *  so trials can run on any thread. */
class PolicyModel {
public:
    virtual ~PolicyModel() = default;

    /// Accept into the RIB? Loop detection has already happened.
    virtual bool ingress_accept(std::uint32_t receiver, const Announcement& ann,
                                Relationship from_rel) const = 0;

    /** Hook after the ingress decision, before any preference comparison;
     *  lets a policy react to what it just saw (e.g. blackhole a rejected
     *  hijack). Returns true when it changed the RIB. */
    virtual bool rib_react(std::uint32_t receiver, const Announcement& ann, bool accepted,
                           LocalRib& rib) const = 0;

    /// Sender-side shaping (OTC marking or suppression). nullopt = withhold.
    virtual std::optional<Announcement> egress_transform(std::uint32_t sender,
                                                         const Announcement& ann,
                                                         Relationship to) const = 0;

    /// How blackhole entries leave this AS. Normal = follow the valley-free
    /// rules like any route (non-adopters forwarding a received blackhole).
    enum class BlackholeScope : std::uint8_t { Normal, Never, Customers, All };
    virtual BlackholeScope blackhole_scope(std::uint32_t sender) const = 0;

    /// True when, at this receiver, `ann` is certified-good enough that a
    /// held blackhole must yield to it (and a blackhole candidate must lose).
    virtual bool valid_beats_blackhole(std::uint32_t receiver, const Announcement& ann) const = 0;
};

/// Accept-everything model: plain BGP at every AS. The engine's unit tests
/// run on it; the policies module builds the real per-trial models.
class AcceptAllModel : public PolicyModel {
public:
    bool ingress_accept(std::uint32_t, const Announcement&, Relationship) const override { return true; }
    bool rib_react(std::uint32_t, const Announcement&, bool, LocalRib&) const override { return false; }
    std::optional<Announcement> egress_transform(std::uint32_t, const Announcement& ann,
                                                 Relationship) const override {
        return ann;
    }
    BlackholeScope blackhole_scope(std::uint32_t) const override { return BlackholeScope::Normal; }
    bool valid_beats_blackhole(std::uint32_t, const Announcement&) const override { return false; }
};

struct SeededRoute {
    ASNumber at = 0;
    Announcement ann;
};

/** What to propagate. Non-leak scenarios use one scenario round; the
 *  route-leak scenario adds a second round in which each leaker re-exports
 *  its best route for `leak_prefix` to every neighbor, bypassing the
 *  valley-free export gate and stripping nothing. */
struct PropagationPlan {
    std::vector<SeededRoute> seeds;
    int scenario_rounds = 1;
    std::vector<ASNumber> round2_leakers;
    Prefix leak_prefix{};
    int max_sweep_rounds = 10; // oscillation cap per scenario round
};

struct PropagationResult {
    std::vector<LocalRib> ribs; // indexed like the graph
    int sweep_rounds = 0;       // total sweeps across all scenario rounds
};

/// Observes every (sender, receiver, wire announcement) export, before the
/// receiver's loop check. Used by invariant tests; keep null in production.
using ExportObserver = std::function<void(ASNumber, ASNumber, const Announcement&)>;

/** Ranked sweep propagation to a fixpoint. Each sweep round walks the graph
 *  three times: up (ascending propagation rank, exporting to providers),
 *  across (peers), down (descending rank, to customers). Senders prepend
 *  their ASN unless already at the head (a forged-origin seed starts with
 *  its own fabricated head); receivers drop paths containing their own ASN,
 *  apply policy ingress, then preference. Rounds repeat until no RIB
 *  changes; exceeding max_sweep_rounds raises EngineError naming a prefix
 *  that kept changing. */
PropagationResult propagate(const ASGraph& graph, const PolicyModel& policy,
                            const PropagationPlan& plan, const ExportObserver* observer = nullptr);

enum class Outcome : std::uint8_t { AttackerSuccess = 0, VictimSuccess = 1, Disconnected = 2 };

/// CSV spelling of an outcome.
const char* to_string(Outcome o);

/** Data-plane walk toward `target` from each start AS: repeatedly follow the
 *  most-specific covering RIB entry to the neighbor it was learned from.
 *  Reaching an attacker is AttackerSuccess (even before looking at its RIB);
 *  standing on a seeded entry at the victim is VictimSuccess; a blackhole,
 *  a missing entry, or a revisited AS is Disconnected. The stamp buffer is
 *  reused across calls so a walk costs its own length, not O(n). */
class OutcomeTracer {
public:
    OutcomeTracer(const ASGraph& graph, const std::vector<LocalRib>& ribs, Prefix target,
                  ASNumber victim, std::vector<ASNumber> attackers);

    Outcome trace(std::uint32_t start_idx);

private:
    const ASGraph& graph_;
    const std::vector<LocalRib>& ribs_;
    Prefix target_;
    ASNumber victim_;
    std::vector<ASNumber> attackers_; // sorted
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
};

/// All RIBs as a JSON object keyed by ASN, for --dump-ribs and debugging.
std::string ribs_json(const ASGraph& graph, const std::vector<LocalRib>& ribs);

} // namespace bgpsim
