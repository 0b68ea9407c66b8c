#include "bgpsim/routing.hpp"

#include <algorithm>

#include "json.hpp"

#include "bgpsim/errors.hpp"

namespace bgpsim {

namespace {

// from_rel preference rank; lower is better. Locally created entries
// (seeds aside, that's self-made blackholes) outrank any learned route.
int rel_rank(const Announcement& a) {
    if (!a.from_rel) return -1;
    switch (*a.from_rel) {
        case Relationship::Customer: return 0;
        case Relationship::Peer: return 1;
        case Relationship::Provider: return 2;
    }
    return 3;
}

} // namespace

bool prefer(const Announcement& candidate, const Announcement& incumbent) {
    if (incumbent.seeded) return false;
    if (candidate.seeded) return true;
    if (rel_rank(candidate) != rel_rank(incumbent)) return rel_rank(candidate) < rel_rank(incumbent);
    if (candidate.as_path.size() != incumbent.as_path.size())
        return candidate.as_path.size() < incumbent.as_path.size();
    return candidate.first_hop() < incumbent.first_hop();
}

bool export_allowed(const Announcement& ann, Relationship to) {
    if (ann.seeded || !ann.from_rel || *ann.from_rel == Relationship::Customer) return true;
    return to == Relationship::Customer;
}

const Announcement* LocalRib::find(const Prefix& prefix) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), prefix,
                               [](const Announcement& a, const Prefix& p) { return a.prefix < p; });
    return it != entries_.end() && it->prefix == prefix ? &*it : nullptr;
}

const Announcement* LocalRib::most_specific(const Prefix& target) const {
    const Announcement* best = nullptr;
    for (const Announcement& a : entries_)
        if (a.prefix.covers(target) && (!best || a.prefix.length > best->prefix.length)) best = &a;
    return best;
}

void LocalRib::upsert(Announcement ann) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), ann.prefix,
                               [](const Announcement& a, const Prefix& p) { return a.prefix < p; });
    if (it != entries_.end() && it->prefix == ann.prefix)
        *it = std::move(ann);
    else
        entries_.insert(it, std::move(ann));
}

// --- propagation engine ---------------------------------------------------

namespace {

Relationship inverse(Relationship to) {
    switch (to) {
        case Relationship::Customer: return Relationship::Provider;
        case Relationship::Peer: return Relationship::Peer;
        case Relationship::Provider: return Relationship::Customer;
    }
    return Relationship::Peer;
}

class Engine {
public:
    Engine(const ASGraph& graph, const PolicyModel& policy, const PropagationPlan& plan,
           const ExportObserver* observer)
        : graph_(graph), policy_(policy), plan_(plan), observer_(observer),
          ribs_(graph.node_count()) {}

    PropagationResult run() {
        for (const SeededRoute& seed : plan_.seeds) {
            Announcement ann = seed.ann;
            ann.seeded = true;
            ann.from_rel.reset();
            ribs_[graph_.index_of(seed.at)].upsert(std::move(ann));
        }
        run_to_fixpoint();
        for (int round = 2; round <= plan_.scenario_rounds; ++round) {
            if (round == 2) inject_leaks();
            run_to_fixpoint();
        }
        return PropagationResult{std::move(ribs_), total_sweeps_};
    }

private:
    void run_to_fixpoint() {
        for (int sweep = 0; sweep < plan_.max_sweep_rounds; ++sweep) {
            changed_ = false;
            sweep_once();
            ++total_sweeps_;
            if (!changed_) return;
        }
        throw EngineError("propagation failed to converge after " +
                          std::to_string(plan_.max_sweep_rounds) + " sweep rounds; prefix " +
                          last_changed_.str() + " still changing");
    }

    void sweep_once() {
        const auto& order = graph_.up_order();
        for (auto it = order.begin(); it != order.end(); ++it)
            send_all(*it, graph_.providers(*it), Relationship::Provider);
        for (auto it = order.begin(); it != order.end(); ++it)
            send_all(*it, graph_.peers(*it), Relationship::Peer);
        for (auto it = order.rbegin(); it != order.rend(); ++it)
            send_all(*it, graph_.customers(*it), Relationship::Customer);
    }

    void send_all(std::uint32_t sender, const std::vector<std::uint32_t>& receivers,
                  Relationship to) {
        if (receivers.empty() || ribs_[sender].empty()) return;
        const ASNumber sender_asn = graph_.asn_at(sender);
        // A sender's own RIB cannot change while it is the one exporting
        // (receivers are always other ASes), so iterating it live is safe.
        for (const Announcement& entry : ribs_[sender].entries()) {
            bool allowed;
            if (entry.blackhole) {
                switch (policy_.blackhole_scope(sender)) {
                    case PolicyModel::BlackholeScope::Never: allowed = false; break;
                    case PolicyModel::BlackholeScope::Customers:
                        allowed = to == Relationship::Customer;
                        break;
                    case PolicyModel::BlackholeScope::All: allowed = true; break;
                    case PolicyModel::BlackholeScope::Normal:
                    default: allowed = export_allowed(entry, to); break;
                }
            } else {
                allowed = export_allowed(entry, to);
            }
            if (!allowed) continue;
            std::optional<Announcement> shaped = policy_.egress_transform(sender, entry, to);
            if (!shaped) continue;
            make_wire(*shaped, sender_asn, to);
            for (std::uint32_t receiver : receivers) receive(sender_asn, receiver, *shaped);
        }
    }

    // Shapes an outgoing copy: prepend unless already at the head, stamp the
    // relationship the receiver will see, clear holder-local bits.
    void make_wire(Announcement& wire, ASNumber sender_asn, Relationship to) const {
        if (wire.as_path.empty() || wire.as_path.front() != sender_asn)
            wire.as_path.insert(wire.as_path.begin(), sender_asn);
        wire.from_rel = inverse(to);
        wire.seeded = false;
    }

    void receive(ASNumber sender_asn, std::uint32_t receiver, const Announcement& wire) {
        if (observer_) (*observer_)(sender_asn, graph_.asn_at(receiver), wire);
        if (wire.contains_as(graph_.asn_at(receiver))) return; // loop
        const bool accepted = policy_.ingress_accept(receiver, wire, *wire.from_rel);
        if (policy_.rib_react(receiver, wire, accepted, ribs_[receiver])) note_change(wire.prefix);
        if (!accepted) return;
        const Announcement* incumbent = ribs_[receiver].find(wire.prefix);
        if (incumbent) {
            bool replace;
            if (incumbent->blackhole && policy_.valid_beats_blackhole(receiver, wire))
                replace = true;
            else if (wire.blackhole && policy_.valid_beats_blackhole(receiver, *incumbent))
                replace = false;
            else
                replace = prefer(wire, *incumbent);
            if (!replace || *incumbent == wire) return;
        }
        ribs_[receiver].upsert(wire);
        note_change(wire.prefix);
    }

    /** Route-leak injection: each leaker re-sends its best route for the
     *  leak prefix to every neighbor, skipping both the valley-free gate and
     *  its own egress shaping — a misconfiguration, not a policy. The OTC
     *  mark (if any) rides along, which is exactly what lets adopting
     *  receivers catch the leak. */
    void inject_leaks() {
        for (ASNumber leaker : plan_.round2_leakers) {
            const std::uint32_t idx = graph_.index_of(leaker);
            const Announcement* best = ribs_[idx].find(plan_.leak_prefix);
            if (!best) continue; // nothing reached the leaker; nothing leaks
            for (Relationship to :
                 {Relationship::Provider, Relationship::Peer, Relationship::Customer}) {
                const auto& receivers = to == Relationship::Provider ? graph_.providers(idx)
                                        : to == Relationship::Peer   ? graph_.peers(idx)
                                                                     : graph_.customers(idx);
                Announcement wire = *best;
                make_wire(wire, leaker, to);
                for (std::uint32_t receiver : receivers) receive(leaker, receiver, wire);
            }
        }
    }

    void note_change(const Prefix& prefix) {
        changed_ = true;
        last_changed_ = prefix;
    }

    const ASGraph& graph_;
    const PolicyModel& policy_;
    const PropagationPlan& plan_;
    const ExportObserver* observer_;
    std::vector<LocalRib> ribs_;
    bool changed_ = false;
    Prefix last_changed_{};
    int total_sweeps_ = 0;
};

} // namespace

PropagationResult propagate(const ASGraph& graph, const PolicyModel& policy,
                            const PropagationPlan& plan, const ExportObserver* observer) {
    return Engine(graph, policy, plan, observer).run();
}

// --- data-plane outcome ----------------------------------------------------

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::AttackerSuccess: return "ATTACKER_SUCCESS";
        case Outcome::VictimSuccess: return "VICTIM_SUCCESS";
        case Outcome::Disconnected: return "DISCONNECTED";
    }
    return "?";
}

OutcomeTracer::OutcomeTracer(const ASGraph& graph, const std::vector<LocalRib>& ribs, Prefix target,
                             ASNumber victim, std::vector<ASNumber> attackers)
    : graph_(graph), ribs_(ribs), target_(target), victim_(victim),
      attackers_(std::move(attackers)), stamp_(graph.node_count(), 0) {
    std::sort(attackers_.begin(), attackers_.end());
}

Outcome OutcomeTracer::trace(std::uint32_t start_idx) {
    ++epoch_;
    std::uint32_t cur = start_idx;
    for (;;) {
        if (std::binary_search(attackers_.begin(), attackers_.end(), graph_.asn_at(cur)))
            return Outcome::AttackerSuccess;
        if (stamp_[cur] == epoch_) return Outcome::Disconnected; // forwarding loop
        stamp_[cur] = epoch_;
        const Announcement* entry = ribs_[cur].most_specific(target_);
        if (!entry || entry->blackhole) return Outcome::Disconnected;
        if (entry->seeded)
            return graph_.asn_at(cur) == victim_ ? Outcome::VictimSuccess
                                                 : Outcome::AttackerSuccess;
        cur = graph_.index_of(entry->first_hop());
    }
}

std::string ribs_json(const ASGraph& graph, const std::vector<LocalRib>& ribs) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (std::uint32_t i = 0; i < graph.node_count(); ++i) {
        if (ribs[i].empty()) continue;
        nlohmann::ordered_json list = nlohmann::ordered_json::array();
        for (const Announcement& a : ribs[i].entries()) {
            nlohmann::ordered_json j;
            j["prefix"] = a.prefix.str();
            j["as_path"] = a.as_path;
            j["from_rel"] = a.from_rel ? nlohmann::ordered_json(to_string(*a.from_rel))
                                       : nlohmann::ordered_json(nullptr);
            j["otc"] = a.otc ? nlohmann::ordered_json(*a.otc) : nlohmann::ordered_json(nullptr);
            j["blackhole"] = a.blackhole;
            j["seeded"] = a.seeded;
            list.push_back(std::move(j));
        }
        out[std::to_string(graph.asn_at(i))] = std::move(list);
    }
    return out.dump(2) + "\n";
}

} // namespace bgpsim
