#pragma once

// Attack-trial construction: who attacks whom, what gets announced, which
// ROA/provider registries exist, and which ASes adopt the defense.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bgpsim/attestation.hpp"
#include "bgpsim/prefix.hpp"
#include "bgpsim/rng.hpp"
#include "bgpsim/routing.hpp"
#include "bgpsim/topology.hpp"

namespace bgpsim {

enum class AttackKind : std::uint8_t {
    PrefixHijack,
    SubprefixHijack,
    ForgedOriginPrefixHijack,
    AccidentalRouteLeak,
};

inline constexpr std::array<AttackKind, 4> kAllAttackKinds = {
    AttackKind::PrefixHijack,
    AttackKind::SubprefixHijack,
    AttackKind::ForgedOriginPrefixHijack,
    AttackKind::AccidentalRouteLeak,
};

const char* to_string(AttackKind kind);
AttackKind attack_from_string(std::string_view name);

/// Space the victim legitimately originates and registers a ROA for. The
/// concrete prefix is arbitrary; it is fixed so runs are comparable.
Prefix default_victim_prefix();
/// Strict subprefix inside the victim space, used by SubprefixHijack.
Prefix default_attack_subprefix();

/** One step of the sweep's adoption axis: either exactly one adopter, or a
 *  fraction of the deployment set. */
struct AdoptionLevel {
    bool only_one = false;
    double fraction = 0.0; // meaningful iff !only_one; in (0, 1]

    static AdoptionLevel one() { return {true, 0.0}; }
    static AdoptionLevel of(double fraction); // validates (0, 1]

    /// "only_one" or the integer percent ("10", "99"): the spelling used in
    /// CSV output and accepted on the command line.
    std::string label() const;

    friend bool operator==(const AdoptionLevel&, const AdoptionLevel&) = default;
};

/// Inverse of AdoptionLevel::label(), plus "0.4"-style fraction tokens.
AdoptionLevel level_from_string(std::string_view token);

/// The default adoption axis: only_one, then 10/20/40/80/99 percent.
std::span<const AdoptionLevel> default_levels();

struct ScenarioConfig {
    AttackKind kind = AttackKind::PrefixHijack;
    ASNumber victim = 0;
    ASNumber attacker = 0;
    Prefix victim_prefix;
    Prefix attack_prefix; // == victim_prefix except for SubprefixHijack
    std::vector<ROA> roas;
    int rounds = 1; // 2 for AccidentalRouteLeak: the leak fires in round 2
};

/** Victim/attacker candidates: edge ASes (stubs plus multihomed) by default,
 *  every AS when `edge_only` is false. Sorted by ASN. */
std::vector<ASNumber> eligible_ases(const ASGraph& graph, bool edge_only = true);

/** Draws victim and attacker uniformly without replacement from `eligible`
 *  and fills in the per-kind announcement and ROA plan.
 *  Throws ScenarioError when fewer than two candidates exist. */
ScenarioConfig make_scenario(AttackKind kind, const ASGraph& graph,
                             std::span<const ASNumber> eligible, Rng& rng);

/// Convenience overload that computes the default eligible set itself.
ScenarioConfig make_scenario(AttackKind kind, const ASGraph& graph, Rng& rng);

/// Seeds plus round schedule, ready for the propagation engine.
PropagationPlan to_plan(const ScenarioConfig& scenario);

/** Adopter head-count for a deployment set of `set_size` ASes: 1 for
 *  only_one, otherwise ceil(fraction x set_size) — the rounding that
 *  reproduces the published per-deployment adoption counts. A small epsilon
 *  keeps binary round-off (0.2 x 5 = 1.0000000000000002) from inflating
 *  exact products. */
std::size_t adopter_count(std::size_t set_size, const AdoptionLevel& level);

/** Uniform adopter sample: `adopter_count` members of `deploy_set` minus
 *  `exclude` (the attacker never adopts). The count is computed over the
 *  full deployment set first, then capped by the pool actually available.
 *  Result is sorted by ASN. Throws ConfigError on an empty `deploy_set`. */
std::vector<ASNumber> sample_adopters(std::span<const ASNumber> deploy_set,
                                      const AdoptionLevel& level, Rng& rng,
                                      std::span<const ASNumber> exclude = {});

} // namespace bgpsim
