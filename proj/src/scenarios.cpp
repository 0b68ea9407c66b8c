#include "bgpsim/scenarios.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "bgpsim/errors.hpp"

namespace bgpsim {

const char* to_string(AttackKind kind) {
    switch (kind) {
        case AttackKind::PrefixHijack: return "PrefixHijack";
        case AttackKind::SubprefixHijack: return "SubprefixHijack";
        case AttackKind::ForgedOriginPrefixHijack: return "ForgedOriginPrefixHijack";
        case AttackKind::AccidentalRouteLeak: return "AccidentalRouteLeak";
    }
    return "?";
}

AttackKind attack_from_string(std::string_view name) {
    for (AttackKind kind : kAllAttackKinds)
        if (name == to_string(kind)) return kind;
    throw ConfigError("unknown attack kind '" + std::string(name) + "'");
}

Prefix default_victim_prefix() { return Prefix::make(0x01020000u, 16); }   // 1.2.0.0/16
Prefix default_attack_subprefix() { return Prefix::make(0x01020300u, 24); } // 1.2.3.0/24

AdoptionLevel AdoptionLevel::of(double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0)
        throw ConfigError("adoption fraction must be in (0, 1], got " + std::to_string(fraction));
    return {false, fraction};
}

std::string AdoptionLevel::label() const {
    if (only_one) return "only_one";
    return std::to_string(static_cast<long long>(std::llround(fraction * 100.0)));
}

AdoptionLevel level_from_string(std::string_view token) {
    if (token == "only_one") return AdoptionLevel::one();
    const char* begin = token.data();
    const char* end = begin + token.size();
    if (token.find('.') != std::string_view::npos) {
        double fraction = 0.0;
        auto [ptr, ec] = std::from_chars(begin, end, fraction);
        if (ec != std::errc{} || ptr != end)
            throw ConfigError("bad adoption level '" + std::string(token) + "'");
        return AdoptionLevel::of(fraction);
    }
    unsigned percent = 0;
    auto [ptr, ec] = std::from_chars(begin, end, percent);
    if (ec != std::errc{} || ptr != end || percent == 0 || percent > 100)
        throw ConfigError("bad adoption level '" + std::string(token) +
                          "' (want only_one, a percent 1..100, or a fraction)");
    return AdoptionLevel::of(percent / 100.0);
}

std::span<const AdoptionLevel> default_levels() {
    static const std::array<AdoptionLevel, 6> levels = {
        AdoptionLevel::one(),     AdoptionLevel::of(0.10), AdoptionLevel::of(0.20),
        AdoptionLevel::of(0.40), AdoptionLevel::of(0.80), AdoptionLevel::of(0.99),
    };
    return levels;
}

std::vector<ASNumber> eligible_ases(const ASGraph& graph, bool edge_only) {
    if (!edge_only) {
        const auto& all = graph.asns();
        return {all.begin(), all.end()};
    }
    const auto stubs = deployment_set(graph, DeploymentType::Stubs);
    const auto multi = deployment_set(graph, DeploymentType::Multihomed);
    std::vector<ASNumber> merged;
    merged.reserve(stubs.size() + multi.size());
    std::merge(stubs.begin(), stubs.end(), multi.begin(), multi.end(),
               std::back_inserter(merged));
    return merged;
}

ScenarioConfig make_scenario(AttackKind kind, const ASGraph& graph,
                             std::span<const ASNumber> eligible, Rng& rng) {
    (void)graph;
    if (eligible.size() < 2)
        throw ScenarioError("need at least two eligible ASes for a victim/attacker pair, have " +
                            std::to_string(eligible.size()));
    // uniform pair without replacement: draw the victim, then draw the
    // attacker from the remaining slots
    const std::size_t vi = static_cast<std::size_t>(rng.below(eligible.size()));
    std::size_t ai = static_cast<std::size_t>(rng.below(eligible.size() - 1));
    if (ai >= vi) ++ai;

    ScenarioConfig cfg;
    cfg.kind = kind;
    cfg.victim = eligible[vi];
    cfg.attacker = eligible[ai];
    cfg.victim_prefix = default_victim_prefix();
    cfg.attack_prefix =
        kind == AttackKind::SubprefixHijack ? default_attack_subprefix() : cfg.victim_prefix;
    cfg.roas = {ROA{cfg.victim_prefix, cfg.victim, cfg.victim_prefix.length}};
    cfg.rounds = kind == AttackKind::AccidentalRouteLeak ? 2 : 1;
    return cfg;
}

ScenarioConfig make_scenario(AttackKind kind, const ASGraph& graph, Rng& rng) {
    const auto eligible = eligible_ases(graph);
    return make_scenario(kind, graph, eligible, rng);
}

PropagationPlan to_plan(const ScenarioConfig& scenario) {
    PropagationPlan plan;
    plan.scenario_rounds = scenario.rounds;

    Announcement legit;
    legit.prefix = scenario.victim_prefix;
    legit.as_path = {scenario.victim};
    legit.seeded = true;
    plan.seeds.push_back({scenario.victim, std::move(legit)});

    Announcement forged;
    forged.prefix = scenario.attack_prefix;
    forged.seeded = true;
    switch (scenario.kind) {
        case AttackKind::PrefixHijack:
        case AttackKind::SubprefixHijack:
            forged.as_path = {scenario.attacker};
            plan.seeds.push_back({scenario.attacker, std::move(forged)});
            break;
        case AttackKind::ForgedOriginPrefixHijack:
            // claims adjacency to the victim, so the origin looks ROA-Valid
            forged.as_path = {scenario.attacker, scenario.victim};
            plan.seeds.push_back({scenario.attacker, std::move(forged)});
            break;
        case AttackKind::AccidentalRouteLeak:
            // nothing seeded: the attacker waits for the victim's route and
            // re-exports whatever it holds to everyone in round 2
            plan.round2_leakers = {scenario.attacker};
            plan.leak_prefix = scenario.victim_prefix;
            break;
    }
    return plan;
}

std::size_t adopter_count(std::size_t set_size, const AdoptionLevel& level) {
    if (level.only_one) return 1;
    const double raw = level.fraction * static_cast<double>(set_size);
    const auto count = static_cast<std::size_t>(std::ceil(raw - 1e-9));
    return std::clamp<std::size_t>(count, 1, set_size);
}

std::vector<ASNumber> sample_adopters(std::span<const ASNumber> deploy_set,
                                      const AdoptionLevel& level, Rng& rng,
                                      std::span<const ASNumber> exclude) {
    if (deploy_set.empty())
        throw ConfigError("deployment set is empty; there is nothing to adopt the policy");
    std::size_t count = adopter_count(deploy_set.size(), level);

    std::vector<ASNumber> pool;
    pool.reserve(deploy_set.size());
    for (ASNumber asn : deploy_set)
        if (std::find(exclude.begin(), exclude.end(), asn) == exclude.end())
            pool.push_back(asn);
    if (count > pool.size()) count = pool.size();

    auto picked = rng.sample(std::move(pool), count);
    std::sort(picked.begin(), picked.end());
    return picked;
}

} // namespace bgpsim
