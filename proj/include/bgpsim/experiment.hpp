#pragma once

// The Monte Carlo sweep: (policy x attack x deployment) combinations, each
// run across the adoption axis for many seeded trials, aggregated into one
// CSV per combination plus a JSON run manifest.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bgpsim/policies.hpp"
#include "bgpsim/scenarios.hpp"
#include "bgpsim/topology.hpp"

namespace bgpsim {

struct Combo {
    PolicyKind policy = PolicyKind::ROV;
    AttackKind attack = AttackKind::PrefixHijack;
    DeploymentType deployment = DeploymentType::NoDeploymentType;

    std::string label() const; // "SubprefixHijack ROV Stubs"
};

struct SweepConfig {
    std::vector<PolicyKind> policies = {PolicyKind::ROV, PolicyKind::ASPA, PolicyKind::PeerROV,
                                        PolicyKind::ASCones};
    std::vector<AttackKind> attacks = {kAllAttackKinds.begin(), kAllAttackKinds.end()};
    std::vector<DeploymentType> deployments = {
        DeploymentType::InputClique, DeploymentType::Stubs, DeploymentType::Multihomed,
        DeploymentType::NoDeploymentType};
    std::vector<AdoptionLevel> levels = {default_levels().begin(), default_levels().end()};
    int trials_per_level = 200;
    std::uint64_t master_seed = 0;
    int jobs = 1;
    std::string output_dir = "out";

    bool edge_only_victims = true;   // victim/attacker pool: network edge vs every AS
    bool include_rovpp_leak = false; // run the excluded ROV++ x route-leak cells anyway
    bool count_attacker_outcomes = false; // include attackers in the outcome denominator
    bool aspa_register_all = false;  // register provider sets for every AS, not just adopters
    PolicyOptions policy_options;
    std::vector<ASNumber> clique_override; // InputClique membership when the file lacks a header
};

/// Per-trial outcome shares, in percent of the traced denominator,
/// indexed by Outcome.
struct TrialRecord {
    std::array<double, 3> percent{0.0, 0.0, 0.0};
    bool failed = false;
    std::string error;
};

/// One output CSV line (see kCsvHeader for the column order).
struct AggregateRow {
    std::string scenario_cls;
    std::string adopting_policy_cls;
    std::string policy_cls = "BGP";
    std::string base_policy_cls;
    std::string percent_adopt;
    std::string outcome;
    double value = 0.0;
    double yerr = 0.0;
    std::string deployment_type;
};

inline constexpr const char* kCsvHeader =
    "scenario_cls,AdoptingPolicyCls,PolicyCls,BasePolicyCls,percent_adopt,outcome,value,yerr,"
    "deployment_type";

/** Everything a trial reads that is shared across the whole sweep: the graph
 *  plus the victim pool and the adopter pool per deployment type. Building it
 *  validates that every requested deployment set is usable up front. */
struct SweepDataset {
    const ASGraph* graph = nullptr;
    std::vector<ASNumber> eligible;
    std::array<std::vector<ASNumber>, 4> deploy_sets; // indexed by DeploymentType

    const std::vector<ASNumber>& deploy(DeploymentType type) const {
        return deploy_sets[static_cast<std::size_t>(type)];
    }
};

SweepDataset prepare_dataset(const ASGraph& graph, const SweepConfig& config);

/** Core of a trial, after the random draws: deploy the policy over the given
 *  adopters, propagate the scenario, walk the data plane from every AS, and
 *  return the outcome shares. Throws EngineError on non-convergence. */
TrialRecord run_trial_with(const ASGraph& graph, PolicyKind policy,
                           const ScenarioConfig& scenario, std::span<const ASNumber> adopters,
                           const SweepConfig& config = {});

/** One seeded trial: draw the scenario and the adopter sample from
 *  `trial_seed_value`, then run. Engine failures come back as a failed
 *  record, not an exception. */
TrialRecord run_trial(const SweepDataset& dataset, const Combo& combo, const AdoptionLevel& level,
                      std::uint64_t trial_seed_value, const SweepConfig& config);

/** Re-runs one seeded trial and returns its converged RIBs as pretty JSON:
 *  asn -> prefix -> {path, from_rel, flags}. Debug aid behind the run
 *  subcommand's --dump-ribs flag; skips the data-plane walk entirely. */
std::string trial_ribs_json(const SweepDataset& dataset, const Combo& combo,
                            const AdoptionLevel& level, std::uint64_t trial_seed_value,
                            const SweepConfig& config);

/// Mean/CI aggregation of the non-failed trials for one (combo, level).
/// yerr is the half-width of the normal-approximation 90% CI
/// (1.645 x sample stddev / sqrt(n)); zero when fewer than two trials.
std::array<AggregateRow, 3> aggregate_level(const Combo& combo, const AdoptionLevel& level,
                                            std::span<const TrialRecord> trials);

/// The exact CSV bytes for a sequence of rows (header + one line per row).
std::string csv_text(std::span<const AggregateRow> rows);

/// FNV-1a 64-bit digest, used to fingerprint the topology in the manifest.
std::uint64_t fnv1a64(std::string_view bytes);

struct SweepResult {
    std::vector<std::string> csv_files; // absolute or config-relative paths, in write order
    std::string manifest_file;
    std::size_t combos_run = 0;
    std::size_t trials_run = 0;
    std::size_t trials_failed = 0;
    std::vector<std::string> skipped_combos;
    std::vector<std::string> failed_combos; // labels of combos with >= 1 failed trial
};

/** Runs every requested combination over the adoption axis. Trials execute
 *  on `config.jobs` workers; results are keyed by (combo, level, trial), so
 *  worker count and scheduling cannot change any output byte. Progress notes
 *  (combo starts, skip notices) go to `log` when given. */
SweepResult run_sweep(const ASGraph& graph, const SweepConfig& config, std::ostream* log = nullptr);

} // namespace bgpsim
