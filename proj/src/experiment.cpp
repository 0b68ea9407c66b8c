#include "bgpsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include "bgpsim/errors.hpp"
#include "bgpsim/numfmt.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace bgpsim {

std::string Combo::label() const {
    std::string out = to_string(attack);
    out += ' ';
    out += to_string(policy);
    out += ' ';
    out += to_string(deployment);
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

SweepDataset prepare_dataset(const ASGraph& graph, const SweepConfig& config) {
    SweepDataset data;
    data.graph = &graph;
    data.eligible = eligible_ases(graph, config.edge_only_victims);
    if (data.eligible.size() < 2)
        throw ScenarioError("victim/attacker pool has " + std::to_string(data.eligible.size()) +
                            " candidates; need at least two");
    for (DeploymentType type : config.deployments) {
        auto members = deployment_set(graph, type, config.clique_override);
        if (members.empty())
            throw ConfigError(std::string("deployment set '") + to_string(type) +
                              "' is empty on this topology");
        data.deploy_sets[static_cast<std::size_t>(type)] = std::move(members);
    }
    return data;
}

TrialRecord run_trial_with(const ASGraph& graph, PolicyKind policy,
                           const ScenarioConfig& scenario, std::span<const ASNumber> adopters,
                           const SweepConfig& config) {
    RoaTable roas;
    for (const ROA& roa : scenario.roas) roas.add(roa);

    AspaTable aspa;
    if (policy == PolicyKind::ASPA)
        aspa = config.aspa_register_all ? build_aspa_records(graph, graph.asns())
                                        : build_aspa_records(graph, adopters);

    DeployedPolicies model(graph, policy, adopters, std::move(roas), std::move(aspa),
                           config.policy_options);
    auto result = propagate(graph, model, to_plan(scenario));

    OutcomeTracer tracer(graph, result.ribs, scenario.attack_prefix, scenario.victim,
                         {scenario.attacker});
    const std::uint32_t attacker_idx = graph.index_of(scenario.attacker);
    std::array<std::size_t, 3> counts{0, 0, 0};
    std::size_t denominator = 0;
    for (std::uint32_t idx = 0; idx < graph.node_count(); ++idx) {
        if (idx == attacker_idx && !config.count_attacker_outcomes) continue;
        ++counts[static_cast<std::size_t>(tracer.trace(idx))];
        ++denominator;
    }

    TrialRecord record;
    for (std::size_t k = 0; k < 3; ++k)
        record.percent[k] = 100.0 * static_cast<double>(counts[k]) /
                            static_cast<double>(denominator);
    return record;
}

TrialRecord run_trial(const SweepDataset& dataset, const Combo& combo, const AdoptionLevel& level,
                      std::uint64_t trial_seed_value, const SweepConfig& config) {
    // draw order is fixed: scenario first, then the adopter sample, so any
    // code change that reorders draws breaks reproducibility loudly in tests
    Rng rng(trial_seed_value);
    const auto scenario = make_scenario(combo.attack, *dataset.graph, dataset.eligible, rng);
    const ASNumber exclude[] = {scenario.attacker};
    const auto adopters = sample_adopters(dataset.deploy(combo.deployment), level, rng, exclude);
    try {
        return run_trial_with(*dataset.graph, combo.policy, scenario, adopters, config);
    } catch (const EngineError& e) {
        TrialRecord failed;
        failed.failed = true;
        failed.error = e.what();
        return failed;
    }
}

std::string trial_ribs_json(const SweepDataset& dataset, const Combo& combo,
                            const AdoptionLevel& level, std::uint64_t trial_seed_value,
                            const SweepConfig& config) {
    // same draw order as run_trial, so the dump shows exactly that trial
    Rng rng(trial_seed_value);
    const ASGraph& graph = *dataset.graph;
    const auto scenario = make_scenario(combo.attack, graph, dataset.eligible, rng);
    const ASNumber exclude[] = {scenario.attacker};
    const auto adopters = sample_adopters(dataset.deploy(combo.deployment), level, rng, exclude);

    RoaTable roas;
    for (const ROA& roa : scenario.roas) roas.add(roa);
    AspaTable aspa;
    if (combo.policy == PolicyKind::ASPA)
        aspa = config.aspa_register_all ? build_aspa_records(graph, graph.asns())
                                        : build_aspa_records(graph, adopters);
    DeployedPolicies model(graph, combo.policy, adopters, std::move(roas), std::move(aspa),
                           config.policy_options);
    const auto result = propagate(graph, model, to_plan(scenario));

    nlohmann::ordered_json dump = nlohmann::ordered_json::object();
    for (std::uint32_t idx = 0; idx < graph.node_count(); ++idx) {
        if (result.ribs[idx].empty()) continue;
        nlohmann::ordered_json table = nlohmann::ordered_json::object();
        for (const Announcement& ann : result.ribs[idx].entries()) {
            nlohmann::ordered_json entry;
            entry["path"] = ann.as_path;
            if (ann.from_rel)
                entry["from_rel"] = to_string(*ann.from_rel);
            else
                entry["from_rel"] = nullptr;
            auto flags = nlohmann::ordered_json::array();
            if (ann.seeded) flags.push_back("seeded");
            if (ann.blackhole) flags.push_back("blackhole");
            if (ann.otc) flags.push_back("otc:" + std::to_string(*ann.otc));
            entry["flags"] = std::move(flags);
            table[ann.prefix.str()] = std::move(entry);
        }
        dump[std::to_string(graph.asn_at(idx))] = std::move(table);
    }
    return dump.dump(2) + "\n";
}

std::array<AggregateRow, 3> aggregate_level(const Combo& combo, const AdoptionLevel& level,
                                            std::span<const TrialRecord> trials) {
    std::array<AggregateRow, 3> rows;
    for (std::size_t k = 0; k < 3; ++k) {
        std::size_t n = 0;
        double mean = 0.0;
        for (const auto& t : trials)
            if (!t.failed) {
                mean += t.percent[k];
                ++n;
            }
        mean = n ? mean / static_cast<double>(n) : 0.0;

        double yerr = 0.0;
        if (n >= 2) {
            double ss = 0.0;
            for (const auto& t : trials)
                if (!t.failed) {
                    const double d = t.percent[k] - mean;
                    ss += d * d;
                }
            const double stddev = std::sqrt(ss / static_cast<double>(n - 1));
            yerr = 1.645 * stddev / std::sqrt(static_cast<double>(n));
        }

        AggregateRow& row = rows[k];
        row.scenario_cls = to_string(combo.attack);
        row.adopting_policy_cls = to_string(combo.policy);
        row.base_policy_cls = base_policy_label(combo.policy);
        row.percent_adopt = level.label();
        row.outcome = to_string(static_cast<Outcome>(k));
        row.value = mean;
        row.yerr = yerr;
        row.deployment_type = to_string(combo.deployment);
    }
    return rows;
}

std::string csv_text(std::span<const AggregateRow> rows) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const AggregateRow& row : rows) {
        out += row.scenario_cls;
        out += ',';
        out += row.adopting_policy_cls;
        out += ',';
        out += row.policy_cls;
        out += ',';
        out += row.base_policy_cls;
        out += ',';
        out += row.percent_adopt;
        out += ',';
        out += row.outcome;
        out += ',';
        out += format_double(row.value);
        out += ',';
        out += format_double(row.yerr);
        out += ',';
        out += row.deployment_type;
        out += '\n';
    }
    return out;
}

namespace {

bool rovpp_leak_cell(const Combo& combo) {
    const bool rovpp = combo.policy == PolicyKind::ROVPPv1Lite ||
                       combo.policy == PolicyKind::ROVPPv2Lite ||
                       combo.policy == PolicyKind::ROVPPv2ImprovedLite;
    return rovpp && combo.attack == AttackKind::AccidentalRouteLeak;
}

std::string combo_file_name(const Combo& combo) {
    std::string name = to_string(combo.attack);
    name += '_';
    name += to_string(combo.policy);
    name += '_';
    name += to_string(combo.deployment);
    name += ".csv";
    return name;
}

void write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ConfigError("short write to '" + path.string() + "'");
}

} // namespace

SweepResult run_sweep(const ASGraph& graph, const SweepConfig& config, std::ostream* log) {
    if (config.trials_per_level < 1) throw ConfigError("trials_per_level must be at least 1");
    if (config.levels.empty()) throw ConfigError("adoption level list is empty");
    if (config.policies.empty() || config.attacks.empty() || config.deployments.empty())
        throw ConfigError("policy, attack and deployment lists must all be non-empty");

    const fs::path out_dir(config.output_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + out_dir.string() +
                              "': " + ec.message());
    { // fail before computing anything if the directory is not writable
        const fs::path probe = out_dir / ".write_probe";
        std::ofstream test(probe);
        if (!test) throw ConfigError("output directory '" + out_dir.string() + "' is not writable");
        test.close();
        fs::remove(probe, ec);
    }

    const SweepDataset dataset = prepare_dataset(graph, config);

    SweepResult result;
    std::vector<Combo> combos;
    for (PolicyKind policy : config.policies)
        for (AttackKind attack : config.attacks)
            for (DeploymentType deployment : config.deployments) {
                const Combo combo{policy, attack, deployment};
                if (rovpp_leak_cell(combo) && !config.include_rovpp_leak) {
                    result.skipped_combos.push_back(combo.label());
                    if (log)
                        *log << "skipping " << combo.label()
                             << " (excluded by default; enable with include_rovpp_leak)\n";
                    continue;
                }
                combos.push_back(combo);
            }

    const std::size_t n_levels = config.levels.size();
    const std::size_t n_trials = static_cast<std::size_t>(config.trials_per_level);
    const std::size_t total_tasks = combos.size() * n_levels * n_trials;
    if (log)
        *log << "running " << combos.size() << " combination(s) x " << n_levels << " level(s) x "
             << n_trials << " trial(s) = " << total_tasks << " trials on "
             << std::max(1, config.jobs) << " worker(s)\n";

    // every task writes its own preallocated slot; scheduling cannot reorder
    // or race the results, which is what keeps jobs=N byte-identical to jobs=1
    std::vector<TrialRecord> records(total_tasks);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t task = next.fetch_add(1, std::memory_order_relaxed);
            if (task >= total_tasks) return;
            const std::size_t c = task / (n_levels * n_trials);
            const std::size_t l = (task / n_trials) % n_levels;
            const std::size_t t = task % n_trials;
            const std::uint64_t seed =
                trial_seed(config.master_seed,
                           static_cast<std::uint64_t>(combos[c].attack), l, t);
            records[task] = run_trial(dataset, combos[c], config.levels[l], seed, config);
        }
    };

    const std::size_t n_workers =
        std::min<std::size_t>(std::max(1, config.jobs), std::max<std::size_t>(total_tasks, 1));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(n_workers);
        for (std::size_t i = 0; i < n_workers; ++i) threads.emplace_back(worker);
        for (auto& th : threads) th.join();
    }

    nlohmann::ordered_json failures = nlohmann::ordered_json::array();
    nlohmann::ordered_json empty_levels = nlohmann::ordered_json::array();

    for (std::size_t c = 0; c < combos.size(); ++c) {
        std::vector<AggregateRow> rows;
        rows.reserve(n_levels * 3);
        bool combo_had_failure = false;
        for (std::size_t l = 0; l < n_levels; ++l) {
            const auto* level_records = &records[(c * n_levels + l) * n_trials];
            std::span<const TrialRecord> trials(level_records, n_trials);

            std::size_t valid = 0;
            for (std::size_t t = 0; t < n_trials; ++t) {
                const TrialRecord& record = trials[t];
                if (record.failed) {
                    ++result.trials_failed;
                    combo_had_failure = true;
                    failures.push_back({{"combo", combos[c].label()},
                                        {"level", config.levels[l].label()},
                                        {"trial", t},
                                        {"error", record.error}});
                } else {
                    ++valid;
                }
                ++result.trials_run;
            }
            if (valid == 0) {
                empty_levels.push_back(
                    {{"combo", combos[c].label()}, {"level", config.levels[l].label()}});
                continue; // no data to aggregate for this level
            }
            for (auto& row : aggregate_level(combos[c], config.levels[l], trials))
                rows.push_back(std::move(row));
        }

        if (combo_had_failure) result.failed_combos.push_back(combos[c].label());
        const fs::path csv_path = out_dir / combo_file_name(combos[c]);
        write_file(csv_path, csv_text(rows));
        result.csv_files.push_back(csv_path.string());
        ++result.combos_run;
        if (log)
            *log << "[" << result.combos_run << "/" << combos.size() << "] " << combos[c].label()
                 << ": " << rows.size() << " row(s)\n";
    }

    nlohmann::ordered_json manifest;
    manifest["master_seed"] = config.master_seed;
    {
        char digest[32];
        std::snprintf(digest, sizeof(digest), "%016llx",
                      static_cast<unsigned long long>(fnv1a64(serialize_caida(graph))));
        manifest["topology_fnv1a64"] = digest;
    }
    manifest["topology_nodes"] = graph.node_count();
    manifest["trials_per_level"] = config.trials_per_level;
    manifest["jobs"] = config.jobs;
    auto names = [](const auto& list) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& item : list) arr.push_back(to_string(item));
        return arr;
    };
    manifest["policies"] = names(config.policies);
    manifest["attacks"] = names(config.attacks);
    manifest["deployments"] = names(config.deployments);
    {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& level : config.levels) arr.push_back(level.label());
        manifest["levels"] = arr;
    }
    manifest["victim_pool"] = config.edge_only_victims ? "edge" : "all";
    manifest["include_rovpp_leak"] = config.include_rovpp_leak;
    manifest["count_attacker_outcomes"] = config.count_attacker_outcomes;
    manifest["aspa_register_all"] = config.aspa_register_all;
    manifest["ascones_cone_check"] = config.policy_options.ascones_cone_check;
    manifest["combos_run"] = result.combos_run;
    manifest["skipped_combos"] = result.skipped_combos;
    manifest["trials_run"] = result.trials_run;
    manifest["trials_failed"] = result.trials_failed;
    manifest["failed_trials"] = failures;
    manifest["levels_without_data"] = empty_levels;
    {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& file : result.csv_files) arr.push_back(fs::path(file).filename().string());
        manifest["csv_files"] = arr;
    }

    const fs::path manifest_path = out_dir / "manifest.json";
    write_file(manifest_path, manifest.dump(2) + "\n");
    result.manifest_file = manifest_path.string();

    if (log)
        *log << "wrote " << result.csv_files.size() << " CSV file(s) and " << manifest_path.string()
             << " (" << result.trials_failed << " failed trial(s))\n";
    return result;
}

} // namespace bgpsim
