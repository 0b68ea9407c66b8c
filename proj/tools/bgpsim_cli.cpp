// Command-line front end: topology inspection, sweep execution, result
// combination, and chart rendering as subcommands over the simulation
// library. Exit codes: 0 success, 1 runtime failure, 2 usage/config error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bgpsim/analysis.hpp"
#include "bgpsim/errors.hpp"
#include "bgpsim/experiment.hpp"
#include "bgpsim/policies.hpp"
#include "bgpsim/rng.hpp"
#include "bgpsim/scenarios.hpp"
#include "bgpsim/topology.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw bgpsim::ConfigError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& bytes) {
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    std::ofstream out(target, std::ios::binary | std::ios::trunc);
    if (!out) throw bgpsim::ConfigError("cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw bgpsim::ConfigError("short write to '" + path + "'");
}

template <typename Seq, typename Fmt>
std::string join(const Seq& seq, Fmt fmt) {
    std::string out;
    for (const auto& item : seq) {
        if (!out.empty()) out += ", ";
        out += fmt(item);
    }
    return out;
}

/// The exact vocabularies the CSV columns use; --help must list them all.
std::string vocab_footer() {
    std::string text = "Vocabularies:\n";
    text += "  policies:    " +
            join(bgpsim::kAllPolicyKinds, [](auto k) { return bgpsim::to_string(k); }) + "\n";
    text += "  scenarios:   " +
            join(bgpsim::kAllAttackKinds, [](auto k) { return bgpsim::to_string(k); }) + "\n";
    text += "  deployments: InputClique, Stubs, Multihomed, NoDeploymentType\n";
    text += "  levels:      " +
            join(bgpsim::default_levels(), [](const auto& l) { return l.label(); }) +
            " (defaults); any integer percent 1-100 or fraction in (0,1]\n";
    text += "  plot kinds:  " +
            join(bgpsim::kAllPlotKinds, [](auto k) { return bgpsim::to_string(k); }) +
            ", or all\n";
    return text;
}

// ---- run subcommand ----------------------------------------------------

struct RunSettings {
    bgpsim::SweepConfig sweep;
    std::string caida;
    bool jobs_given = false;
};

std::vector<bgpsim::AdoptionLevel> levels_from_json(const ordered_json& value) {
    std::vector<bgpsim::AdoptionLevel> out;
    for (const auto& item : value) {
        if (item.is_string())
            out.push_back(bgpsim::level_from_string(item.get<std::string>()));
        else if (item.is_number_integer())
            out.push_back(bgpsim::level_from_string(std::to_string(item.get<long long>())));
        else if (item.is_number_float())
            out.push_back(bgpsim::AdoptionLevel::of(item.get<double>()));
        else
            throw bgpsim::ConfigError("levels entries must be strings or numbers");
    }
    return out;
}

RunSettings load_run_config(const std::string& path) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw bgpsim::ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object())
        throw bgpsim::ConfigError("config '" + path + "' must be a JSON object");

    RunSettings settings;
    bgpsim::SweepConfig& sweep = settings.sweep;
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "caida") {
                settings.caida = value.get<std::string>();
            } else if (key == "output_dir") {
                sweep.output_dir = value.get<std::string>();
            } else if (key == "master_seed") {
                sweep.master_seed = static_cast<std::uint64_t>(value.get<long long>());
            } else if (key == "trials_per_level") {
                sweep.trials_per_level = value.get<int>();
            } else if (key == "jobs") {
                sweep.jobs = value.get<int>();
                settings.jobs_given = true;
            } else if (key == "policies") {
                sweep.policies.clear();
                for (const auto& name : value)
                    sweep.policies.push_back(bgpsim::policy_from_string(name.get<std::string>()));
            } else if (key == "scenarios") {
                sweep.attacks.clear();
                for (const auto& name : value)
                    sweep.attacks.push_back(bgpsim::attack_from_string(name.get<std::string>()));
            } else if (key == "deployments") {
                sweep.deployments.clear();
                for (const auto& name : value)
                    sweep.deployments.push_back(
                        bgpsim::deployment_from_string(name.get<std::string>()));
            } else if (key == "levels") {
                sweep.levels = levels_from_json(value);
            } else if (key == "input_clique") {
                sweep.clique_override.clear();
                for (const auto& asn : value) {
                    const auto v = asn.get<long long>();
                    if (v <= 0 || v > 0xffffffffLL)
                        throw bgpsim::ConfigError("input_clique entries must be positive ASNs");
                    sweep.clique_override.push_back(static_cast<bgpsim::ASNumber>(v));
                }
            } else if (key == "edge_only_victims") {
                sweep.edge_only_victims = value.get<bool>();
            } else if (key == "include_rovpp_leak") {
                sweep.include_rovpp_leak = value.get<bool>();
            } else if (key == "count_attacker_outcomes") {
                sweep.count_attacker_outcomes = value.get<bool>();
            } else if (key == "aspa_register_all") {
                sweep.aspa_register_all = value.get<bool>();
            } else if (key == "ascones_cone_check") {
                sweep.policy_options.ascones_cone_check = value.get<bool>();
            } else {
                throw bgpsim::ConfigError(
                    "unknown config key '" + key + "' in '" + path +
                    "' (known: caida, output_dir, master_seed, trials_per_level, jobs, "
                    "policies, scenarios, deployments, levels, input_clique, "
                    "edge_only_victims, include_rovpp_leak, count_attacker_outcomes, "
                    "aspa_register_all, ascones_cone_check)");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw bgpsim::ConfigError("config '" + path + "': " + e.what());
    }
    return settings;
}

struct RunFlags {
    std::string config_path;
    std::string out_dir;
    std::string caida;
    std::string dump_ribs;
    long long seed = 0;
    int trials = 0;
    int jobs = 0;
    std::vector<std::string> policies, scenarios, deployments, levels;
    bool seed_given = false, trials_given = false, jobs_given = false;
};

int do_run(const RunFlags& flags) {
    RunSettings settings = load_run_config(flags.config_path);
    bgpsim::SweepConfig& sweep = settings.sweep;

    if (!flags.out_dir.empty()) sweep.output_dir = flags.out_dir;
    if (!flags.caida.empty()) settings.caida = flags.caida;
    if (flags.seed_given) sweep.master_seed = static_cast<std::uint64_t>(flags.seed);
    if (flags.trials_given) sweep.trials_per_level = flags.trials;
    if (flags.jobs_given) {
        sweep.jobs = flags.jobs;
        settings.jobs_given = true;
    }
    if (!flags.policies.empty()) {
        sweep.policies.clear();
        for (const auto& name : flags.policies)
            sweep.policies.push_back(bgpsim::policy_from_string(name));
    }
    if (!flags.scenarios.empty()) {
        sweep.attacks.clear();
        for (const auto& name : flags.scenarios)
            sweep.attacks.push_back(bgpsim::attack_from_string(name));
    }
    if (!flags.deployments.empty()) {
        sweep.deployments.clear();
        for (const auto& name : flags.deployments)
            sweep.deployments.push_back(bgpsim::deployment_from_string(name));
    }
    if (!flags.levels.empty()) {
        sweep.levels.clear();
        for (const auto& name : flags.levels)
            sweep.levels.push_back(bgpsim::level_from_string(name));
    }

    if (sweep.output_dir.empty())
        throw bgpsim::ConfigError("no output directory: pass --out or set output_dir");
    if (settings.caida.empty())
        throw bgpsim::ConfigError(
            "no topology: set \"caida\" in the config, pass --caida, or export BGPSIM_CAIDA");
    if (!settings.jobs_given) {
        const unsigned hw = std::thread::hardware_concurrency();
        sweep.jobs = hw == 0 ? 1 : static_cast<int>(hw);
    }

    const bgpsim::ASGraph graph = bgpsim::parse_caida(read_text_file(settings.caida));
    std::cerr << "parsed " << settings.caida << ": " << graph.node_count() << " ASes\n";

    const bgpsim::SweepResult result = bgpsim::run_sweep(graph, sweep, &std::cerr);

    if (!flags.dump_ribs.empty()) {
        if (sweep.policies.size() != 1 || sweep.attacks.size() != 1 ||
            sweep.deployments.size() != 1 || sweep.levels.size() != 1 ||
            sweep.trials_per_level != 1)
            throw bgpsim::ConfigError(
                "--dump-ribs describes a single trial: use exactly one policy, scenario, "
                "deployment and level, and --trials 1");
        const bgpsim::SweepDataset dataset = bgpsim::prepare_dataset(graph, sweep);
        const bgpsim::Combo combo{sweep.policies[0], sweep.attacks[0], sweep.deployments[0]};
        const std::uint64_t seed = bgpsim::trial_seed(
            sweep.master_seed, static_cast<std::uint64_t>(combo.attack), 0, 0);
        write_text_file(flags.dump_ribs,
                        bgpsim::trial_ribs_json(dataset, combo, sweep.levels[0], seed, sweep));
        std::cout << "ribs: " << flags.dump_ribs << "\n";
    }

    std::cout << "combos: " << result.combos_run << " (skipped " << result.skipped_combos.size()
              << ")\ntrials: " << result.trials_run << " (failed " << result.trials_failed
              << ")\nmanifest: " << result.manifest_file << "\n";
    if (result.trials_failed > 0) {
        std::cerr << "error: trials failed in: " << join(result.failed_combos, [](const auto& s) {
            return s;
        }) << " (details in the manifest)\n";
        return 1;
    }
    return 0;
}

// ---- the other subcommands ----------------------------------------------

int do_topo(const std::string& caida, bool stats) {
    const bgpsim::ASGraph graph = bgpsim::parse_caida(read_text_file(caida));
    std::cout << bgpsim::graph_stats_json(graph, stats);
    return 0;
}

int do_analyze(const std::string& in_dir, const std::string& out_file,
               const std::string& summary_file) {
    const bgpsim::Table table = bgpsim::combine_csv(in_dir);
    write_text_file(out_file, bgpsim::table_csv(table));
    std::cout << "combined " << table.rows.size() << " row(s) into " << out_file << "\n";
    if (!summary_file.empty()) {
        const auto groups = bgpsim::summarize(table);
        write_text_file(summary_file, bgpsim::summary_csv(groups));
        std::cout << "summarized " << groups.size() << " group(s) into " << summary_file << "\n";
    }
    return 0;
}

int do_plot(const std::string& in_file, const std::string& out_dir, const std::string& kind) {
    const bgpsim::Table table = bgpsim::parse_table(read_text_file(in_file), in_file);
    if (table.rows.empty()) {
        std::cerr << "warning: '" << in_file << "' has no data rows; nothing to plot\n";
        return 0;
    }
    std::vector<bgpsim::PlotKind> kinds;
    if (kind == "all")
        kinds.assign(std::begin(bgpsim::kAllPlotKinds), std::end(bgpsim::kAllPlotKinds));
    else
        kinds.push_back(bgpsim::plot_kind_from_string(kind));

    std::size_t written = 0;
    for (const bgpsim::PlotKind k : kinds)
        written += bgpsim::render_family(k, table, out_dir).size();
    if (written == 0) {
        std::cerr << "warning: no chart had matching rows; nothing written\n";
        return 0;
    }
    std::cout << "wrote " << written << " chart(s) with data companions to " << out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"BGP security-policy adoption simulator"};
    app.footer(vocab_footer());
    app.require_subcommand(1);

    std::string topo_caida;
    bool topo_stats = false;
    auto* topo = app.add_subcommand("topo", "Parse a relationship dataset and print its shape");
    topo->add_option("--caida", topo_caida, "CAIDA serial-2 relationship file")
        ->envname("BGPSIM_CAIDA")
        ->required();
    topo->add_flag("--stats", topo_stats, "also compute deployment category sizes");

    RunFlags run_flags;
    auto* run = app.add_subcommand("run", "Execute a Monte Carlo sweep and write CSV results");
    run->footer(vocab_footer());
    run->add_option("--config", run_flags.config_path, "JSON run configuration")->required();
    run->add_option("--out", run_flags.out_dir, "output directory for CSVs and the manifest");
    run->add_option("--caida", run_flags.caida, "topology file (overrides the config)")
        ->envname("BGPSIM_CAIDA");
    auto* seed_opt = run->add_option("--seed", run_flags.seed, "master seed");
    auto* trials_opt = run->add_option("--trials", run_flags.trials, "trials per adoption level");
    auto* jobs_opt = run->add_option("--jobs", run_flags.jobs, "worker threads");
    run->add_option("--policies", run_flags.policies, "adopted policies (comma separated)")
        ->delimiter(',');
    run->add_option("--scenarios", run_flags.scenarios, "attack scenarios (comma separated)")
        ->delimiter(',');
    run->add_option("--deployments", run_flags.deployments,
                    "deployment categories (comma separated)")
        ->delimiter(',');
    run->add_option("--levels", run_flags.levels, "adoption levels (comma separated)")
        ->delimiter(',');
    run->add_option("--dump-ribs", run_flags.dump_ribs,
                    "write the converged RIBs of a single-trial run as JSON");

    std::string an_in, an_out, an_summary;
    auto* analyze = app.add_subcommand("analyze", "Combine per-combination CSVs into one table");
    analyze->add_option("--in", an_in, "directory of sweep CSV files")->required();
    analyze->add_option("--out", an_out, "combined CSV path")->required();
    analyze->add_option("--summary", an_summary, "also write per-group statistics here");

    std::string plot_in, plot_out, plot_kind = "all";
    auto* plot = app.add_subcommand("plot", "Render SVG charts from a combined CSV");
    plot->add_option("--in", plot_in, "combined CSV file")->required();
    plot->add_option("--out", plot_out, "directory for the SVG files")->required();
    plot->add_option("--kind", plot_kind, "chart kind, or 'all'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e); // --help and friends
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(topo)) return do_topo(topo_caida, topo_stats);
        if (app.got_subcommand(run)) {
            run_flags.seed_given = seed_opt->count() > 0;
            run_flags.trials_given = trials_opt->count() > 0;
            run_flags.jobs_given = jobs_opt->count() > 0;
            return do_run(run_flags);
        }
        if (app.got_subcommand(analyze)) return do_analyze(an_in, an_out, an_summary);
        if (app.got_subcommand(plot)) return do_plot(plot_in, plot_out, plot_kind);
    } catch (const bgpsim::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
