#pragma once

// Post-processing of sweep output: concatenating per-combination CSVs into
// one canonical table, descriptive statistics, and deterministic SVG charts
// (each with a companion CSV holding the exact rows it plotted).

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bgpsim {

/// One parsed line of the sweep CSV schema (see experiment.hpp kCsvHeader).
struct TableRow {
    std::string scenario_cls;
    std::string adopting_policy_cls;
    std::string policy_cls;
    std::string base_policy_cls;
    std::string percent_adopt;
    std::string outcome;
    double value = 0.0;
    double yerr = 0.0;
    std::string deployment_type;

    friend bool operator==(const TableRow&, const TableRow&) = default;
};

struct Table {
    std::vector<TableRow> rows;
};

/// Ordering key for adoption-level labels: only_one sorts before every
/// numeric percent.
double percent_sort_key(std::string_view label);
/// Numeric reading used for statistics and correlations; only_one counts
/// as 0 percent (a single AS is a vanishing fraction of any real topology).
double percent_numeric(std::string_view label);

/** Strict parse of one CSV document. The header must match the sweep schema
 *  byte-for-byte and every row needs all nine fields; errors carry
 *  `source_name` and the 1-based line number. */
Table parse_table(std::string_view csv_bytes, std::string_view source_name);

/// Concatenation of explicitly listed CSV files, then canonical sorting.
Table combine_files(std::span<const std::string> paths);

/** Every *.csv directly inside `input_dir` (sorted by file name), combined.
 *  Throws ConfigError when the directory holds no CSV files at all. */
Table combine_csv(const std::string& input_dir);

/// Canonical row order: scenario, policy, deployment, adoption level
/// (only_one first, then numeric), outcome, then remaining fields. Stable
/// against input file order, which is what makes combining deterministic.
void sort_rows(Table& table);

/// The exact CSV bytes for a table (schema header + one line per row).
std::string table_csv(const Table& table);

struct ColumnStats {
    double mean = 0.0;
    double median = 0.0;
    double stddev = 0.0; // sample (n-1); 0 when n < 2
    double min = 0.0;
    double max = 0.0;
    std::size_t n = 0;
};

/// Descriptive statistics for one (policy, scenario, deployment) group,
/// computed over the value, yerr and adoption-percent columns.
struct SummaryGroup {
    std::string policy;
    std::string scenario;
    std::string deployment;
    ColumnStats value;
    ColumnStats yerr;
    ColumnStats percent;
};

std::vector<SummaryGroup> summarize(const Table& table);
std::string summary_csv(std::span<const SummaryGroup> groups);

enum class PlotKind {
    Bar,                // mean of the outcome per deployment type
    ScenarioBar,        // mean of the outcome per attack scenario
    Heatmap2d,          // adoption level x deployment grid, value as heat
    CorrelationHeatmap, // Pearson r(percent, value) per scenario x policy cell
    CrossbarYerr,       // yerr min/median/max per deployment type
    Multiline,          // value vs adoption level, one line per deployment
};

inline constexpr PlotKind kAllPlotKinds[] = {
    PlotKind::Bar,           PlotKind::ScenarioBar,  PlotKind::Heatmap2d,
    PlotKind::CorrelationHeatmap, PlotKind::CrossbarYerr, PlotKind::Multiline,
};

const char* to_string(PlotKind kind);
PlotKind plot_kind_from_string(std::string_view name);

struct PlotSpec {
    PlotKind kind = PlotKind::Multiline;
    std::string policy;     // filter on AdoptingPolicyCls; empty = any
    std::string scenario;   // filter on scenario_cls; empty = any
    std::string deployment; // filter on deployment_type; empty = any
    std::string outcome = "VICTIM_SUCCESS";
    std::string output_path; // the .svg; the companion CSV swaps the extension
};

/** Renders one chart. Writes `spec.output_path` (SVG) and the companion CSV
 *  holding the selected table rows verbatim. Returns false without writing
 *  anything when the filter selects no rows; `warning` then explains why. */
bool render(const PlotSpec& spec, const Table& table, std::string* warning = nullptr);

/** The full chart family for one kind: one file per (policy, scenario) for
 *  the per-combo kinds, one per policy for ScenarioBar, a single grid for
 *  CorrelationHeatmap. Returns the SVG paths written, in order. */
std::vector<std::string> render_family(PlotKind kind, const Table& table,
                                       const std::string& out_dir);

} // namespace bgpsim
