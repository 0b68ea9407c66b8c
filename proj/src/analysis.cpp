#include "bgpsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "bgpsim/errors.hpp"
#include "bgpsim/experiment.hpp"
#include "bgpsim/numfmt.hpp"

namespace fs = std::filesystem;

namespace bgpsim {

double percent_sort_key(std::string_view label) {
    if (label == "only_one") return -1.0;
    return percent_numeric(label);
}

double percent_numeric(std::string_view label) {
    if (label == "only_one") return 0.0;
    return parse_double(label);
}

namespace {

std::vector<std::string_view> split_line(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i)
        if (i == line.size() || line[i] == ',') {
            fields.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    return fields;
}

[[noreturn]] void row_error(std::string_view source, std::size_t line_no,
                            const std::string& what) {
    throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": " + what);
}

double numeric_field(std::string_view source, std::size_t line_no, const char* column,
                     std::string_view text) {
    try {
        return parse_double(text);
    } catch (const ParseError&) {
        row_error(source, line_no,
                  std::string("column '") + column + "' is not numeric: '" + std::string(text) +
                      "'");
    }
}

bool known_outcome(std::string_view text) {
    return text == "ATTACKER_SUCCESS" || text == "VICTIM_SUCCESS" || text == "DISCONNECTED";
}

} // namespace

Table parse_table(std::string_view csv_bytes, std::string_view source_name) {
    Table table;
    std::size_t line_no = 0;
    std::size_t start = 0;
    bool header_seen = false;
    while (start <= csv_bytes.size()) {
        std::size_t end = csv_bytes.find('\n', start);
        if (end == std::string_view::npos) end = csv_bytes.size();
        std::string_view line = csv_bytes.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) {
            if (start > csv_bytes.size()) break;
            continue;
        }

        if (!header_seen) {
            if (line != kCsvHeader)
                throw ParseError(std::string(source_name) +
                                 ": header does not match the sweep schema (got '" +
                                 std::string(line) + "')");
            header_seen = true;
            continue;
        }

        const auto fields = split_line(line);
        if (fields.size() != 9)
            row_error(source_name, line_no,
                      "expected 9 fields, found " + std::to_string(fields.size()));

        TableRow row;
        row.scenario_cls = std::string(fields[0]);
        row.adopting_policy_cls = std::string(fields[1]);
        row.policy_cls = std::string(fields[2]);
        row.base_policy_cls = std::string(fields[3]);
        row.percent_adopt = std::string(fields[4]);
        row.outcome = std::string(fields[5]);
        row.value = numeric_field(source_name, line_no, "value", fields[6]);
        row.yerr = numeric_field(source_name, line_no, "yerr", fields[7]);
        row.deployment_type = std::string(fields[8]);

        if (!known_outcome(row.outcome))
            row_error(source_name, line_no, "column 'outcome' holds '" + row.outcome + "'");
        if (row.percent_adopt != "only_one") {
            try {
                (void)parse_double(row.percent_adopt);
            } catch (const ParseError&) {
                row_error(source_name, line_no,
                          "column 'percent_adopt' holds '" + row.percent_adopt + "'");
            }
        }
        table.rows.push_back(std::move(row));
    }
    if (!header_seen)
        throw ParseError(std::string(source_name) + ": empty file, no schema header");
    return table;
}

Table combine_files(std::span<const std::string> paths) {
    Table combined;
    for (const auto& path : paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("cannot read '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        Table one = parse_table(buf.str(), path);
        combined.rows.insert(combined.rows.end(), std::make_move_iterator(one.rows.begin()),
                             std::make_move_iterator(one.rows.end()));
    }
    sort_rows(combined);
    return combined;
}

Table combine_csv(const std::string& input_dir) {
    std::vector<std::string> paths;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(input_dir, ec))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            paths.push_back(entry.path().string());
    if (ec) throw ConfigError("cannot list '" + input_dir + "': " + ec.message());
    if (paths.empty()) throw ConfigError("no .csv files in '" + input_dir + "'");
    std::sort(paths.begin(), paths.end());
    return combine_files(paths);
}

void sort_rows(Table& table) {
    auto key = [](const TableRow& r) {
        return std::make_tuple(std::cref(r.scenario_cls), std::cref(r.adopting_policy_cls),
                               std::cref(r.deployment_type), percent_sort_key(r.percent_adopt),
                               std::cref(r.outcome), r.value, r.yerr, std::cref(r.policy_cls),
                               std::cref(r.base_policy_cls));
    };
    std::sort(table.rows.begin(), table.rows.end(),
              [&](const TableRow& a, const TableRow& b) { return key(a) < key(b); });
}

std::string table_csv(const Table& table) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const TableRow& r : table.rows) {
        out += r.scenario_cls;
        out += ',';
        out += r.adopting_policy_cls;
        out += ',';
        out += r.policy_cls;
        out += ',';
        out += r.base_policy_cls;
        out += ',';
        out += r.percent_adopt;
        out += ',';
        out += r.outcome;
        out += ',';
        out += format_double(r.value);
        out += ',';
        out += format_double(r.yerr);
        out += ',';
        out += r.deployment_type;
        out += '\n';
    }
    return out;
}

namespace {

ColumnStats column_stats(std::vector<double> xs) {
    ColumnStats s;
    s.n = xs.size();
    if (xs.empty()) return s;
    std::sort(xs.begin(), xs.end());
    s.min = xs.front();
    s.max = xs.back();
    const std::size_t mid = xs.size() / 2;
    s.median = xs.size() % 2 ? xs[mid] : (xs[mid - 1] + xs[mid]) / 2.0;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    if (xs.size() >= 2) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return s;
}

} // namespace

std::vector<SummaryGroup> summarize(const Table& table) {
    std::map<std::tuple<std::string, std::string, std::string>,
             std::array<std::vector<double>, 3>>
        groups;
    for (const TableRow& r : table.rows) {
        auto& cols = groups[{r.adopting_policy_cls, r.scenario_cls, r.deployment_type}];
        cols[0].push_back(r.value);
        cols[1].push_back(r.yerr);
        cols[2].push_back(percent_numeric(r.percent_adopt));
    }
    std::vector<SummaryGroup> out;
    out.reserve(groups.size());
    for (auto& [k, cols] : groups) {
        SummaryGroup g;
        g.policy = std::get<0>(k);
        g.scenario = std::get<1>(k);
        g.deployment = std::get<2>(k);
        g.value = column_stats(std::move(cols[0]));
        g.yerr = column_stats(std::move(cols[1]));
        g.percent = column_stats(std::move(cols[2]));
        out.push_back(std::move(g));
    }
    return out;
}

std::string summary_csv(std::span<const SummaryGroup> groups) {
    std::string out = "policy,scenario,deployment_type,column,n,mean,median,stddev,min,max\n";
    for (const SummaryGroup& g : groups) {
        const std::pair<const char*, const ColumnStats*> cols[] = {
            {"value", &g.value}, {"yerr", &g.yerr}, {"percent_adopt", &g.percent}};
        for (const auto& [name, stats] : cols) {
            out += g.policy;
            out += ',';
            out += g.scenario;
            out += ',';
            out += g.deployment;
            out += ',';
            out += name;
            out += ',';
            out += std::to_string(stats->n);
            out += ',';
            out += format_double(stats->mean);
            out += ',';
            out += format_double(stats->median);
            out += ',';
            out += format_double(stats->stddev);
            out += ',';
            out += format_double(stats->min);
            out += ',';
            out += format_double(stats->max);
            out += '\n';
        }
    }
    return out;
}

} // namespace bgpsim
