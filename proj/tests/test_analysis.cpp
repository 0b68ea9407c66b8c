#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "bgpsim/analysis.hpp"
#include "bgpsim/errors.hpp"
#include "bgpsim/experiment.hpp"
#include "support/xml_check.hpp"

using namespace bgpsim;
namespace fs = std::filesystem;

namespace {

TableRow make_row(std::string scenario, std::string policy, std::string percent,
                  std::string outcome, double value, double yerr = 0.0,
                  std::string deployment = "Stubs") {
    TableRow r;
    r.scenario_cls = std::move(scenario);
    r.adopting_policy_cls = std::move(policy);
    r.policy_cls = "BGP";
    r.base_policy_cls = "BGP";
    r.percent_adopt = std::move(percent);
    r.outcome = std::move(outcome);
    r.value = value;
    r.yerr = yerr;
    r.deployment_type = std::move(deployment);
    return r;
}

std::string row_line(const TableRow& r) {
    std::ostringstream out;
    out << r.scenario_cls << ',' << r.adopting_policy_cls << ',' << r.policy_cls << ','
        << r.base_policy_cls << ',' << r.percent_adopt << ',' << r.outcome << ',' << r.value
        << ',' << r.yerr << ',' << r.deployment_type;
    return out.str();
}

std::string with_header(std::initializer_list<const char*> lines) {
    std::string text(kCsvHeader);
    text += '\n';
    for (const char* line : lines) {
        text += line;
        text += '\n';
    }
    return text;
}

fs::path fresh_dir(const char* leaf) {
    const fs::path dir = fs::temp_directory_path() / leaf;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/** A small but fully crossed result table: 2 policies x 2 attacks x 2
 *  deployment sets x 3 levels x 3 outcomes, with values that depend on every
 *  axis so no two charts collapse to the same picture. */
Table synthetic_table() {
    Table t;
    const char* policies[] = {"ROV", "ASPA"};
    const char* attacks[] = {"PrefixHijack", "SubprefixHijack"};
    const char* deployments[] = {"Stubs", "Multihomed"};
    const char* levels[] = {"only_one", "20", "80"};
    const char* outcomes[] = {"ATTACKER_SUCCESS", "VICTIM_SUCCESS", "DISCONNECTED"};
    for (int p = 0; p < 2; ++p)
        for (int a = 0; a < 2; ++a)
            for (int d = 0; d < 2; ++d)
                for (int l = 0; l < 3; ++l) {
                    // victory share grows with adoption, attack share shrinks
                    const double vs = 20.0 + 8.0 * p + 4.0 * a + 2.0 * d + 15.0 * l;
                    const double as = 70.0 - vs / 2.0;
                    const double values[] = {as, vs, 100.0 - as - vs};
                    for (int o = 0; o < 3; ++o) {
                        TableRow r = make_row(attacks[a], policies[p], levels[l], outcomes[o],
                                              values[o], 0.5 + o, deployments[d]);
                        if (policies[p] == std::string("ASPA")) r.base_policy_cls = "ROV";
                        t.rows.push_back(r);
                    }
                }
    sort_rows(t);
    return t;
}

} // namespace

TEST_CASE("percent keys order only_one below every numeric level") {
    CHECK(percent_sort_key("only_one") == doctest::Approx(-1.0));
    CHECK(percent_sort_key("5") == doctest::Approx(5.0));
    CHECK(percent_sort_key("40") > percent_sort_key("5"));
    CHECK(percent_numeric("only_one") == doctest::Approx(0.0));
    CHECK(percent_numeric("80") == doctest::Approx(80.0));
}

TEST_CASE("parse_table reads well formed output and reports broken input precisely") {
    SUBCASE("round trip through table_csv") {
        Table t = synthetic_table();
        const Table back = parse_table(table_csv(t), "mem");
        REQUIRE(back.rows.size() == t.rows.size());
        CHECK(back.rows == t.rows);
    }
    SUBCASE("blank lines and CRLF are tolerated") {
        std::string text(kCsvHeader);
        text += "\r\n\r\nPrefixHijack,ROV,BGP,BGP,only_one,VICTIM_SUCCESS,50,1.5,Stubs\r\n";
        const Table t = parse_table(text, "crlf.csv");
        REQUIRE(t.rows.size() == 1);
        CHECK(t.rows[0].value == doctest::Approx(50.0));
        CHECK(t.rows[0].percent_adopt == "only_one");
    }
    SUBCASE("wrong header is refused, naming the file") {
        CHECK_THROWS_WITH_AS(parse_table("a,b,c\n1,2,3\n", "bad.csv"),
                             doctest::Contains("bad.csv"), ParseError);
        CHECK_THROWS_WITH_AS(parse_table("a,b,c\n", "bad.csv"),
                             doctest::Contains("schema"), ParseError);
    }
    SUBCASE("empty input is refused") {
        CHECK_THROWS_AS(parse_table("", "empty.csv"), ParseError);
        CHECK_THROWS_AS(parse_table("\n\n", "empty.csv"), ParseError);
    }
    SUBCASE("field count errors carry the line number") {
        const std::string text = with_header({"PrefixHijack,ROV,BGP,BGP,10,VICTIM_SUCCESS,50,1"});
        CHECK_THROWS_WITH_AS(parse_table(text, "short.csv"), doctest::Contains("short.csv:2"),
                             ParseError);
    }
    SUBCASE("non numeric value names the column") {
        const std::string text =
            with_header({"PrefixHijack,ROV,BGP,BGP,10,VICTIM_SUCCESS,fifty,1,Stubs"});
        CHECK_THROWS_WITH_AS(parse_table(text, "t.csv"), doctest::Contains("value"), ParseError);
    }
    SUBCASE("unknown outcome and malformed percent are refused") {
        CHECK_THROWS_WITH_AS(
            parse_table(with_header({"PrefixHijack,ROV,BGP,BGP,10,MAYBE,50,1,Stubs"}), "t.csv"),
            doctest::Contains("outcome"), ParseError);
        CHECK_THROWS_AS(
            parse_table(with_header({"PrefixHijack,ROV,BGP,BGP,ten,VICTIM_SUCCESS,50,1,Stubs"}),
                        "t.csv"),
            ParseError);
    }
}

TEST_CASE("combine_files merges result shards under one header in canonical order") {
    const fs::path dir = fresh_dir("bgpsim_analysis_combine");
    const std::string a =
        with_header({"SubprefixHijack,ROV,BGP,BGP,40,VICTIM_SUCCESS,60,1,Stubs",
                     "SubprefixHijack,ROV,BGP,BGP,only_one,VICTIM_SUCCESS,20,1,Stubs"});
    const std::string b =
        with_header({"PrefixHijack,ASPA,BGP,ROV,40,VICTIM_SUCCESS,70,1,Stubs",
                     "SubprefixHijack,ROV,BGP,BGP,5,VICTIM_SUCCESS,30,1,Stubs"});
    {
        std::ofstream(dir / "a.csv") << a;
        std::ofstream(dir / "b.csv") << b;
        std::ofstream(dir / "notes.txt") << "not a result file";
    }

    const Table merged = combine_csv(dir.string());
    REQUIRE(merged.rows.size() == 4);
    // ASPA sorts before ROV within a scenario; only_one precedes numeric levels
    CHECK(merged.rows[0].adopting_policy_cls == "ASPA");
    CHECK(merged.rows[1].percent_adopt == "only_one");
    CHECK(merged.rows[2].percent_adopt == "5");
    CHECK(merged.rows[3].percent_adopt == "40");

    const std::string csv = table_csv(merged);
    CHECK(csv.find("scenario_cls") == 0);
    CHECK(csv.find("scenario_cls", 1) == std::string::npos); // header exactly once

    SUBCASE("a shard with a different schema is rejected by name") {
        std::ofstream(dir / "c.csv") << "not,a,result\n";
        CHECK_THROWS_WITH_AS(combine_csv(dir.string()), doctest::Contains("c.csv"), ParseError);
    }
    SUBCASE("a directory with no csv files is an error") {
        const fs::path empty = fresh_dir("bgpsim_analysis_empty");
        CHECK_THROWS_AS(combine_csv(empty.string()), ConfigError);
        const std::vector<std::string> missing = {(empty / "missing.csv").string()};
        CHECK_THROWS_AS(combine_files(missing), ConfigError);
    }
    fs::remove_all(dir);
}

TEST_CASE("summarize computes exact per group statistics") {
    Table t;
    t.rows.push_back(make_row("PrefixHijack", "ROV", "only_one", "VICTIM_SUCCESS", 0.0, 1.0));
    t.rows.push_back(make_row("PrefixHijack", "ROV", "50", "VICTIM_SUCCESS", 100.0, 3.0));
    t.rows.push_back(make_row("SubprefixHijack", "ASPA", "10", "ATTACKER_SUCCESS", 42.0, 0.5));

    SUBCASE("two point group: mean, median, sample stddev") {
        const auto groups = summarize(t);
        REQUIRE(groups.size() == 2);
        // groups sort by policy first
        CHECK(groups[0].policy == "ASPA");
        const SummaryGroup& rov = groups[1];
        CHECK(rov.scenario == "PrefixHijack");
        CHECK(rov.value.n == 2);
        CHECK(rov.value.mean == doctest::Approx(50.0));
        CHECK(rov.value.median == doctest::Approx(50.0));
        CHECK(rov.value.stddev == doctest::Approx(70.71067811865476));
        CHECK(rov.value.min == doctest::Approx(0.0));
        CHECK(rov.value.max == doctest::Approx(100.0));
        CHECK(rov.yerr.mean == doctest::Approx(2.0));
        // only_one counts as zero adoption in the numeric view
        CHECK(rov.percent.mean == doctest::Approx(25.0));
        CHECK(rov.percent.min == doctest::Approx(0.0));
    }
    SUBCASE("singleton group has zero spread") {
        const auto groups = summarize(t);
        const SummaryGroup& aspa = groups[0];
        CHECK(aspa.value.n == 1);
        CHECK(aspa.value.stddev == doctest::Approx(0.0));
        CHECK(aspa.value.median == doctest::Approx(42.0));
    }
    SUBCASE("row order does not change the summary") {
        Table shuffled;
        shuffled.rows = {t.rows[2], t.rows[0], t.rows[1]};
        CHECK(summary_csv(summarize(shuffled)) == summary_csv(summarize(t)));
    }
    SUBCASE("summary csv carries one line per column per group") {
        const std::string csv = summary_csv(summarize(t));
        CHECK(csv.find("policy,scenario,deployment_type,column,n,mean,median,stddev,min,max\n") ==
              0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 * 2);
        CHECK(csv.find("ROV,PrefixHijack,Stubs,value,2,50,50,70.71067811865476,0,100\n") !=
              std::string::npos);
    }
    SUBCASE("median of an odd sized group is the middle element") {
        Table odd;
        odd.rows.push_back(make_row("PrefixHijack", "ROV", "10", "VICTIM_SUCCESS", 10.0));
        odd.rows.push_back(make_row("PrefixHijack", "ROV", "20", "VICTIM_SUCCESS", 70.0));
        odd.rows.push_back(make_row("PrefixHijack", "ROV", "30", "VICTIM_SUCCESS", 20.0));
        CHECK(summarize(odd)[0].value.median == doctest::Approx(20.0));
    }
}

TEST_CASE("xml checker accepts sane documents and catches broken nesting") {
    using testsupport::xml_error;
    CHECK(xml_error("<?xml version=\"1.0\"?>\n<a><b x=\"1\"/></a>\n") == "");
    CHECK(xml_error("<a>text &amp; more</a>") == "");
    CHECK(xml_error("<a><b></a>") != "");
    CHECK(xml_error("<a>") != "");
    CHECK(xml_error("<a x=1></a>") != "");
    CHECK(xml_error("<a>fish & chips</a>") != "");
    CHECK(xml_error("<a/><b/>") != ""); // two roots
}

TEST_CASE("render draws every chart kind as well formed svg with a data companion") {
    const Table table = synthetic_table();
    const fs::path dir = fresh_dir("bgpsim_analysis_plots");

    SUBCASE("an empty selection renders nothing and says so") {
        PlotSpec spec;
        spec.kind = PlotKind::Bar;
        spec.policy = "NoSuchPolicy";
        spec.output_path = (dir / "none.svg").string();
        std::string warning;
        CHECK_FALSE(render(spec, table, &warning));
        CHECK(warning.find("no rows") != std::string::npos);
        CHECK_FALSE(fs::exists(dir / "none.svg"));
        CHECK_FALSE(fs::exists(dir / "none.csv"));
    }

    SUBCASE("each kind emits xml that parses and a csv that matches its selection") {
        for (PlotKind kind : kAllPlotKinds) {
            CAPTURE(to_string(kind));
            PlotSpec spec;
            spec.kind = kind;
            if (kind != PlotKind::CorrelationHeatmap) spec.policy = "ROV";
            if (kind == PlotKind::Bar || kind == PlotKind::Heatmap2d ||
                kind == PlotKind::CrossbarYerr || kind == PlotKind::Multiline)
                spec.scenario = "SubprefixHijack";
            spec.output_path = (dir / (std::string(to_string(kind)) + ".svg")).string();
            REQUIRE(render(spec, table));

            const std::string svg = slurp(spec.output_path);
            CHECK(testsupport::xml_error(svg) == "");
            CHECK(svg.find("<svg") != std::string::npos);

            // companion csv holds exactly the rows the chart was drawn from
            fs::path csv_path(spec.output_path);
            csv_path.replace_extension(".csv");
            const Table companion = parse_table(slurp(csv_path), csv_path.string());
            CHECK(!companion.rows.empty());
            std::set<std::string> all_lines;
            for (const TableRow& r : table.rows) all_lines.insert(row_line(r));
            for (const TableRow& r : companion.rows) {
                CHECK(all_lines.count(row_line(r)) == 1);
                CHECK(r.outcome == "VICTIM_SUCCESS");
                if (kind != PlotKind::CorrelationHeatmap) CHECK(r.adopting_policy_cls == "ROV");
            }
        }
    }

    SUBCASE("labels with xml metacharacters are escaped") {
        Table odd = table;
        odd.rows[0].deployment_type = "A&B<C>";
        odd.rows[0].outcome = "VICTIM_SUCCESS";
        PlotSpec spec;
        spec.kind = PlotKind::Bar;
        spec.output_path = (dir / "escaped.svg").string();
        REQUIRE(render(spec, odd));
        CHECK(testsupport::xml_error(slurp(spec.output_path)) == "");
    }

    fs::remove_all(dir);
}

TEST_CASE("render_family fans out over the policies and scenarios in the table") {
    const Table table = synthetic_table();
    const fs::path dir = fresh_dir("bgpsim_analysis_family");

    // 2 policies x 2 scenarios in the synthetic table
    CHECK(render_family(PlotKind::Bar, table, dir.string()).size() == 4);
    CHECK(render_family(PlotKind::ScenarioBar, table, dir.string()).size() == 2);
    CHECK(render_family(PlotKind::CorrelationHeatmap, table, dir.string()).size() == 1);
    const auto lines = render_family(PlotKind::Multiline, table, dir.string());
    REQUIRE(lines.size() == 4);
    CHECK(fs::path(lines[0]).filename().string() == "multiline_ASPA_PrefixHijack.svg");

    std::size_t svg_count = 0;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".svg") {
            ++svg_count;
            CHECK(testsupport::xml_error(slurp(entry.path())) == "");
        }
    CHECK(svg_count == 4 + 2 + 1 + 4);
    fs::remove_all(dir);
}
