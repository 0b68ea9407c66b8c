#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "bgpsim/analysis.hpp"
#include "bgpsim/errors.hpp"
#include "bgpsim/numfmt.hpp"

namespace fs = std::filesystem;

namespace bgpsim {

const char* to_string(PlotKind kind) {
    switch (kind) {
        case PlotKind::Bar: return "bar";
        case PlotKind::ScenarioBar: return "scenario_bar";
        case PlotKind::Heatmap2d: return "heatmap2d";
        case PlotKind::CorrelationHeatmap: return "correlation_heatmap";
        case PlotKind::CrossbarYerr: return "crossbar_yerr";
        case PlotKind::Multiline: return "multiline";
    }
    return "?";
}

PlotKind plot_kind_from_string(std::string_view name) {
    for (PlotKind kind : kAllPlotKinds)
        if (name == to_string(kind)) return kind;
    throw ConfigError("unknown plot kind '" + std::string(name) +
                      "' (want bar, scenario_bar, heatmap2d, correlation_heatmap, "
                      "crossbar_yerr or multiline)");
}

namespace {

// fixed geometry: deterministic output beats pretty layout here
constexpr double kWidth = 760, kHeight = 440;
constexpr double kLeft = 64, kRight = 580, kTop = 48, kBottom = 376;

std::string f2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string esc(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

struct Svg {
    std::string body;

    void rect(double x, double y, double w, double h, const std::string& fill,
              const std::string& stroke = "none") {
        body += "<rect x=\"" + f2(x) + "\" y=\"" + f2(y) + "\" width=\"" + f2(w) +
                "\" height=\"" + f2(h) + "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"/>\n";
    }
    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double width = 1.0) {
        body += "<line x1=\"" + f2(x1) + "\" y1=\"" + f2(y1) + "\" x2=\"" + f2(x2) + "\" y2=\"" +
                f2(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + f2(width) + "\"/>\n";
    }
    void polyline(const std::string& points, const std::string& stroke) {
        body += "<polyline points=\"" + points + "\" fill=\"none\" stroke=\"" + stroke +
                "\" stroke-width=\"2.00\"/>\n";
    }
    void circle(double cx, double cy, double r, const std::string& fill) {
        body += "<circle cx=\"" + f2(cx) + "\" cy=\"" + f2(cy) + "\" r=\"" + f2(r) + "\" fill=\"" +
                fill + "\"/>\n";
    }
    void text(double x, double y, std::string_view s, const char* anchor = "start",
              int size = 11, const std::string& fill = "#000000") {
        char head[160];
        std::snprintf(head, sizeof(head),
                      "<text x=\"%.2f\" y=\"%.2f\" font-family=\"monospace\" font-size=\"%d\" "
                      "text-anchor=\"%s\" fill=\"%s\">",
                      x, y, size, anchor, fill.c_str());
        body += head;
        body += esc(s);
        body += "</text>\n";
    }

    std::string finish() const {
        std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + f2(kWidth) +
               "\" height=\"" + f2(kHeight) + "\" viewBox=\"0 0 " + f2(kWidth) + " " +
               f2(kHeight) + "\">\n";
        out += "<rect x=\"0\" y=\"0\" width=\"" + f2(kWidth) + "\" height=\"" + f2(kHeight) +
               "\" fill=\"#ffffff\" stroke=\"none\"/>\n";
        out += body;
        out += "</svg>\n";
        return out;
    }
};

const char* deployment_color(std::string_view d) {
    if (d == "InputClique") return "#1b9e77";
    if (d == "Stubs") return "#d95f02";
    if (d == "Multihomed") return "#7570b3";
    if (d == "NoDeploymentType") return "#e7298a";
    return "#666666";
}

int deployment_order(std::string_view d) {
    if (d == "InputClique") return 0;
    if (d == "Stubs") return 1;
    if (d == "Multihomed") return 2;
    if (d == "NoDeploymentType") return 3;
    return 4;
}

int attack_order(std::string_view a) {
    if (a == "PrefixHijack") return 0;
    if (a == "SubprefixHijack") return 1;
    if (a == "ForgedOriginPrefixHijack") return 2;
    if (a == "AccidentalRouteLeak") return 3;
    return 4;
}

std::string lerp_color(double t, int r1, int g1, int b1, int r0 = 255, int g0 = 255,
                       int b0 = 255) {
    t = std::clamp(t, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(r0 + (r1 - r0) * t));
    const int g = static_cast<int>(std::lround(g0 + (g1 - g0) * t));
    const int b = static_cast<int>(std::lround(b0 + (b1 - b0) * t));
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

std::string heat_color(double value_percent) { // white -> deep blue
    return lerp_color(value_percent / 100.0, 0x08, 0x51, 0x9c);
}

std::string corr_color(double r) { // blue (-1) -> white (0) -> red (+1)
    if (r < 0) return lerp_color(-r, 0x21, 0x66, 0xac);
    return lerp_color(r, 0xb2, 0x18, 0x2b);
}

template <typename Get, typename Order>
std::vector<std::string> distinct_sorted(const Table& t, Get get, Order order) {
    std::set<std::string> seen;
    for (const TableRow& r : t.rows) seen.insert(get(r));
    std::vector<std::string> out(seen.begin(), seen.end());
    std::stable_sort(out.begin(), out.end(), [&](const std::string& a, const std::string& b) {
        return std::make_pair(order(a), std::cref(a)) < std::make_pair(order(b), std::cref(b));
    });
    return out;
}

std::vector<std::string> distinct_levels(const Table& t) {
    std::set<std::string> seen;
    for (const TableRow& r : t.rows) seen.insert(r.percent_adopt);
    std::vector<std::string> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) {
        return percent_sort_key(a) < percent_sort_key(b);
    });
    return out;
}

Table select_rows(const PlotSpec& spec, const Table& table) {
    Table out;
    for (const TableRow& r : table.rows) {
        if (!spec.policy.empty() && r.adopting_policy_cls != spec.policy) continue;
        if (!spec.scenario.empty() && r.scenario_cls != spec.scenario) continue;
        if (!spec.deployment.empty() && r.deployment_type != spec.deployment) continue;
        if (!spec.outcome.empty() && r.outcome != spec.outcome) continue;
        out.rows.push_back(r);
    }
    sort_rows(out);
    return out;
}

std::string plot_title(const PlotSpec& spec) {
    std::string title = to_string(spec.kind);
    if (!spec.outcome.empty()) title += " " + spec.outcome;
    if (!spec.policy.empty()) title += " " + spec.policy;
    if (!spec.scenario.empty()) title += " " + spec.scenario;
    if (!spec.deployment.empty()) title += " " + spec.deployment;
    return title;
}

void percent_axis(Svg& svg) {
    svg.line(kLeft, kTop, kLeft, kBottom, "#000000");
    svg.line(kLeft, kBottom, kRight, kBottom, "#000000");
    for (int tick = 0; tick <= 100; tick += 25) {
        const double y = kBottom - (kBottom - kTop) * tick / 100.0;
        svg.line(kLeft - 4, y, kLeft, y, "#000000");
        svg.text(kLeft - 8, y + 4, std::to_string(tick), "end");
        if (tick > 0) svg.line(kLeft, y, kRight, y, "#dddddd", 0.5);
    }
}

void legend(Svg& svg, const std::vector<std::string>& names) {
    double y = kTop + 4;
    for (const auto& name : names) {
        svg.rect(kRight + 14, y - 9, 10, 10, deployment_color(name));
        svg.text(kRight + 30, y, name);
        y += 18;
    }
}

double mean_of(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

// ---- the six chart families -------------------------------------------

void draw_category_bars(Svg& svg, const std::vector<std::string>& cats,
                        const std::map<std::string, std::vector<double>>& values,
                        bool color_by_deployment) {
    percent_axis(svg);
    const double slot = (kRight - kLeft) / static_cast<double>(cats.size());
    for (std::size_t i = 0; i < cats.size(); ++i) {
        const auto it = values.find(cats[i]);
        const double mean = it == values.end() ? 0.0 : mean_of(it->second);
        const double x = kLeft + slot * (static_cast<double>(i) + 0.2);
        const double h = (kBottom - kTop) * mean / 100.0;
        const std::string fill =
            color_by_deployment ? deployment_color(cats[i]) : std::string("#4c78a8");
        svg.rect(x, kBottom - h, slot * 0.6, h, fill, "#333333");
        svg.text(x + slot * 0.3, kBottom - h - 6, format_double(mean), "middle");
        svg.text(kLeft + slot * (static_cast<double>(i) + 0.5), kBottom + 16, cats[i], "middle",
                 10);
    }
}

void draw_bar(Svg& svg, const Table& sel) {
    auto cats = distinct_sorted(
        sel, [](const TableRow& r) { return r.deployment_type; },
        [](const std::string& s) { return deployment_order(s); });
    std::map<std::string, std::vector<double>> values;
    for (const TableRow& r : sel.rows) values[r.deployment_type].push_back(r.value);
    draw_category_bars(svg, cats, values, true);
}

void draw_scenario_bar(Svg& svg, const Table& sel) {
    auto cats = distinct_sorted(
        sel, [](const TableRow& r) { return r.scenario_cls; },
        [](const std::string& s) { return attack_order(s); });
    std::map<std::string, std::vector<double>> values;
    for (const TableRow& r : sel.rows) values[r.scenario_cls].push_back(r.value);
    draw_category_bars(svg, cats, values, false);
}

void draw_heatmap(Svg& svg, const Table& sel) {
    const auto levels = distinct_levels(sel);
    const auto deployments = distinct_sorted(
        sel, [](const TableRow& r) { return r.deployment_type; },
        [](const std::string& s) { return deployment_order(s); });

    std::map<std::pair<std::string, std::string>, std::vector<double>> cell;
    for (const TableRow& r : sel.rows)
        cell[{r.percent_adopt, r.deployment_type}].push_back(r.value);

    const double cw = (kRight - kLeft) / static_cast<double>(levels.size());
    const double ch = (kBottom - kTop) / static_cast<double>(deployments.size());
    for (std::size_t ix = 0; ix < levels.size(); ++ix)
        for (std::size_t iy = 0; iy < deployments.size(); ++iy) {
            const double x = kLeft + cw * static_cast<double>(ix);
            const double y = kTop + ch * static_cast<double>(iy);
            const auto it = cell.find({levels[ix], deployments[iy]});
            if (it == cell.end()) {
                svg.rect(x, y, cw, ch, "#eeeeee", "#ffffff");
                continue;
            }
            const double v = mean_of(it->second);
            svg.rect(x, y, cw, ch, heat_color(v), "#ffffff");
            svg.text(x + cw / 2, y + ch / 2 + 4, format_double(v), "middle", 10,
                     v > 55.0 ? "#ffffff" : "#000000");
        }
    for (std::size_t ix = 0; ix < levels.size(); ++ix)
        svg.text(kLeft + cw * (static_cast<double>(ix) + 0.5), kBottom + 16, levels[ix],
                 "middle", 10);
    for (std::size_t iy = 0; iy < deployments.size(); ++iy)
        svg.text(kLeft - 8, kTop + ch * (static_cast<double>(iy) + 0.5) + 4, deployments[iy],
                 "end", 9);
    // color key
    for (int i = 0; i <= 5; ++i) {
        const double v = 20.0 * i;
        svg.rect(kRight + 14, kBottom - 24 * (i + 1), 14, 24, heat_color(v));
        svg.text(kRight + 32, kBottom - 24 * i - 8, format_double(v), "start", 9);
    }
}

double pearson(const std::vector<std::pair<double, double>>& pts) {
    const std::size_t n = pts.size();
    if (n < 2) return 0.0;
    double mx = 0, my = 0;
    for (const auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (const auto& [x, y] : pts) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

void draw_correlation(Svg& svg, const Table& sel) {
    const auto policies = distinct_sorted(
        sel, [](const TableRow& r) { return r.adopting_policy_cls; },
        [](const std::string&) { return 0; });
    const auto scenarios = distinct_sorted(
        sel, [](const TableRow& r) { return r.scenario_cls; },
        [](const std::string& s) { return attack_order(s); });

    std::map<std::pair<std::string, std::string>, std::vector<std::pair<double, double>>> pts;
    for (const TableRow& r : sel.rows)
        pts[{r.scenario_cls, r.adopting_policy_cls}].push_back(
            {percent_numeric(r.percent_adopt), r.value});

    const double cw = (kRight - kLeft) / static_cast<double>(policies.size());
    const double ch = (kBottom - kTop) / static_cast<double>(scenarios.size());
    for (std::size_t ix = 0; ix < policies.size(); ++ix)
        for (std::size_t iy = 0; iy < scenarios.size(); ++iy) {
            const double x = kLeft + cw * static_cast<double>(ix);
            const double y = kTop + ch * static_cast<double>(iy);
            const auto it = pts.find({scenarios[iy], policies[ix]});
            if (it == pts.end()) {
                svg.rect(x, y, cw, ch, "#eeeeee", "#ffffff");
                continue;
            }
            const double r = pearson(it->second);
            svg.rect(x, y, cw, ch, corr_color(r), "#ffffff");
            svg.text(x + cw / 2, y + ch / 2 + 4, f2(r), "middle", 10,
                     std::abs(r) > 0.6 ? "#ffffff" : "#000000");
        }
    for (std::size_t ix = 0; ix < policies.size(); ++ix)
        svg.text(kLeft + cw * (static_cast<double>(ix) + 0.5), kBottom + 16, policies[ix],
                 "middle", 10);
    for (std::size_t iy = 0; iy < scenarios.size(); ++iy)
        svg.text(kLeft - 8, kTop + ch * (static_cast<double>(iy) + 0.5) + 4, scenarios[iy], "end",
                 8);
}

void draw_crossbar(Svg& svg, const Table& sel) {
    const auto cats = distinct_sorted(
        sel, [](const TableRow& r) { return r.deployment_type; },
        [](const std::string& s) { return deployment_order(s); });
    std::map<std::string, std::vector<double>> ys;
    double ymax = 0.0;
    for (const TableRow& r : sel.rows) {
        ys[r.deployment_type].push_back(r.yerr);
        ymax = std::max(ymax, r.yerr);
    }
    if (ymax <= 0.0) ymax = 1.0;
    ymax *= 1.15;

    svg.line(kLeft, kTop, kLeft, kBottom, "#000000");
    svg.line(kLeft, kBottom, kRight, kBottom, "#000000");
    for (int i = 0; i <= 4; ++i) {
        const double v = ymax * i / 4.0;
        const double y = kBottom - (kBottom - kTop) * i / 4.0;
        svg.line(kLeft - 4, y, kLeft, y, "#000000");
        svg.text(kLeft - 8, y + 4, f2(v), "end", 9);
    }

    const double slot = (kRight - kLeft) / static_cast<double>(cats.size());
    auto ypos = [&](double v) { return kBottom - (kBottom - kTop) * v / ymax; };
    for (std::size_t i = 0; i < cats.size(); ++i) {
        auto vals = ys[cats[i]];
        std::sort(vals.begin(), vals.end());
        const double lo = vals.front(), hi = vals.back();
        const std::size_t mid = vals.size() / 2;
        const double med =
            vals.size() % 2 ? vals[mid] : (vals[mid - 1] + vals[mid]) / 2.0;
        const double xc = kLeft + slot * (static_cast<double>(i) + 0.5);
        const double half = slot * 0.28;
        const char* color = deployment_color(cats[i]);
        svg.rect(xc - half, ypos(hi), 2 * half, std::max(0.5, ypos(lo) - ypos(hi)), "none",
                 color);
        svg.line(xc - half, ypos(med), xc + half, ypos(med), color, 2.5);
        svg.text(xc, kBottom + 16, cats[i], "middle", 10);
    }
}

void draw_multiline(Svg& svg, const Table& sel) {
    percent_axis(svg);
    const auto levels = distinct_levels(sel);
    const auto deployments = distinct_sorted(
        sel, [](const TableRow& r) { return r.deployment_type; },
        [](const std::string& s) { return deployment_order(s); });

    std::map<std::pair<std::string, std::string>, std::vector<double>> cell;
    for (const TableRow& r : sel.rows)
        cell[{r.deployment_type, r.percent_adopt}].push_back(r.value);

    const double step =
        (kRight - kLeft) / static_cast<double>(std::max<std::size_t>(levels.size(), 2) - 1);
    for (const auto& deployment : deployments) {
        std::string points;
        for (std::size_t ix = 0; ix < levels.size(); ++ix) {
            const auto it = cell.find({deployment, levels[ix]});
            if (it == cell.end()) continue;
            const double x = kLeft + step * static_cast<double>(ix);
            const double y = kBottom - (kBottom - kTop) * mean_of(it->second) / 100.0;
            points += f2(x) + "," + f2(y) + " ";
            svg.circle(x, y, 3, deployment_color(deployment));
        }
        if (!points.empty()) {
            points.pop_back();
            svg.polyline(points, deployment_color(deployment));
        }
    }
    for (std::size_t ix = 0; ix < levels.size(); ++ix)
        svg.text(kLeft + step * static_cast<double>(ix), kBottom + 16, levels[ix], "middle", 10);
    legend(svg, deployments);
}

void write_text_file(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ConfigError("short write to '" + path.string() + "'");
}

} // namespace

bool render(const PlotSpec& spec, const Table& table, std::string* warning) {
    const Table sel = select_rows(spec, table);
    if (sel.rows.empty()) {
        if (warning)
            *warning = "plot '" + plot_title(spec) + "' selects no rows; nothing rendered";
        return false;
    }

    Svg svg;
    svg.text(kLeft, kTop - 16, plot_title(spec), "start", 13);
    switch (spec.kind) {
        case PlotKind::Bar: draw_bar(svg, sel); break;
        case PlotKind::ScenarioBar: draw_scenario_bar(svg, sel); break;
        case PlotKind::Heatmap2d: draw_heatmap(svg, sel); break;
        case PlotKind::CorrelationHeatmap: draw_correlation(svg, sel); break;
        case PlotKind::CrossbarYerr: draw_crossbar(svg, sel); break;
        case PlotKind::Multiline: draw_multiline(svg, sel); break;
    }

    const fs::path svg_path(spec.output_path);
    write_text_file(svg_path, svg.finish());
    fs::path csv_path = svg_path;
    csv_path.replace_extension(".csv");
    write_text_file(csv_path, table_csv(sel));
    return true;
}

std::vector<std::string> render_family(PlotKind kind, const Table& table,
                                       const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw ConfigError("cannot create plot directory '" + out_dir + "': " + ec.message());

    const auto policies = distinct_sorted(
        table, [](const TableRow& r) { return r.adopting_policy_cls; },
        [](const std::string&) { return 0; });
    const auto scenarios = distinct_sorted(
        table, [](const TableRow& r) { return r.scenario_cls; },
        [](const std::string& s) { return attack_order(s); });

    std::vector<PlotSpec> specs;
    auto path_for = [&](std::initializer_list<std::string_view> parts) {
        std::string name(to_string(kind));
        for (const auto& part : parts) {
            name += '_';
            name += part;
        }
        name += ".svg";
        return (fs::path(out_dir) / name).string();
    };

    switch (kind) {
        case PlotKind::CorrelationHeatmap: {
            PlotSpec spec;
            spec.kind = kind;
            spec.output_path = path_for({});
            specs.push_back(std::move(spec));
            break;
        }
        case PlotKind::ScenarioBar:
            for (const auto& policy : policies) {
                PlotSpec spec;
                spec.kind = kind;
                spec.policy = policy;
                spec.output_path = path_for({policy});
                specs.push_back(std::move(spec));
            }
            break;
        default:
            for (const auto& policy : policies)
                for (const auto& scenario : scenarios) {
                    PlotSpec spec;
                    spec.kind = kind;
                    spec.policy = policy;
                    spec.scenario = scenario;
                    spec.output_path = path_for({policy, scenario});
                    specs.push_back(std::move(spec));
                }
            break;
    }

    std::vector<std::string> written;
    for (const auto& spec : specs)
        if (render(spec, table)) written.push_back(spec.output_path);
    return written;
}

} // namespace bgpsim
