#include <infodecomp/svg.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include <infodecomp/errors.hpp>

namespace infodecomp {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct Bar {
    double value = 0.0;
    double sd = 0.0;       // 0 for single runs
    double oracle = 0.0;
    bool has_oracle = false;
};

struct PanelData {
    std::vector<std::string> features;
    std::vector<Bar> unique, redundant, synergistic;
    bool has_sd = false;
};

PanelData extract_bars(const json& report) {
    PanelData p;
    for (const auto& n : report.at("feature_names")) p.features.push_back(n.get<std::string>());
    const std::size_t m = p.features.size();
    p.unique.resize(m);
    p.redundant.resize(m);
    p.synergistic.resize(m);

    if (report.contains("aggregate")) {
        const auto& stats = report.at("aggregate").at("stats");
        for (std::size_t f = 0; f < m; ++f) {
            p.unique[f].value = stats.at("unique").at(f).at("mean").get<double>();
            p.unique[f].sd = stats.at("unique").at(f).at("sd").get<double>();
            p.redundant[f].value = stats.at("redundant").at(f).at("mean").get<double>();
            p.redundant[f].sd = stats.at("redundant").at(f).at("sd").get<double>();
            p.synergistic[f].value = stats.at("synergistic").at(f).at("mean").get<double>();
            p.synergistic[f].sd = stats.at("synergistic").at(f).at("sd").get<double>();
        }
        p.has_sd = true;
    } else if (report.contains("results")) {
        for (const auto& r : report.at("results")) {
            const auto f = r.at("source_index").get<std::size_t>();
            p.unique[f].value = r.at("unique").get<double>();
            p.redundant[f].value = r.at("redundant").get<double>();
            p.synergistic[f].value = r.at("synergistic").get<double>();
        }
    } else {
        throw Error("report has neither results nor aggregate section");
    }

    if (report.contains("oracle")) {
        for (const auto& r : report.at("oracle")) {
            const auto f = r.at("source_index").get<std::size_t>();
            p.unique[f].oracle = r.at("unique").get<double>();
            p.redundant[f].oracle = r.at("redundant").get<double>();
            p.synergistic[f].oracle = r.at("synergistic").get<double>();
            p.unique[f].has_oracle = p.redundant[f].has_oracle = p.synergistic[f].has_oracle = true;
        }
    }
    return p;
}

void heat_color(double pct, char* buf, std::size_t bufsz) {
    // white -> steel blue ramp
    const double t = std::clamp(pct / 100.0, 0.0, 1.0);
    const int r = static_cast<int>(255 - t * (255 - 54));
    const int g = static_cast<int>(255 - t * (255 - 97));
    const int b = static_cast<int>(255 - t * (255 - 160));
    std::snprintf(buf, bufsz, "#%02x%02x%02x", r, g, b);
}

void render_heatmap(std::string& svg, const json& freq, const std::vector<std::string>& features, double ox,
                    double oy, const std::string& title) {
    const std::size_t m = features.size();
    const double cell = 38.0, label = 46.0;
    svg += "<text x='" + fmt(ox + label + m * cell / 2) + "' y='" + fmt(oy - 10) +
           "' text-anchor='middle' font-size='13' font-weight='bold'>" + title + "</text>\n";
    for (std::size_t row = 0; row < m; ++row) {
        svg += "<text x='" + fmt(ox + label - 6) + "' y='" + fmt(oy + row * cell + cell / 2 + 4) +
               "' text-anchor='end' font-size='11'>" + features[row] + "</text>\n";
        for (std::size_t col = 0; col < m; ++col) {
            const double pct = freq.at(col).at(row).get<double>();  // columns are sources
            char color[8];
            heat_color(pct, color, sizeof color);
            const double x = ox + label + col * cell, y = oy + row * cell;
            svg += "<rect x='" + fmt(x) + "' y='" + fmt(y) + "' width='" + fmt(cell) + "' height='" + fmt(cell) +
                   "' fill='" + color + "' stroke='#999'/>\n";
            if (row != col) {
                char text[16];
                std::snprintf(text, sizeof text, "%.0f", pct);
                svg += "<text x='" + fmt(x + cell / 2) + "' y='" + fmt(y + cell / 2 + 4) +
                       "' text-anchor='middle' font-size='10' fill='" + (pct > 55 ? std::string("#fff") : "#333") +
                       "'>" + text + "</text>\n";
            }
        }
    }
    for (std::size_t col = 0; col < m; ++col) {
        svg += "<text x='" + fmt(ox + label + col * cell + cell / 2) + "' y='" + fmt(oy + m * cell + 14) +
               "' text-anchor='middle' font-size='11'>" + features[col] + "</text>\n";
    }
}

}  // namespace

std::string render_report_svg(const std::string& report_json_text, bool clip_zero) {
    json report;
    try {
        report = json::parse(report_json_text);
    } catch (const json::exception& e) {
        throw Error(std::string("cannot parse report: ") + e.what());
    }
    const PanelData p = extract_bars(report);
    const std::size_t m = p.features.size();

    const bool heatmaps = report.contains("aggregate") && report.at("aggregate").contains("zmin_freq_pct");

    // bar panel geometry
    const double bar_w = 18.0, bar_gap = 4.0, group_gap = 26.0;
    const double group_w = 3 * bar_w + 2 * bar_gap + group_gap;
    const double left = 64.0, top = 34.0, plot_h = 260.0;
    const double plot_w = std::max(240.0, m * group_w);

    // y range over values, whiskers and oracle lines
    double lo = 0.0, hi = 0.0;
    auto stretch = [&](const Bar& b) {
        const double shown = clip_zero ? std::max(b.value, 0.0) : b.value;
        lo = std::min({lo, shown, b.value - 2 * b.sd});
        hi = std::max({hi, shown, b.value + 2 * b.sd});
        if (b.has_oracle) {
            lo = std::min(lo, b.oracle);
            hi = std::max(hi, b.oracle);
        }
    };
    for (std::size_t f = 0; f < m; ++f) {
        stretch(p.unique[f]);
        stretch(p.redundant[f]);
        stretch(p.synergistic[f]);
    }
    if (hi - lo < 1e-9) hi = lo + 1.0;
    const double pad = 0.08 * (hi - lo);
    hi += pad;
    lo = (lo < 0.0) ? lo - pad : lo;
    const auto ty = [&](double v) { return top + plot_h * (hi - v) / (hi - lo); };

    const double heat_h = heatmaps ? (m * 38.0 + 90.0) : 0.0;
    const double heat_w = 46.0 + m * 38.0 + 40.0;
    const double width = std::max(left + plot_w + 40.0, heatmaps ? 2 * heat_w + 60.0 : 0.0);
    const double height = top + plot_h + 70.0 + heat_h;

    std::string svg = "<svg xmlns='http://www.w3.org/2000/svg' width='" + fmt(width) + "' height='" + fmt(height) +
                      "' font-family='Helvetica,Arial,sans-serif'>\n";
    svg += "<rect width='100%' height='100%' fill='white'/>\n";

    // y axis with ~6 ticks
    svg += "<line x1='" + fmt(left) + "' y1='" + fmt(top) + "' x2='" + fmt(left) + "' y2='" + fmt(top + plot_h) +
           "' stroke='#333'/>\n";
    const double step = (hi - lo) / 6.0;
    for (int t = 0; t <= 6; ++t) {
        const double v = lo + t * step;
        svg += "<line x1='" + fmt(left - 4) + "' y1='" + fmt(ty(v)) + "' x2='" + fmt(left + plot_w) + "' y2='" +
               fmt(ty(v)) + "' stroke='#ddd'/>\n";
        char lbl[24];
        std::snprintf(lbl, sizeof lbl, "%.3f", v);
        svg += "<text x='" + fmt(left - 8) + "' y='" + fmt(ty(v) + 4) + "' text-anchor='end' font-size='10'>" + lbl +
               "</text>\n";
    }
    if (lo < 0.0 && hi > 0.0)
        svg += "<line x1='" + fmt(left) + "' y1='" + fmt(ty(0)) + "' x2='" + fmt(left + plot_w) + "' y2='" +
               fmt(ty(0)) + "' stroke='#333'/>\n";
    svg += "<text x='16' y='" + fmt(top + plot_h / 2) + "' transform='rotate(-90 16 " + fmt(top + plot_h / 2) +
           ")' text-anchor='middle' font-size='12'>information [nats]</text>\n";

    const char* colors[3] = {"#4472c4", "#ed7d31", "#70ad47"};
    const char* labels[3] = {"unique", "redundant", "synergistic"};

    for (std::size_t f = 0; f < m; ++f) {
        const Bar* bars[3] = {&p.unique[f], &p.redundant[f], &p.synergistic[f]};
        const double gx = left + f * group_w + group_gap / 2;
        for (int b = 0; b < 3; ++b) {
            const double x = gx + b * (bar_w + bar_gap);
            double v = bars[b]->value;
            if (clip_zero) v = std::max(v, 0.0);
            const double y0 = ty(std::max(v, 0.0)), y1 = ty(std::min(v, 0.0));
            svg += "<rect x='" + fmt(x) + "' y='" + fmt(y0) + "' width='" + fmt(bar_w) + "' height='" +
                   fmt(std::max(y1 - y0, 0.5)) + "' fill='" + colors[b] + "'/>\n";
            if (p.has_sd && bars[b]->sd > 0.0) {
                const double cx = x + bar_w / 2;
                const double w_lo = ty(bars[b]->value - 2 * bars[b]->sd);
                const double w_hi = ty(bars[b]->value + 2 * bars[b]->sd);
                svg += "<line x1='" + fmt(cx) + "' y1='" + fmt(w_hi) + "' x2='" + fmt(cx) + "' y2='" + fmt(w_lo) +
                       "' stroke='#333'/>\n";
                svg += "<line x1='" + fmt(cx - 4) + "' y1='" + fmt(w_hi) + "' x2='" + fmt(cx + 4) + "' y2='" +
                       fmt(w_hi) + "' stroke='#333'/>\n";
                svg += "<line x1='" + fmt(cx - 4) + "' y1='" + fmt(w_lo) + "' x2='" + fmt(cx + 4) + "' y2='" +
                       fmt(w_lo) + "' stroke='#333'/>\n";
            }
            if (bars[b]->has_oracle) {
                svg += "<line x1='" + fmt(x - 2) + "' y1='" + fmt(ty(bars[b]->oracle)) + "' x2='" +
                       fmt(x + bar_w + 2) + "' y2='" + fmt(ty(bars[b]->oracle)) +
                       "' stroke='magenta' stroke-width='2'/>\n";
            }
        }
        svg += "<text x='" + fmt(gx + (3 * bar_w + 2 * bar_gap) / 2) + "' y='" + fmt(top + plot_h + 18) +
               "' text-anchor='middle' font-size='12'>" + p.features[f] + "</text>\n";
    }

    // legend
    for (int b = 0; b < 3; ++b) {
        const double lx = left + b * 110.0;
        svg += "<rect x='" + fmt(lx) + "' y='" + fmt(top + plot_h + 34) + "' width='12' height='12' fill='" +
               std::string(colors[b]) + "'/>\n";
        svg += "<text x='" + fmt(lx + 18) + "' y='" + fmt(top + plot_h + 44) + "' font-size='11'>" + labels[b] +
               "</text>\n";
    }

    if (heatmaps) {
        const auto& agg = report.at("aggregate");
        const double hy = top + plot_h + 110.0;
        render_heatmap(svg, agg.at("zmin_freq_pct"), p.features, 10.0, hy, "Zmin selections [%]");
        render_heatmap(svg, agg.at("zmax_freq_pct"), p.features, heat_w + 40.0, hy, "Zmax selections [%]");
    }

    svg += "</svg>\n";
    return svg;
}

}  // namespace infodecomp
