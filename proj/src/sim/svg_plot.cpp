#include "ltevid/sim/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ltevid/airlink/constellation.hpp"
#include "ltevid/sim/csv.hpp"

namespace ltevid::sim {
namespace {

struct MetricDef {
    const char* name;
    double RunRecord::*field;
};

const MetricDef kMetrics[] = {
    {"ebno_db", &RunRecord::ebno_db},
    {"residual_ber", &RunRecord::residual_ber},
    {"blocking_mean", &RunRecord::blocking_mean},
    {"blocking_log10_mean", &RunRecord::blocking_log10_mean},
    {"blur_mean", &RunRecord::blur_mean},
    {"psnr_mean_db", &RunRecord::psnr_mean_db},
    {"ssim_mean", &RunRecord::ssim_mean},
    {"wall_time_s", &RunRecord::wall_time_s},
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

int modulation_rank(const std::string& m) {
    const auto parsed = airlink::parse_modulation(m);
    return parsed ? airlink::bits_per_symbol(*parsed) : 100;
}

/// Field values that identify a record apart from the video and the x axis.
std::vector<std::pair<std::string, std::string>> fixed_fields(const RunRecord& r, PlotAxis axis) {
    std::vector<std::pair<std::string, std::string>> f;
    if (axis != PlotAxis::ebno) f.emplace_back("ebno_db", format_number(r.ebno_db));
    if (axis != PlotAxis::harq) f.emplace_back("harq_max", std::to_string(r.harq_max));
    if (axis != PlotAxis::modulation) f.emplace_back("modulation", r.modulation);
    f.emplace_back("code_rate", r.code_rate);
    f.emplace_back("seed", std::to_string(r.seed));
    return f;
}

std::vector<double> nice_ticks(double lo, double hi) {
    if (!(hi > lo)) return {lo};
    const double raw = (hi - lo) / 5;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    std::vector<double> t;
    for (double v = std::ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) t.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
    return t;
}

}  // namespace

std::string_view axis_name(PlotAxis a) {
    switch (a) {
        case PlotAxis::ebno: return "ebno";
        case PlotAxis::harq: return "harq";
        case PlotAxis::modulation: return "modulation";
    }
    return "?";
}

std::optional<PlotAxis> parse_plot_axis(std::string_view text) {
    if (text == "ebno") return PlotAxis::ebno;
    if (text == "harq") return PlotAxis::harq;
    if (text == "modulation") return PlotAxis::modulation;
    return std::nullopt;
}

bool is_plot_metric(std::string_view metric) {
    return std::any_of(std::begin(kMetrics), std::end(kMetrics), [&](const MetricDef& m) { return metric == m.name; }) ||
           metric == "blocks_failed" || metric == "bler";
}

double metric_value(const RunRecord& r, std::string_view metric) {
    for (const auto& m : kMetrics)
        if (metric == m.name) return r.*(m.field);
    if (metric == "blocks_failed") return static_cast<double>(r.blocks_failed);
    if (metric == "bler")
        return r.blocks_total ? static_cast<double>(r.blocks_failed) / static_cast<double>(r.blocks_total) : 0.0;
    throw ContractError("unknown plot metric '" + std::string(metric) + "'");
}

std::string render_plot(const std::vector<RunRecord>& records, PlotAxis axis, std::string_view metric,
                        const PlotOptions& options) {
    if (records.empty()) throw ContractError("nothing to plot");
    (void)metric_value(records.front(), metric);

    // Series keyed by video, in first-appearance order.
    std::vector<std::string> order;
    std::map<std::string, std::vector<const RunRecord*>> series;
    for (const auto& r : records) {
        if (!series.count(r.video)) order.push_back(r.video);
        series[r.video].push_back(&r);
    }
    for (const auto& name : order) {
        const auto& rs = series[name];
        const auto ref = fixed_fields(*rs.front(), axis);
        std::set<std::string> conflicts;
        for (const auto* r : rs) {
            const auto f = fixed_fields(*r, axis);
            for (std::size_t i = 0; i < f.size(); ++i)
                if (f[i].second != ref[i].second) conflicts.insert(f[i].first);
        }
        if (!conflicts.empty()) {
            std::vector<std::string> fields(conflicts.begin(), conflicts.end());
            std::string msg = "series '" + name + "' mixes values of:";
            for (const auto& f : fields) msg += " " + f;
            throw GroupingError(msg, fields);
        }
    }

    // x coordinates.
    std::vector<std::string> categories;
    if (axis == PlotAxis::modulation) {
        for (const auto& r : records)
            if (std::find(categories.begin(), categories.end(), r.modulation) == categories.end())
                categories.push_back(r.modulation);
        std::stable_sort(categories.begin(), categories.end(),
                         [](const std::string& a, const std::string& b) { return modulation_rank(a) < modulation_rank(b); });
    }
    auto xval = [&](const RunRecord& r) -> double {
        switch (axis) {
            case PlotAxis::ebno: return r.ebno_db;
            case PlotAxis::harq: return r.harq_max;
            case PlotAxis::modulation:
                return static_cast<double>(std::find(categories.begin(), categories.end(), r.modulation) - categories.begin());
        }
        return 0;
    };
    auto yval = [&](const RunRecord& r) {
        const double v = metric_value(r, metric);
        return options.log_y ? std::log10(std::max(v, 1e-12)) : v;
    };

    std::set<double> xs;
    double ylo = INFINITY, yhi = -INFINITY;
    for (const auto& r : records) {
        xs.insert(xval(r));
        const double y = yval(r);
        if (std::isfinite(y)) {
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
    }
    if (!std::isfinite(ylo)) ylo = 0, yhi = 1;
    if (yhi - ylo < 1e-12) {
        const double pad = std::max(std::abs(ylo) * 0.1, 0.5);
        ylo -= pad;
        yhi += pad;
    }
    double xlo = *xs.begin(), xhi = *xs.rbegin();
    if (xhi - xlo < 1e-12) xlo -= 1, xhi += 1;
    if (axis == PlotAxis::modulation) xlo -= 0.5, xhi += 0.5;

    const double W = options.width, H = options.height;
    const double left = 70, right = 140, top = 40, bottom = 50;
    const double pw = W - left - right, ph = H - top - bottom;
    auto px = [&](double x) { return left + (x - xlo) / (xhi - xlo) * pw; };
    auto py = [&](double y) { return top + (1 - (y - ylo) / (yhi - ylo)) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\"" << options.height
        << "\" viewBox=\"0 0 " << options.width << ' ' << options.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const std::string ylabel = options.log_y ? "log10(" + std::string(metric) + ")" : std::string(metric);
    const std::string xlabel = axis == PlotAxis::ebno ? "Eb/N0 (dB)" : axis == PlotAxis::harq ? "max HARQ transmissions" : "modulation";
    const std::string title = options.title.empty() ? ylabel + " vs " + xlabel : options.title;
    svg << "<text x=\"" << fmt(W / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title) << "</text>\n";

    // Axes and ticks.
    svg << "<g stroke=\"black\" fill=\"none\">\n<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top + ph) << "\" x2=\""
        << fmt(left + pw) << "\" y2=\"" << fmt(top + ph) << "\"/>\n<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top)
        << "\" x2=\"" << fmt(left) << "\" y2=\"" << fmt(top + ph) << "\"/>\n</g>\n";

    std::vector<std::pair<double, std::string>> xticks;
    if (axis == PlotAxis::modulation) {
        for (std::size_t i = 0; i < categories.size(); ++i) xticks.emplace_back(static_cast<double>(i), categories[i]);
    } else if (axis == PlotAxis::harq || xs.size() <= 12) {
        for (double x : xs) xticks.emplace_back(x, label(x));
    } else {
        for (double x : nice_ticks(xlo, xhi)) xticks.emplace_back(x, label(x));
    }
    svg << "<g class=\"xticks\" text-anchor=\"middle\">\n";
    for (const auto& [x, text] : xticks)
        svg << "<line x1=\"" << fmt(px(x)) << "\" y1=\"" << fmt(top + ph) << "\" x2=\"" << fmt(px(x)) << "\" y2=\""
            << fmt(top + ph + 5) << "\" stroke=\"black\"/><text x=\"" << fmt(px(x)) << "\" y=\"" << fmt(top + ph + 18)
            << "\">" << xml_escape(text) << "</text>\n";
    svg << "</g>\n<g class=\"yticks\" text-anchor=\"end\">\n";
    for (double y : nice_ticks(ylo, yhi))
        svg << "<line x1=\"" << fmt(left - 5) << "\" y1=\"" << fmt(py(y)) << "\" x2=\"" << fmt(left) << "\" y2=\""
            << fmt(py(y)) << "\" stroke=\"black\"/><text x=\"" << fmt(left - 8) << "\" y=\"" << fmt(py(y) + 4) << "\">"
            << label(y) << "</text>\n";
    svg << "</g>\n";
    svg << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(H - 10) << "\" text-anchor=\"middle\">"
        << xml_escape(xlabel) << "</text>\n";
    svg << "<text transform=\"translate(16," << fmt(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
        << xml_escape(ylabel) << "</text>\n";

    for (std::size_t s = 0; s < order.size(); ++s) {
        auto rs = series[order[s]];
        std::stable_sort(rs.begin(), rs.end(), [&](const RunRecord* a, const RunRecord* b) { return xval(*a) < xval(*b); });
        const char* color = kPalette[s % std::size(kPalette)];
        std::vector<std::pair<double, double>> pts;
        for (const auto* r : rs)
            if (std::isfinite(yval(*r))) pts.emplace_back(px(xval(*r)), py(yval(*r)));
        svg << "<g class=\"series\" data-video=\"" << xml_escape(order[s]) << "\">\n";
        if (pts.size() >= 2) {
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
            for (std::size_t i = 0; i < pts.size(); ++i) svg << (i ? " " : "") << fmt(pts[i].first) << ',' << fmt(pts[i].second);
            svg << "\"/>\n";
        }
        for (const auto& [x, y] : pts)
            svg << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        const double ly = top + 10 + 18 * static_cast<double>(s);
        svg << "<line x1=\"" << fmt(left + pw + 15) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(left + pw + 35)
            << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/><text x=\""
            << fmt(left + pw + 40) << "\" y=\"" << fmt(ly + 4) << "\">" << xml_escape(order[s]) << "</text>\n";
        svg << "</g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void emit_plot(const std::vector<RunRecord>& records, PlotAxis axis, std::string_view metric,
               const std::filesystem::path& path, const PlotOptions& options) {
    const auto text = render_plot(records, axis, metric, options);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << text;
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

PlotAxis default_axis(const ExperimentConfig& cfg) {
    if (const auto a = parse_plot_axis(cfg.plot_axis)) return *a;
    if (cfg.ebno_db.size() > 1) return PlotAxis::ebno;
    if (cfg.harq_max.size() > 1) return PlotAxis::harq;
    if (cfg.modulations.size() > 1) return PlotAxis::modulation;
    return PlotAxis::ebno;
}

std::vector<std::filesystem::path> emit_plots(const std::vector<RunRecord>& records, PlotAxis axis,
                                              const std::vector<std::string>& metrics,
                                              const std::filesystem::path& dir, const std::string& stem) {
    std::set<double> ebnos;
    std::set<int> harqs;
    std::set<std::string> mods;
    for (const auto& r : records) {
        ebnos.insert(r.ebno_db);
        harqs.insert(r.harq_max);
        mods.insert(r.modulation);
    }
    // Partition key from the other axes that actually vary.
    auto key = [&](const RunRecord& r) {
        std::string k;
        if (axis != PlotAxis::modulation && mods.size() > 1) k += "_" + r.modulation;
        if (axis != PlotAxis::harq && harqs.size() > 1) k += "_h" + std::to_string(r.harq_max);
        if (axis != PlotAxis::ebno && ebnos.size() > 1) k += "_eb" + format_number(r.ebno_db);
        return k;
    };
    std::vector<std::string> order;
    std::map<std::string, std::vector<RunRecord>> parts;
    for (const auto& r : records) {
        const auto k = key(r);
        if (!parts.count(k)) order.push_back(k);
        parts[k].push_back(r);
    }
    std::vector<std::filesystem::path> written;
    for (const auto& m : metrics)
        for (const auto& k : order) {
            PlotOptions opt;
            opt.title = m + " vs " + std::string(axis_name(axis)) + (k.empty() ? "" : " (" + k.substr(1) + ")");
            const auto path = dir / (stem + "_" + m + "_vs_" + std::string(axis_name(axis)) + k + ".svg");
            emit_plot(parts[k], axis, m, path, opt);
            written.push_back(path);
        }
    return written;
}

}  // namespace ltevid::sim
