#include "cavlab/svg.hpp"

#include "cavlab/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace cavlab {

namespace {

constexpr int kWidth = 800;
constexpr int kHeight = 600;
constexpr double kLeft = 90.0;
constexpr double kTop = 60.0;
constexpr double kBottom = kHeight - 70.0;
constexpr int kTicks = 6;

constexpr std::array<const char*, 6> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

struct Rgb {
    double r, g, b;
};
constexpr std::array<Rgb, 5> kViridis{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};

std::string num(double v, const char* fmt = "%.2f") {
    char buf[48];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::string label(double v) { return num(v, "%.4g"); }

std::string escape(const std::string& s) {
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

std::string color_hex(const Rgb& c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(c.r)),
                  static_cast<int>(std::lround(c.g)), static_cast<int>(std::lround(c.b)));
    return buf;
}

// f in [0, 1]
std::string colormap(double f) {
    f = std::clamp(f, 0.0, 1.0) * (kViridis.size() - 1);
    const auto i = std::min(static_cast<std::size_t>(f), kViridis.size() - 2);
    const double w = f - static_cast<double>(i);
    const Rgb& lo = kViridis[i];
    const Rgb& hi = kViridis[i + 1];
    return color_hex({lo.r + w * (hi.r - lo.r), lo.g + w * (hi.g - lo.g), lo.b + w * (hi.b - lo.b)});
}

struct Range {
    double lo{std::numeric_limits<double>::infinity()};
    double hi{-std::numeric_limits<double>::infinity()};

    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    bool empty() const { return lo > hi; }

    Range padded() const {
        Range r = *this;
        if (hi == lo) {
            const double pad = lo != 0.0 ? 0.1 * std::abs(lo) : 1.0;
            r.lo -= pad;
            r.hi += pad;
        } else {
            const double pad = 0.05 * (hi - lo);
            r.lo -= pad;
            r.hi += pad;
        }
        return r;
    }
};

void open_document(std::ostringstream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\">\n";
    out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"30\" font-size=\"18\" text-anchor=\"middle\">" << escape(title)
        << "</text>\n";
}

void axis_labels(std::ostringstream& out, double right, const std::string& xl, const std::string& yl) {
    out << "<text x=\"" << num((kLeft + right) / 2) << "\" y=\"" << kHeight - 20
        << "\" font-size=\"14\" text-anchor=\"middle\">" << escape(xl) << "</text>\n";
    out << "<text x=\"20\" y=\"" << num((kTop + kBottom) / 2) << "\" font-size=\"14\" text-anchor=\"middle\" "
        << "transform=\"rotate(-90 20 " << num((kTop + kBottom) / 2) << ")\">" << escape(yl) << "</text>\n";
}

void frame(std::ostringstream& out, double right) {
    out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(right - kLeft)
        << "\" height=\"" << num(kBottom - kTop) << "\" fill=\"none\" stroke=\"black\"/>\n";
}

void x_tick(std::ostringstream& out, double px, double value) {
    out << "<line x1=\"" << num(px) << "\" y1=\"" << num(kBottom) << "\" x2=\"" << num(px) << "\" y2=\""
        << num(kBottom + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(px) << "\" y=\"" << num(kBottom + 20) << "\" font-size=\"12\" text-anchor=\"middle\">"
        << label(value) << "</text>\n";
}

void y_tick(std::ostringstream& out, double py, double value) {
    out << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py) << "\" x2=\"" << num(kLeft) << "\" y2=\""
        << num(py) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py + 4) << "\" font-size=\"12\" text-anchor=\"end\">"
        << label(value) << "</text>\n";
}

std::vector<double> table_values(const SweepTable& t) {
    std::vector<double> v;
    v.reserve(t.rows.size());
    for (const auto& r : t.rows) v.push_back(r.value.ok() ? r.value.value : std::numeric_limits<double>::quiet_NaN());
    return v;
}

std::string observable_of(const SweepTable& t) { return t.columns.empty() ? std::string() : t.columns.back(); }

} // namespace

std::string render_line_plot(const LinePlot& plot) {
    Range xr, yr;
    for (const auto& s : plot.series) {
        if (s.x.size() != s.y.size()) throw Error(Errc::InvalidSpec, "series '" + s.label + "' has mismatched x and y");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i])) throw Error(Errc::NonFiniteAxis, "series '" + s.label + "' has a non-finite x value");
            xr.add(s.x[i]);
            if (std::isfinite(s.y[i])) yr.add(s.y[i]);
        }
    }
    if (xr.empty() || yr.empty()) throw Error(Errc::EmptyData, "line plot has no finite points");
    xr = xr.padded();
    yr = yr.padded();

    const double right = kWidth - 40.0;
    auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * (right - kLeft); };
    auto py = [&](double y) { return kBottom - (y - yr.lo) / (yr.hi - yr.lo) * (kBottom - kTop); };

    std::ostringstream out;
    open_document(out, plot.title);
    frame(out, right);
    for (int k = 0; k < kTicks; ++k) {
        const double f = static_cast<double>(k) / (kTicks - 1);
        x_tick(out, px(xr.lo + f * (xr.hi - xr.lo)), xr.lo + f * (xr.hi - xr.lo));
        y_tick(out, py(yr.lo + f * (yr.hi - yr.lo)), yr.lo + f * (yr.hi - yr.lo));
    }
    axis_labels(out, right, plot.x_label, plot.y_label);

    for (std::size_t si = 0; si < plot.series.size(); ++si) {
        const auto& s = plot.series[si];
        const char* color = kPalette[si % kPalette.size()];
        std::string d;
        bool pen_down = false;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) {
                pen_down = false;
                continue;
            }
            const bool isolated = (i == 0 || !std::isfinite(s.y[i - 1])) && (i + 1 == s.x.size() || !std::isfinite(s.y[i + 1]));
            if (isolated) {
                out << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i])) << "\" r=\"2\" fill=\"" << color
                    << "\"/>\n";
            }
            d += (pen_down ? " L" : (d.empty() ? "M" : " M")) + num(px(s.x[i])) + ' ' + num(py(s.y[i]));
            pen_down = true;
        }
        if (!d.empty()) {
            out << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
        }
        const double ly = kTop + 18.0 + 18.0 * static_cast<double>(si);
        out << "<line x1=\"" << num(right - 150) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(right - 125) << "\" y2=\""
            << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << num(right - 120) << "\" y=\"" << num(ly + 4) << "\" font-size=\"12\">" << escape(s.label)
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_heatmap(const Heatmap& map) {
    if (map.x.empty() || map.y.empty() || map.z.empty()) throw Error(Errc::EmptyData, "heatmap has no cells");
    if (map.z.size() != map.x.size() * map.y.size()) throw Error(Errc::InvalidSpec, "heatmap z does not match x * y");
    for (double v : map.x) if (!std::isfinite(v)) throw Error(Errc::NonFiniteAxis, "heatmap x axis is not finite");
    for (double v : map.y) if (!std::isfinite(v)) throw Error(Errc::NonFiniteAxis, "heatmap y axis is not finite");
    Range zr;
    for (double v : map.z) if (std::isfinite(v)) zr.add(v);
    if (zr.empty()) throw Error(Errc::EmptyData, "heatmap has no finite values");

    const double right = kWidth - 130.0;
    const std::size_t nx = map.x.size(), ny = map.y.size();
    const double cw = (right - kLeft) / static_cast<double>(nx);
    const double ch = (kBottom - kTop) / static_cast<double>(ny);
    auto shade = [&](double v) { return zr.hi > zr.lo ? (v - zr.lo) / (zr.hi - zr.lo) : 0.5; };

    std::ostringstream out;
    open_document(out, map.title);
    out << "<g shape-rendering=\"crispEdges\">\n";
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const double v = map.z[i * ny + j];
            out << "<rect x=\"" << num(kLeft + cw * static_cast<double>(i)) << "\" y=\""
                << num(kBottom - ch * static_cast<double>(j + 1)) << "\" width=\"" << num(cw + 0.05) << "\" height=\""
                << num(ch + 0.05) << "\" fill=\"" << (std::isfinite(v) ? colormap(shade(v)) : std::string("#bdbdbd"))
                << "\"/>\n";
        }
    }
    out << "</g>\n";
    frame(out, right);
    const std::size_t xticks = std::min<std::size_t>(kTicks, nx), yticks = std::min<std::size_t>(kTicks, ny);
    for (std::size_t k = 0; k < xticks; ++k) {
        const std::size_t i = xticks > 1 ? k * (nx - 1) / (xticks - 1) : 0;
        x_tick(out, kLeft + cw * (static_cast<double>(i) + 0.5), map.x[i]);
    }
    for (std::size_t k = 0; k < yticks; ++k) {
        const std::size_t j = yticks > 1 ? k * (ny - 1) / (yticks - 1) : 0;
        y_tick(out, kBottom - ch * (static_cast<double>(j) + 0.5), map.y[j]);
    }
    axis_labels(out, right, map.x_label, map.y_label);

    // color bar
    const double bx = right + 30.0, bw = 20.0;
    out << "<defs><linearGradient id=\"scale\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">\n";
    for (std::size_t k = 0; k < kViridis.size(); ++k) {
        const double f = static_cast<double>(k) / (kViridis.size() - 1);
        out << "<stop offset=\"" << num(f) << "\" stop-color=\"" << color_hex(kViridis[k]) << "\"/>\n";
    }
    out << "</linearGradient></defs>\n";
    out << "<rect x=\"" << num(bx) << "\" y=\"" << num(kTop) << "\" width=\"" << num(bw) << "\" height=\""
        << num(kBottom - kTop) << "\" fill=\"url(#scale)\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(bx + bw + 4) << "\" y=\"" << num(kTop + 4) << "\" font-size=\"12\">max " << label(zr.hi)
        << "</text>\n";
    out << "<text x=\"" << num(bx + bw + 4) << "\" y=\"" << num(kBottom + 4) << "\" font-size=\"12\">min "
        << label(zr.lo) << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

LinePlot trajectory_plot(const Trajectory& traj, std::string title) {
    LinePlot plot{std::move(title), "J t", "energy", {{"E_a", {}, {}}, {"E_c", {}, {}}}};
    for (const auto& s : traj.samples) {
        plot.series[0].x.push_back(s.jt);
        plot.series[0].y.push_back(s.e_a);
        plot.series[1].x.push_back(s.jt);
        plot.series[1].y.push_back(s.e_c);
    }
    return plot;
}

std::string render_table(const SweepTable& table, std::string title) {
    if (title.empty()) title = table.meta("name").value_or(observable_of(table));
    if (table.shape.size() == 1) return render_line_plot(tables_plot({table}, {observable_of(table)}, std::move(title)));
    if (table.shape.size() != 2 || table.columns.size() != 3) throw Error(Errc::InvalidSpec, "table must have one or two axes");
    Heatmap map{std::move(title), table.columns[0], table.columns[1], {}, {}, table_values(table)};
    const std::size_t nx = table.shape[0], ny = table.shape[1];
    if (table.rows.size() != nx * ny) throw Error(Errc::InvalidSpec, "table rows do not match its shape");
    for (std::size_t i = 0; i < nx; ++i) map.x.push_back(table.rows[i * ny].coords[0]);
    for (std::size_t j = 0; j < ny; ++j) map.y.push_back(table.rows[j].coords[1]);
    return render_heatmap(map);
}

LinePlot tables_plot(const std::vector<SweepTable>& tables, const std::vector<std::string>& labels, std::string title) {
    if (tables.empty()) throw Error(Errc::EmptyData, "no tables to plot");
    if (labels.size() != tables.size()) throw Error(Errc::InvalidSpec, "one label per table is required");
    LinePlot plot{std::move(title), tables.front().columns.empty() ? "" : tables.front().columns.front(),
                  observable_of(tables.front()), {}};
    for (std::size_t k = 0; k < tables.size(); ++k) {
        const auto& t = tables[k];
        if (t.shape.size() != 1) throw Error(Errc::InvalidSpec, "line plots need one-axis tables");
        Series s{labels[k], {}, table_values(t)};
        for (const auto& r : t.rows) s.x.push_back(r.coords.at(0));
        plot.series.push_back(std::move(s));
    }
    return plot;
}

} // namespace cavlab
