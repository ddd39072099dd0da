#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nsmcli {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kMarginL = 74.0;
constexpr double kMarginR = 22.0;
constexpr double kMarginT = 38.0;
constexpr double kMarginB = 58.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};

struct Axis {
    double lo = 0.0, hi = 1.0;  // in plot units (log10 when logarithmic)
    bool log = false;

    double place(double v, double pix_lo, double pix_hi) const {
        const double u = (v - lo) / (hi - lo);
        return pix_lo + u * (pix_hi - pix_lo);
    }
};

bool plottable(double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); }

double to_units(double v, bool log) { return log ? std::log10(v) : v; }

Axis fit_axis(const PlotSpec& spec, bool y_axis) {
    Axis ax;
    ax.log = y_axis ? spec.log_y : spec.log_x;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const PlotSeries& s : spec.series) {
        const std::vector<double>& vals = y_axis ? s.y : s.x;
        for (const double v : vals) {
            if (!plottable(v, ax.log)) continue;
            const double u = to_units(v, ax.log);
            lo = std::min(lo, u);
            hi = std::max(hi, u);
        }
    }
    if (!(lo <= hi)) {  // nothing plottable; keep a unit box
        lo = ax.log ? 0.0 : 0.0;
        hi = ax.log ? 1.0 : 1.0;
    }
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.04 * (hi - lo);
    ax.lo = lo - pad;
    ax.hi = hi + pad;
    return ax;
}

std::string tick_label(double units, bool log) {
    std::ostringstream os;
    if (log) {
        os << "1e" << static_cast<int>(std::lround(units));
    } else {
        os.precision(6);
        os << units;
    }
    return os.str();
}

std::vector<double> tick_positions(const Axis& ax) {
    std::vector<double> ticks;
    if (ax.log) {
        for (int d = static_cast<int>(std::ceil(ax.lo)); d <= std::floor(ax.hi); ++d)
            ticks.push_back(d);
        if (ticks.size() > 12) {  // thin out dense decade ranges
            std::vector<double> sparse;
            const int stride = static_cast<int>((ticks.size() + 11) / 12);
            for (std::size_t i = 0; i < ticks.size(); i += stride)
                sparse.push_back(ticks[i]);
            ticks = sparse;
        }
        return ticks;
    }
    const double span = ax.hi - ax.lo;
    double step = std::pow(10.0, std::floor(std::log10(span / 5.0)));
    if (span / step > 10.0) step *= 2.0;
    if (span / step > 10.0) step *= 2.5;
    const double first = std::ceil(ax.lo / step) * step;
    for (double v = first; v <= ax.hi + 1e-9 * span; v += step)
        ticks.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
    return ticks;
}

void escape_into(std::ostream& os, const std::string& text) {
    for (const char c : text) {
        switch (c) {
            case '&': os << "&amp;"; break;
            case '<': os << "&lt;"; break;
            case '>': os << "&gt;"; break;
            default: os << c;
        }
    }
}

}  // namespace

void write_svg(const std::string& path, const PlotSpec& spec) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.precision(2);
    out << std::fixed;

    const Axis xa = fit_axis(spec, false);
    const Axis ya = fit_axis(spec, true);
    const double px_lo = kMarginL, px_hi = kWidth - kMarginR;
    const double py_lo = kHeight - kMarginB, py_hi = kMarginT;  // y grows upward

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
        << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Grid and tick labels.
    out << "<g font-family=\"monospace\" font-size=\"12\" fill=\"#333\">\n";
    for (const double t : tick_positions(xa)) {
        const double x = xa.place(t, px_lo, px_hi);
        out << "<line x1=\"" << x << "\" y1=\"" << py_lo << "\" x2=\"" << x
            << "\" y2=\"" << py_hi << "\" stroke=\"#ddd\"/>\n";
        out << "<text x=\"" << x << "\" y=\"" << py_lo + 18
            << "\" text-anchor=\"middle\">" << tick_label(t, xa.log) << "</text>\n";
    }
    for (const double t : tick_positions(ya)) {
        const double y = ya.place(t, py_lo, py_hi);
        out << "<line x1=\"" << px_lo << "\" y1=\"" << y << "\" x2=\"" << px_hi
            << "\" y2=\"" << y << "\" stroke=\"#ddd\"/>\n";
        out << "<text x=\"" << px_lo - 6 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\">" << tick_label(t, ya.log) << "</text>\n";
    }
    out << "</g>\n";

    // Axes frame.
    out << "<rect x=\"" << px_lo << "\" y=\"" << py_hi << "\" width=\""
        << px_hi - px_lo << "\" height=\"" << py_lo - py_hi
        << "\" fill=\"none\" stroke=\"#333\"/>\n";

    // Series.
    for (std::size_t si = 0; si < spec.series.size(); ++si) {
        const PlotSeries& s = spec.series[si];
        const char* color = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
        std::ostringstream points;
        bool in_segment = false;
        auto flush = [&] {
            const std::string p = points.str();
            if (!p.empty())
                out << "<polyline fill=\"none\" stroke=\"" << color
                    << "\" stroke-width=\"1.6\" points=\"" << p << "\"/>\n";
            points.str("");
            in_segment = false;
        };
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!plottable(s.x[i], xa.log) || !plottable(s.y[i], ya.log)) {
                flush();
                continue;
            }
            const double x = xa.place(to_units(s.x[i], xa.log), px_lo, px_hi);
            const double y = ya.place(to_units(s.y[i], ya.log), py_lo, py_hi);
            if (in_segment) points << " ";
            points.precision(2);
            points << std::fixed << x << "," << y;
            in_segment = true;
        }
        flush();
    }

    // Legend, top-right inside the frame.
    out << "<g font-family=\"monospace\" font-size=\"12\" fill=\"#333\">\n";
    for (std::size_t si = 0; si < spec.series.size(); ++si) {
        const double y = py_hi + 16 + 16 * static_cast<double>(si);
        const char* color = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
        out << "<line x1=\"" << px_hi - 150 << "\" y1=\"" << y << "\" x2=\""
            << px_hi - 126 << "\" y2=\"" << y << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << px_hi - 120 << "\" y=\"" << y + 4 << "\">";
        escape_into(out, spec.series[si].label);
        out << "</text>\n";
    }
    out << "</g>\n";

    // Labels and title.
    out << "<g font-family=\"monospace\" font-size=\"13\" fill=\"#111\">\n";
    out << "<text x=\"" << 0.5 * (px_lo + px_hi) << "\" y=\"" << kHeight - 14
        << "\" text-anchor=\"middle\">";
    escape_into(out, spec.x_label);
    out << "</text>\n";
    out << "<text x=\"16\" y=\"" << 0.5 * (py_lo + py_hi)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << 0.5 * (py_lo + py_hi) << ")\">";
    escape_into(out, spec.y_label);
    out << "</text>\n";
    out << "<text x=\"" << 0.5 * (px_lo + px_hi) << "\" y=\"22\" "
        << "text-anchor=\"middle\" font-size=\"15\">";
    escape_into(out, spec.title);
    out << "</text>\n";
    out << "</g>\n</svg>\n";
    if (!out) throw std::runtime_error("write failure on " + path);
}

void write_gnuplot_script(const std::string& path, const std::string& csv_file,
                          const PlotSpec& spec, int x_column,
                          const std::vector<std::pair<int, std::string>>& y_columns) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "# Rebuilds the figure from " << csv_file << " (requires gnuplot).\n";
    out << "set datafile separator comma\n";
    out << "set terminal svg size 720,480\n";
    out << "set output '" << path.substr(0, path.rfind('.')) << "_gnuplot.svg'\n";
    out << "set title '" << spec.title << "'\n";
    out << "set xlabel '" << spec.x_label << "'\n";
    out << "set ylabel '" << spec.y_label << "'\n";
    if (spec.log_x) out << "set logscale x\n";
    if (spec.log_y) out << "set logscale y\n";
    out << "set key top right\n";
    out << "plot ";
    for (std::size_t i = 0; i < y_columns.size(); ++i) {
        if (i > 0) out << ", \\\n     ";
        out << "'" << csv_file << "' using " << x_column << ":" << y_columns[i].first
            << " with lines title '" << y_columns[i].second << "'";
    }
    out << "\n";
    if (!out) throw std::runtime_error("write failure on " + path);
}

}  // namespace nsmcli
