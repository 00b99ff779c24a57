#include "viralsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace viralsim::io {

namespace {

// Canvas geometry (pixels).
constexpr double kWidth = 800.0, kHeight = 500.0;
constexpr double kMarginLeft = 64.0, kMarginRight = 150.0;
constexpr double kMarginTop = 44.0, kMarginBottom = 52.0;
constexpr double kPlotW = kWidth - kMarginLeft - kMarginRight;
constexpr double kPlotH = kHeight - kMarginTop - kMarginBottom;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                "#9467bd", "#ff7f0e", "#8c564b"};
constexpr std::size_t kPaletteSize = sizeof kPalette / sizeof kPalette[0];

std::string fmt(const char* spec, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string px(double v) { return fmt("%.2f", v); }

std::string escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo, hi;
    double span() const { return hi - lo; }
};

Range padded(double lo, double hi, double pad_fraction) {
    double pad = pad_fraction * (hi - lo);
    if (pad <= 0.0) pad = pad_fraction * std::max(1.0, std::fabs(hi));
    return {lo - pad, hi + pad};
}

// Largest 1/2/5*10^k step giving at most `target` intervals.
double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    if (frac <= 1.0) return mag;
    if (frac <= 2.0) return 2.0 * mag;
    if (frac <= 5.0) return 5.0 * mag;
    return 10.0 * mag;
}

}  // namespace

std::string write_svg_chart(const std::vector<Series>& series,
                            const std::string& title) {
    if (series.empty())
        throw std::invalid_argument("svg chart: series list is empty");
    const std::vector<double>& times = series.front().times;
    if (times.empty())
        throw std::invalid_argument("svg chart: series have no samples");
    double vmin = series.front().values.front();
    double vmax = vmin;
    for (const Series& s : series) {
        if (s.times != times)
            throw std::invalid_argument(
                "svg chart: all series must share the times vector");
        if (s.values.size() != times.size())
            throw std::invalid_argument(
                "svg chart: values/times length mismatch");
        for (double v : s.values) {
            if (!std::isfinite(v))
                throw std::invalid_argument("svg chart: non-finite value");
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
        }
    }
    for (double t : times)
        if (!std::isfinite(t))
            throw std::invalid_argument("svg chart: non-finite time");

    Range x{times.front(), times.back()};
    if (!(x.span() > 0.0)) x = padded(x.lo, x.hi, 0.05);
    const Range y = padded(vmin, vmax, 0.05);

    const auto to_px_x = [&x](double t) {
        return kMarginLeft + (t - x.lo) / x.span() * kPlotW;
    };
    const auto to_px_y = [&y](double v) {
        return kMarginTop + (y.hi - v) / y.span() * kPlotH;
    };

    std::string out;
    out.reserve(4096 + series.size() * times.size() * 16);
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           px(kWidth) + "\" height=\"" + px(kHeight) + "\" viewBox=\"0 0 " +
           px(kWidth) + " " + px(kHeight) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + px(kWidth) + "\" height=\"" +
           px(kHeight) + "\" fill=\"#ffffff\"/>\n";
    out += "<text x=\"" + px(kWidth / 2.0) +
           "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" "
           "text-anchor=\"middle\">" +
           escape(title) + "</text>\n";

    // Plot frame.
    out += "<rect x=\"" + px(kMarginLeft) + "\" y=\"" + px(kMarginTop) +
           "\" width=\"" + px(kPlotW) + "\" height=\"" + px(kPlotH) +
           "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    // Ticks and labels.
    out += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
    const double x_step = nice_step(x.span(), 8);
    const double y_step = nice_step(y.span(), 8);
    const double x_base = kMarginTop + kPlotH;
    for (long k = static_cast<long>(std::ceil(x.lo / x_step - 1e-9));
         k * x_step <= x.hi + 1e-9 * x.span(); ++k) {
        const double t = static_cast<double>(k) * x_step;
        const double xp = to_px_x(t);
        out += "<line x1=\"" + px(xp) + "\" y1=\"" + px(x_base) + "\" x2=\"" +
               px(xp) + "\" y2=\"" + px(x_base + 5.0) +
               "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + px(xp) + "\" y=\"" + px(x_base + 18.0) +
               "\" text-anchor=\"middle\">" + fmt("%g", t) + "</text>\n";
    }
    for (long k = static_cast<long>(std::ceil(y.lo / y_step - 1e-9));
         k * y_step <= y.hi + 1e-9 * y.span(); ++k) {
        const double v = static_cast<double>(k) * y_step;
        const double yp = to_px_y(v);
        out += "<line x1=\"" + px(kMarginLeft - 5.0) + "\" y1=\"" + px(yp) +
               "\" x2=\"" + px(kMarginLeft) + "\" y2=\"" + px(yp) +
               "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + px(kMarginLeft - 8.0) + "\" y=\"" + px(yp + 4.0) +
               "\" text-anchor=\"end\">" + fmt("%g", v) + "</text>\n";
    }
    out += "<text x=\"" + px(kMarginLeft + kPlotW / 2.0) + "\" y=\"" +
           px(kHeight - 12.0) + "\" text-anchor=\"middle\">time</text>\n";
    out += "</g>\n";

    // Data series.
    out += "<g fill=\"none\" stroke-width=\"1.5\">\n";
    for (std::size_t si = 0; si < series.size(); ++si) {
        out += "<polyline stroke=\"";
        out += kPalette[si % kPaletteSize];
        out += "\" points=\"";
        for (std::size_t k = 0; k < times.size(); ++k) {
            if (k > 0) out += " ";
            out += px(to_px_x(times[k])) + "," + px(to_px_y(series[si].values[k]));
        }
        out += "\"/>\n";
    }
    out += "</g>\n";

    // Legend.
    out += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    const double legend_x = kMarginLeft + kPlotW + 14.0;
    for (std::size_t si = 0; si < series.size(); ++si) {
        const double yp = kMarginTop + 10.0 + 20.0 * static_cast<double>(si);
        out += "<line x1=\"" + px(legend_x) + "\" y1=\"" + px(yp) + "\" x2=\"" +
               px(legend_x + 22.0) + "\" y2=\"" + px(yp) + "\" stroke=\"";
        out += kPalette[si % kPaletteSize];
        out += "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + px(legend_x + 28.0) + "\" y=\"" + px(yp + 4.0) +
               "\">" + escape(series[si].label) + "</text>\n";
    }
    out += "</g>\n";
    out += "</svg>\n";
    return out;
}

}  // namespace viralsim::io
