#include "cli_svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace nhfcli {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kMarginL = 70.0, kMarginR = 20.0, kMarginT = 40.0, kMarginB = 50.0;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void include(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    void pad() {
        if (!(lo < hi)) {
            lo -= 1.0;
            hi += 1.0;
        }
        const double d = 0.05 * (hi - lo);
        lo -= d;
        hi += d;
    }
};

class Plot {
public:
    Plot(const std::string& path, const std::string& title, Range xr, Range yr)
        : os_(path), xr_(xr), yr_(yr) {
        if (!os_) throw std::runtime_error("cannot open SVG for writing: " + path);
        os_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth
            << ' ' << kHeight << "\">\n"
            << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
            << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\" font-size=\"16\">"
            << title << "</text>\n";
        axes();
    }

    double px(double x) const {
        return kMarginL + (x - xr_.lo) / (xr_.hi - xr_.lo) * (kWidth - kMarginL - kMarginR);
    }
    double py(double y) const {
        return kHeight - kMarginB -
               (y - yr_.lo) / (yr_.hi - yr_.lo) * (kHeight - kMarginT - kMarginB);
    }

    void polyline(const std::vector<double>& x, const std::vector<double>& y,
                  const std::string& color) {
        os_ << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
            if (!std::isfinite(y[i])) continue;
            os_ << fmt(px(x[i])) << ',' << fmt(py(y[i])) << ' ';
        }
        os_ << "\"/>\n";
    }

    void circle(double x, double y, const std::string& color) {
        os_ << "<circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y))
            << "\" r=\"5\" fill=\"" << color << "\"/>\n";
    }

    void legend_entry(std::size_t idx, const std::string& label, const std::string& color) {
        const double y = kMarginT + 14.0 * (idx + 1);
        os_ << "<rect x=\"" << kWidth - 170 << "\" y=\"" << y - 9
            << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n"
            << "<text x=\"" << kWidth - 155 << "\" y=\"" << y
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << label << "</text>\n";
    }

    ~Plot() { os_ << "</svg>\n"; }

private:
    void axes() {
        os_ << "<line x1=\"" << kMarginL << "\" y1=\"" << kHeight - kMarginB << "\" x2=\""
            << kWidth - kMarginR << "\" y2=\"" << kHeight - kMarginB
            << "\" stroke=\"black\"/>\n"
            << "<line x1=\"" << kMarginL << "\" y1=\"" << kMarginT << "\" x2=\"" << kMarginL
            << "\" y2=\"" << kHeight - kMarginB << "\" stroke=\"black\"/>\n";
        for (int i = 0; i <= 4; ++i) {
            const double fx = xr_.lo + (xr_.hi - xr_.lo) * i / 4.0;
            const double fy = yr_.lo + (yr_.hi - yr_.lo) * i / 4.0;
            os_ << "<text x=\"" << fmt(px(fx)) << "\" y=\"" << kHeight - kMarginB + 18
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                   "font-size=\"11\">"
                << fmt(fx) << "</text>\n"
                << "<text x=\"" << kMarginL - 8 << "\" y=\"" << fmt(py(fy) + 4)
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
                << fmt(fy) << "</text>\n";
        }
    }

    std::ofstream os_;
    Range xr_, yr_;
};

} // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<SvgSeries>& series) {
    Range xr, yr;
    for (const SvgSeries& s : series) {
        for (double v : s.x) xr.include(v);
        for (double v : s.y) yr.include(v);
    }
    xr.pad();
    yr.pad();
    Plot plot(path, title, xr, yr);
    for (const SvgSeries& s : series) plot.polyline(s.x, s.y, s.color);
    for (std::size_t i = 0; i < series.size(); ++i) {
        plot.legend_entry(i, series[i].label, series[i].color);
    }
}

void write_phase_svg(const std::string& path, const std::vector<PhaseRowView>& rows) {
    Range xr, yr;
    for (const PhaseRowView& r : rows) {
        xr.include(r.s);
        yr.include(r.energy0);
        yr.include(r.nehari0);
        yr.include(0.0);
    }
    xr.pad();
    yr.pad();
    Plot plot(path, "phase: verdict vs scale (J0, I0 overlays)", xr, yr);
    std::vector<double> xs, j0, i0;
    for (const PhaseRowView& r : rows) {
        xs.push_back(r.s);
        j0.push_back(r.energy0);
        i0.push_back(r.nehari0);
    }
    plot.polyline(xs, j0, "#1f77b4");
    plot.polyline(xs, i0, "#2ca02c");
    for (const PhaseRowView& r : rows) {
        std::string color = "#7f7f7f";  // Undetermined / Failed
        if (r.verdict == "GlobalDecay") color = "#2ca02c";
        if (r.verdict == "BlowUp") color = "#d62728";
        plot.circle(r.s, 0.0, color);
    }
    plot.legend_entry(0, "J0", "#1f77b4");
    plot.legend_entry(1, "I0", "#2ca02c");
    plot.legend_entry(2, "verdict marker", "#d62728");
}

} // namespace nhfcli
