#pragma once

#include <string>
#include <vector>

namespace nhfcli {

struct SvgSeries {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
};

/// Fixed-viewbox polyline plot (800x500) with axes, tick labels, and a
/// legend. Deterministic output for identical inputs.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<SvgSeries>& series);

/// Sweep phase plot: verdict markers on the s axis plus J0/I0 overlays.
struct PhaseRowView {
    double s;
    double energy0;
    double nehari0;
    std::string verdict;
};

void write_phase_svg(const std::string& path, const std::vector<PhaseRowView>& rows);

} // namespace nhfcli
