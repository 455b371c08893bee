#include "rpsim/timeline_svg.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace rpsim {

namespace {

constexpr double kPlotWidth = 1160.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginTop = 40.0;
constexpr double kRowHeight = 14.0;
constexpr double kAxisHeight = 30.0;

constexpr const char* kAncColor = "#d62728";   // magic-state wait
constexpr const char* kTelColor = "#1f77b4";   // entanglement wait / teleport
constexpr const char* kSwpColor = "#9467bd";   // cross-segment swap
constexpr const char* kShutColor = "#2ca02c";  // shuttle
constexpr const char* kOpColor = "#bbbbbb";    // execution span

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

} // namespace

void render_timeline(const Schedule& schedule, std::ostream& out) {
    const int rows = std::max(1, schedule.total_rows);
    const double t_total = schedule.t_total() > 0 ? schedule.t_total() : 1.0;
    const double sx = kPlotWidth / t_total;
    const double height = kMarginTop + rows * kRowHeight + kAxisHeight;
    const double width = kMarginLeft + kPlotWidth + 20.0;

    auto x = [&](usec t) { return kMarginLeft + t * sx; };
    auto y = [&](int row) { return kMarginTop + (row + 0.5) * kRowHeight; };

    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << fmt(width) << "' height='"
        << fmt(height) << "' viewBox='0 0 " << fmt(width) << ' ' << fmt(height) << "'>\n";
    out << "<style>text { font-family: monospace; font-size: 10px; }</style>\n";

    // Axes.
    out << "<line x1='" << fmt(kMarginLeft) << "' y1='" << fmt(kMarginTop) << "' x2='"
        << fmt(kMarginLeft) << "' y2='" << fmt(kMarginTop + rows * kRowHeight)
        << "' stroke='black'/>\n";
    out << "<line x1='" << fmt(kMarginLeft) << "' y1='" << fmt(kMarginTop + rows * kRowHeight)
        << "' x2='" << fmt(kMarginLeft + kPlotWidth) << "' y2='"
        << fmt(kMarginTop + rows * kRowHeight) << "' stroke='black'/>\n";
    out << "<text x='" << fmt(kMarginLeft) << "' y='"
        << fmt(kMarginTop + rows * kRowHeight + 20.0) << "'>0</text>\n";
    out << "<text x='" << fmt(kMarginLeft + kPlotWidth - 80.0) << "' y='"
        << fmt(kMarginTop + rows * kRowHeight + 20.0) << "'>" << fmt(t_total)
        << " us</text>\n";
    out << "<text x='4' y='" << fmt(kMarginTop - 24.0)
        << "'>rows: data tiles; horizontal = magic-state wait, sloped = cross-segment "
           "teleport</text>\n";

    // Legend.
    struct LegendEntry {
        const char* color;
        const char* label;
    };
    const LegendEntry legend[] = {{kAncColor, "ancilla wait"},
                                  {kTelColor, "teleport"},
                                  {kSwpColor, "swap"},
                                  {kShutColor, "shuttle"},
                                  {kOpColor, "execution"}};
    double lx = kMarginLeft;
    for (const auto& e : legend) {
        out << "<rect x='" << fmt(lx) << "' y='" << fmt(kMarginTop - 18.0)
            << "' width='10' height='10' fill='" << e.color << "'/>\n";
        out << "<text x='" << fmt(lx + 14.0) << "' y='" << fmt(kMarginTop - 9.0) << "'>"
            << e.label << "</text>\n";
        lx += 120.0;
    }

    // Execution spans, then the delay lines on top.
    for (const auto& op : schedule.ops) {
        if (op.row < 0 || !op.primary)
            continue;
        out << "<rect x='" << fmt(x(op.t_start)) << "' y='" << fmt(y(op.row) - 3.0)
            << "' width='" << fmt(std::max(0.5, (op.t_finish - op.t_start) * sx))
            << "' height='6' fill='" << kOpColor << "'/>\n";
    }

    for (const auto& op : schedule.ops) {
        if (op.source == NoiseSource::Shuttling && op.row >= 0) {
            out << "<line x1='" << fmt(x(op.t_start)) << "' y1='" << fmt(y(op.row)) << "' x2='"
                << fmt(x(op.t_finish)) << "' y2='" << fmt(y(op.row)) << "' stroke='"
                << kShutColor << "' stroke-width='1'/>\n";
        }
        if (op.op == LogicalOp::TeleportData && op.src_row >= 0 && op.dst_row >= 0 &&
            op.src_row != op.dst_row) {
            // Sloped: from the providing row at request time to the
            // destination row at arrival.
            out << "<line x1='" << fmt(x(op.t_ready)) << "' y1='" << fmt(y(op.src_row))
                << "' x2='" << fmt(x(op.t_finish)) << "' y2='" << fmt(y(op.dst_row))
                << "' stroke='" << kTelColor << "' stroke-width='1'/>\n";
        }
        if (op.primary && op.row >= 0) {
            // Horizontal wait segments per delay class, drawn back to front
            // in attribution order: shut, tel, swp, anc.
            double cursor = op.t_ready + op.d_shut;
            if (op.d_tel > 0) {
                out << "<line x1='" << fmt(x(cursor)) << "' y1='" << fmt(y(op.row) - 5.0)
                    << "' x2='" << fmt(x(cursor + op.d_tel)) << "' y2='"
                    << fmt(y(op.row) - 5.0) << "' stroke='" << kTelColor
                    << "' stroke-width='2'/>\n";
            }
            cursor += op.d_tel;
            if (op.d_swp > 0) {
                out << "<line x1='" << fmt(x(cursor)) << "' y1='" << fmt(y(op.row) - 5.0)
                    << "' x2='" << fmt(x(cursor + op.d_swp)) << "' y2='"
                    << fmt(y(op.row) - 5.0) << "' stroke='" << kSwpColor
                    << "' stroke-width='2'/>\n";
            }
            cursor += op.d_swp;
            if (op.d_anc > 0) {
                out << "<line class='anc-wait' x1='" << fmt(x(cursor)) << "' y1='"
                    << fmt(y(op.row)) << "' x2='" << fmt(x(cursor + op.d_anc)) << "' y2='"
                    << fmt(y(op.row)) << "' stroke='" << kAncColor
                    << "' stroke-width='2'/>\n";
            }
        }
    }

    out << "</svg>\n";
}

std::string render_timeline(const Schedule& schedule) {
    std::ostringstream ss;
    render_timeline(schedule, ss);
    return ss.str();
}

void render_timeline_file(const Schedule& schedule, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write timeline file: " + path);
    render_timeline(schedule, out);
}

} // namespace rpsim
