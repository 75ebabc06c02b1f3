#include "langmuir/svg.hpp"

#include "langmuir/io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace langmuir {

ViewBox fit_view(std::span<const Point> points, double margin)
{
    if (points.empty()) {
        throw std::invalid_argument("fit_view: no points");
    }
    ViewBox v{points[0].x, points[0].x, points[0].y, points[0].y};
    for (const Point& p : points) {
        v.x_min = std::min(v.x_min, p.x);
        v.x_max = std::max(v.x_max, p.x);
        v.y_min = std::min(v.y_min, p.y);
        v.y_max = std::max(v.y_max, p.y);
    }
    // A degenerate extent still gets a visible window.
    const double dx = std::max(v.x_max - v.x_min, 1e-9);
    const double dy = std::max(v.y_max - v.y_min, 1e-9);
    return ViewBox{v.x_min - margin * dx, v.x_max + margin * dx, v.y_min - margin * dy, v.y_max + margin * dy};
}

namespace {

std::string defuse_comment(std::string text)
{
    for (std::size_t pos = text.find("--"); pos != std::string::npos; pos = text.find("--", pos)) {
        text.replace(pos, 2, "- -");
    }
    return text;
}

} // namespace

std::string render_svg(const Figure& figure)
{
    const ViewBox& v = figure.view;
    const double scale = figure.width_px / (v.x_max - v.x_min);
    const double height_px = std::ceil((v.y_max - v.y_min) * scale);

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << figure.width_px << "\" height=\"" << height_px
        << "\" viewBox=\"0 0 " << figure.width_px << ' ' << height_px << "\">\n";
    out << "<!-- " << defuse_comment(figure.comment) << " -->\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const auto px = [&](const Point& p) {
        return format_double((p.x - v.x_min) * scale) + ' ' + format_double((v.y_max - p.y) * scale);
    };
    for (const Polyline& c : figure.curves) {
        if (c.points.empty()) {
            continue;
        }
        out << "<path id=\"" << c.id << "\" fill=\"none\" stroke=\"" << c.stroke << "\" stroke-width=\""
            << c.stroke_width << "\" d=\"";
        for (std::size_t i = 0; i < c.points.size(); ++i) {
            out << (i == 0 ? "M" : " L") << px(c.points[i]);
        }
        out << (c.closed ? " Z" : "") << "\"/>\n";
    }
    if (figure.start_marker) {
        const Point& m = *figure.start_marker;
        out << "<circle id=\"start\" cx=\"" << format_double((m.x - v.x_min) * scale) << "\" cy=\""
            << format_double((v.y_max - m.y) * scale) << "\" r=\"4\" fill=\"red\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

Figure trajectory_figure(const Trajectory& traj, double energy, const std::string& comment)
{
    if (traj.samples.empty()) {
        throw std::invalid_argument("trajectory_figure: empty trajectory");
    }
    Figure fig;
    fig.comment = comment;

    Polyline path{"trajectory", {}, "#1f4e9c", 1.5, false};
    path.points.reserve(traj.samples.size());
    for (const State& s : traj.samples) {
        path.points.push_back({s.x, s.y});
    }

    Polyline hill{"hill_boundary", {}, "#888888", 1.0, false};
    if (energy < 0.0) {
        hill.points.push_back({0.0, 0.0});
        for (const Point& p : hill_boundary_sample(energy, 401)) {
            hill.points.push_back(p);
        }
        hill.closed = true;
        fig.view = fit_view(hill.points);
    } else {
        std::vector<Point> extent = path.points;
        extent.push_back({0.0, 0.0});
        fig.view = fit_view(extent);
    }
    const ViewBox& v = fig.view;
    const double reach = std::max(std::abs(v.x_min), std::abs(v.x_max));

    if (energy == 0.0) {
        const double slope = 1.0 / std::sqrt(63.0);
        const double xe = std::min(reach, v.y_max / slope);
        hill.points = {{-xe, slope * xe}, {0.0, 0.0}, {xe, slope * xe}};
    }

    // sqrt(3) y = |x|, clipped to the window.
    const double xm = std::min(reach, sqrt3 * v.y_max);
    Polyline magical{"magical_line", {{-xm, xm / sqrt3}, {0.0, 0.0}, {xm, xm / sqrt3}}, "#c07000", 1.0, false};

    if (!hill.points.empty()) {
        fig.curves.push_back(std::move(hill));
    }
    fig.curves.push_back(std::move(magical));
    fig.curves.push_back(std::move(path));
    fig.start_marker = Point{traj.samples.front().x, traj.samples.front().y};
    return fig;
}

} // namespace langmuir
