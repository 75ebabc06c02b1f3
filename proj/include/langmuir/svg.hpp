#pragma once

#include "langmuir/dynamics.hpp"
#include "langmuir/integrator.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace langmuir {

struct Polyline {
    std::string id;
    std::vector<Point> points;
    std::string stroke = "black";
    double stroke_width = 1.5;
    bool closed = false;
};

/// Axis-aligned window in data coordinates.
struct ViewBox {
    double x_min = -1.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;
};

struct Figure {
    std::vector<Polyline> curves;
    std::optional<Point> start_marker;
    /// Embedded verbatim (with "--" defused) as an XML comment.
    std::string comment;
    ViewBox view;
    int width_px = 800;
};

/// Bounding box of `points` grown by `margin` of its extent on every side.
ViewBox fit_view(std::span<const Point> points, double margin = 0.05);

/// One <path> per curve in pixel coordinates, y pointing up in data space.
std::string render_svg(const Figure& figure);

/// Trajectory, zero-velocity curve, magical line and start marker. For E < 0 the
/// window is fitted to the Hill region; otherwise to the trajectory, with the
/// zero-energy boundary drawn as the two lines y = |x| / sqrt(63) when E == 0.
Figure trajectory_figure(const Trajectory& traj, double energy, const std::string& comment);

} // namespace langmuir
