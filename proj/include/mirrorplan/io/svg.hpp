#pragma once

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mirrorplan/geometry/arrangement.hpp"

namespace mirrorplan::io {

namespace detail {

inline std::string mm(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace detail

/**
 * Arrangement drawing in the model frame, 1 SVG unit = 1 mm. Geometry sits in
 * a y-flipped group so every coordinate attribute equals the model coordinate;
 * labels are placed outside it to stay upright.
 */
inline std::string render_svg(const geometry::ArrangementSolution& s, double r) {
    using geometry::Point2;
    using detail::mm;
    std::vector<Point2> all = {s.V0, s.V1, s.V2, {-s.V0.x, 0.0}, s.H, s.P, s.Q, s.R, s.A1, s.A2,
                               s.B0, s.B1, s.C1, s.C2};
    double xmin = all[0].x, xmax = all[0].x, ymin = all[0].y, ymax = all[0].y;
    for (Point2 p : all) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double margin = 30.0;
    const double width = xmax - xmin + 2 * margin;
    const double height = ymax - ymin + 2 * margin;

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << mm(width) << "mm\" height=\"" << mm(height)
      << "mm\" viewBox=\"" << mm(xmin - margin) << ' ' << mm(-ymax - margin) << ' ' << mm(width) << ' '
      << mm(height) << "\">\n";
    o << "<style>.mirror{stroke:#1f4e9c;stroke-width:2.5}.beam{stroke:#d08a1c;stroke-width:0.6}"
         ".virtual{stroke:#999;stroke-width:0.6;stroke-dasharray:4 3}.valve{fill:none;stroke:#333;stroke-width:1}"
         "text{font:10px sans-serif}</style>\n";
    o << "<g id=\"model\" transform=\"scale(1,-1)\">\n";
    o << "<polygon id=\"valve\" class=\"valve\" points=\"" << mm(s.V0.x) << ',' << mm(s.V0.y) << ' ' << mm(s.V1.x)
      << ',' << mm(s.V1.y) << ' ' << mm(-s.V0.x) << ',' << mm(0.0) << ' ' << mm(s.V2.x) << ',' << mm(s.V2.y)
      << "\"/>\n";
    o << "<circle id=\"observation-circle\" class=\"valve\" cx=\"0.0000\" cy=\"0.0000\" r=\"" << mm(r) << "\"/>\n";

    auto line = [&](const char* id, const char* cls, Point2 a, Point2 b) {
        o << "<line";
        if (id) o << " id=\"" << id << '"';
        o << " class=\"" << cls << "\" x1=\"" << mm(a.x) << "\" y1=\"" << mm(a.y) << "\" x2=\"" << mm(b.x)
          << "\" y2=\"" << mm(b.y) << "\"/>\n";
    };

    // Beam boundaries: virtual-camera rays to the mirrors, then the real folded rays to H.
    auto tangency = [](Point2 eye, Point2 end) {
        const Point2 u = end - eye;
        return eye + (-geometry::dot(eye, u) / geometry::dot(u, u)) * u;
    };
    for (auto [eye, end] : {std::pair{s.P, s.A1}, {s.P, s.A2}, {s.Q, s.B0}, {s.Q, s.B1}}) {
        line(nullptr, "virtual", eye, end);
        line(nullptr, "beam", tangency(eye, end), end);
    }
    line(nullptr, "beam", s.A1, s.H);
    line(nullptr, "beam", s.A2, s.H);
    for (Point2 b : {s.B0, s.B1}) {
        // The C end on the reflected edge of this B end.
        const geometry::Line edge = geometry::Line::through(s.R, b);
        const Point2 c = geometry::distance_to_line(s.C1, edge) <= geometry::distance_to_line(s.C2, edge) ? s.C1 : s.C2;
        line(nullptr, "beam", b, c);
    }
    line(nullptr, "beam", s.C1, s.H);
    line(nullptr, "beam", s.C2, s.H);

    line("mirror-A", "mirror", s.A1, s.A2);
    line("mirror-B", "mirror", s.B0, s.B1);
    line("mirror-C", "mirror", s.C1, s.C2);

    auto marker = [&](const char* id, Point2 p, double radius, const char* fill) {
        o << "<circle id=\"" << id << "\" cx=\"" << mm(p.x) << "\" cy=\"" << mm(p.y) << "\" r=\"" << mm(radius)
          << "\" fill=\"" << fill << "\"/>\n";
    };
    marker("camera-H", s.H, 4.0, "#b22222");
    marker("virtual-P", s.P, 3.0, "#888");
    marker("virtual-Q", s.Q, 3.0, "#888");
    marker("virtual-R", s.R, 2.0, "#bbb");
    o << "</g>\n";

    auto label = [&](const char* text, Point2 p) {
        o << "<text x=\"" << mm(p.x + 5.0) << "\" y=\"" << mm(-p.y - 5.0) << "\">" << text << "</text>\n";
    };
    label("H", s.H);
    label("P", s.P);
    label("Q", s.Q);
    label("R", s.R);
    label("A", s.A);
    label("B", s.B);
    label("C", s.C);

    // 50 mm scale bar along the bottom margin.
    const double sx = xmin;
    const double sy = -ymin + margin * 0.6;
    o << "<g id=\"scale\"><line x1=\"" << mm(sx) << "\" y1=\"" << mm(sy) << "\" x2=\"" << mm(sx + 50.0)
      << "\" y2=\"" << mm(sy) << "\" stroke=\"#000\" stroke-width=\"1\"/><text x=\"" << mm(sx + 55.0) << "\" y=\""
      << mm(sy + 3.0) << "\">50 mm</text></g>\n";
    o << "</svg>\n";
    return o.str();
}

}  // namespace mirrorplan::io
