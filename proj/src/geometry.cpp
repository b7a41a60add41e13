#include "slcd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace slcd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOnLineTol = 1e-12;
constexpr double kBoundaryTol = 1e-9;

}  // namespace

Line make_canonical(double rho, double theta) {
    double t = std::fmod(theta, kPi);
    if (t < 0.0) t += kPi;
    if (t >= kPi) t = 0.0;  // fmod rounding at the seam
    // Parity of pi-shifts decides the rho sign flip.
    long long shifts = std::llround((theta - t) / kPi);
    return {(shifts % 2 != 0) ? -rho : rho, t};
}

int side_of_line(const Line& line, Point p) {
    const double d = signed_distance(line, p);
    if (std::abs(d) <= kOnLineTol) return 0;
    return d > 0.0 ? 1 : -1;
}

Segment polar_to_segment(const Line& line, const Frame& frame) {
    const double hw = frame.half_width();
    const double hh = frame.half_height();
    const double c = std::cos(line.theta);
    const double s = std::sin(line.theta);

    std::vector<Point> hits;
    auto push_unique = [&hits](Point p) {
        for (const Point& q : hits) {
            if (std::abs(q.x - p.x) < kBoundaryTol &&
                std::abs(q.y - p.y) < kBoundaryTol) {
                return;
            }
        }
        hits.push_back(p);
    };

    // x = +-hw edges: y = (rho - x*c)/s
    if (std::abs(s) > kBoundaryTol) {
        for (double x : {-hw, hw}) {
            double y = (line.rho - x * c) / s;
            if (y >= -hh - kBoundaryTol && y <= hh + kBoundaryTol) {
                push_unique({x, std::clamp(y, -hh, hh)});
            }
        }
    }
    // y = +-hh edges: x = (rho - y*s)/c
    if (std::abs(c) > kBoundaryTol) {
        for (double y : {-hh, hh}) {
            double x = (line.rho - y * s) / c;
            if (x >= -hw - kBoundaryTol && x <= hw + kBoundaryTol) {
                push_unique({std::clamp(x, -hw, hw), y});
            }
        }
    }

    if (hits.size() < 2) {
        throw NoIntersection("polar_to_segment: line misses the frame");
    }
    // Farthest pair, then lexicographic order for determinism.
    Point a = hits[0], b = hits[1];
    double best = -1.0;
    for (size_t i = 0; i < hits.size(); ++i) {
        for (size_t j = i + 1; j < hits.size(); ++j) {
            double d = norm(hits[j] - hits[i]);
            if (d > best) {
                best = d;
                a = hits[i];
                b = hits[j];
            }
        }
    }
    if (best < kBoundaryTol) {
        throw NoIntersection(
            "polar_to_segment: line only touches the frame corner");
    }
    // Chord midpoint must fall in the open rectangle; rejects lines that
    // run along a boundary edge.
    const Point mid = 0.5 * (a + b);
    if (std::abs(mid.x) >= hw - kBoundaryTol ||
        std::abs(mid.y) >= hh - kBoundaryTol) {
        throw NoIntersection("polar_to_segment: line misses the interior");
    }
    if (b.x < a.x || (b.x == a.x && b.y < a.y)) std::swap(a, b);
    return {a, b};
}

Line segment_to_polar(Point p0, Point p1) {
    const Point d = p1 - p0;
    const double len = norm(d);
    if (len < kBoundaryTol) {
        throw DegenerateSegment("segment_to_polar: identical endpoints");
    }
    // Unit normal of the direction.
    const Point n = {-d.y / len, d.x / len};
    const double theta = std::atan2(n.y, n.x);
    const double rho = dot(n, p0);
    return make_canonical(rho, theta);
}

Point line_intersection(const Line& a, const Line& b) {
    const double det = std::sin(b.theta - a.theta);
    if (std::abs(det) < kOnLineTol) {
        throw ParallelLines("line_intersection: parallel lines");
    }
    const double ca = std::cos(a.theta), sa = std::sin(a.theta);
    const double cb = std::cos(b.theta), sb = std::sin(b.theta);
    return {(a.rho * sb - b.rho * sa) / det, (ca * b.rho - cb * a.rho) / det};
}

double polar_distance(const Line& a, const Line& b, const Frame& frame) {
    const double rho_max = frame.rho_max();
    auto dist = [&](double rho_b, double theta_b) {
        const double dr = (a.rho - rho_b) / rho_max;
        const double dt = (a.theta - theta_b) / (kPi / 2.0);
        return std::hypot(dr, dt);
    };
    double d = dist(b.rho, b.theta);
    d = std::min(d, dist(-b.rho, b.theta - kPi));
    d = std::min(d, dist(-b.rho, b.theta + kPi));
    return d;
}

Line nearest_representation(const Line& target, const Line& reference,
                            const Frame& frame) {
    const double rho_max = frame.rho_max();
    auto dist = [&](const Line& rep) {
        const double dr = (reference.rho - rep.rho) / rho_max;
        const double dt = (reference.theta - rep.theta) / (kPi / 2.0);
        return std::hypot(dr, dt);
    };
    Line best = target;
    double best_d = dist(best);
    for (const Line rep : {Line{-target.rho, target.theta - kPi},
                           Line{-target.rho, target.theta + kPi}}) {
        const double d = dist(rep);
        if (d < best_d) {
            best_d = d;
            best = rep;
        }
    }
    return best;
}

Point pixel_center(const Frame& frame, int grid_h, int grid_w, int row,
                   int col) {
    const double sx = double(frame.width_px) / grid_w;
    const double sy = double(frame.height_px) / grid_h;
    return {(col + 0.5) * sx - frame.half_width(),
            (row + 0.5) * sy - frame.half_height()};
}

std::vector<int> rasterize_line(const Line& line, int grid_h, int grid_w,
                                const Frame& frame) {
    polar_to_segment(line, frame);  // NoIntersection check

    const double c = std::cos(line.theta);
    const double s = std::sin(line.theta);
    const double sx = double(frame.width_px) / grid_w;
    const double sy = double(frame.height_px) / grid_h;

    std::vector<int> pixels;
    // The line direction is (-sin, cos); walk the dominant axis so the
    // result is one pixel thick and 8-connected.
    if (std::abs(c) >= std::abs(s)) {
        // more vertical: one pixel per row
        for (int r = 0; r < grid_h; ++r) {
            const double y = (r + 0.5) * sy - frame.half_height();
            const double x = (line.rho - y * s) / c;
            const double gc = (x + frame.half_width()) / sx - 0.5;
            const long col = std::lround(gc);
            if (col >= 0 && col < grid_w) {
                pixels.push_back(r * grid_w + int(col));
            }
        }
    } else {
        // more horizontal: one pixel per column
        for (int col = 0; col < grid_w; ++col) {
            const double x = (col + 0.5) * sx - frame.half_width();
            const double y = (line.rho - x * c) / s;
            const double gr = (y + frame.half_height()) / sy - 0.5;
            const long r = std::lround(gr);
            if (r >= 0 && r < grid_h) {
                pixels.push_back(int(r) * grid_w + col);
            }
        }
        std::sort(pixels.begin(), pixels.end());
    }
    return pixels;
}

}  // namespace slcd
