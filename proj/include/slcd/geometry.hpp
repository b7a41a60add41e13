#pragma once

/**
 * @file geometry.hpp
 * @brief Canonical line representation in centered polar coordinates,
 *        conversions, side tests, intersections and rasterization.
 *
 * Coordinate convention used throughout the library:
 *   - origin at the image center, x rightward, y downward (pixel sense),
 *   - a line is the locus  x*cos(theta) + y*sin(theta) = rho,
 *   - rho is a signed distance from the center in pixels,
 *   - theta is the normal angle in radians, kept canonical in [0, pi).
 * (rho, theta) and (-rho, theta +- pi) denote the same line; all functions
 * here accept canonical lines and return canonical lines.
 */

#include <cmath>
#include <vector>

#include "slcd/error.hpp"

namespace slcd {

struct Point {
    double x{};
    double y{};
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }

/// Image rectangle. Centered coordinates span
/// [-width/2, width/2] x [-height/2, height/2].
struct Frame {
    int width_px{};
    int height_px{};

    Frame(int width, int height) : width_px(width), height_px(height) {
        if (width < 2 || height < 2) {
            throw SpecInvalid("Frame: width and height must be >= 2");
        }
    }

    double half_width() const { return 0.5 * width_px; }
    double half_height() const { return 0.5 * height_px; }
    double diagonal() const {
        return std::hypot(double(width_px), double(height_px));
    }
    /// Largest |rho| a line touching the frame can have.
    double rho_max() const { return 0.5 * diagonal(); }
};

struct Line {
    double rho{};    // signed distance from center, pixels
    double theta{};  // normal angle, radians, canonical in [0, pi)
};

/// Full-frame chord of a line; both endpoints lie on the frame boundary.
struct Segment {
    Point p0{};
    Point p1{};
};

/// Wrap (rho, theta) into the canonical representation with theta in [0, pi).
/// Shifting theta by pi negates rho.
Line make_canonical(double rho, double theta);

/// Signed distance of a point from a line (positive on the side the normal
/// points to).
inline double signed_distance(const Line& line, Point p) {
    return p.x * std::cos(line.theta) + p.y * std::sin(line.theta) - line.rho;
}

/// Side of a line a point falls on: sign of the signed distance.
/// Returns 0 when the point is on the line within 1e-12.
int side_of_line(const Line& line, Point p);

/// Boundary chord of a line across the frame rectangle, endpoints ordered
/// lexicographically by (x, then y). Throws NoIntersection when the line
/// misses the open rectangle.
Segment polar_to_segment(const Line& line, const Frame& frame);

/// Canonical (rho, theta) of the line through two points.
/// Throws DegenerateSegment when the points coincide.
Line segment_to_polar(Point p0, Point p1);

/// Intersection point of two lines. Throws ParallelLines when
/// |sin(theta_a - theta_b)| < 1e-12.
Point line_intersection(const Line& a, const Line& b);

/// Normalized L2 distance in polar coordinates:
///   d = sqrt((d_rho / rho_max)^2 + (d_theta / (pi/2))^2),
/// minimized over the two equivalent representations of b
/// (negated rho, theta shifted by pi). Symmetric pseudometric.
double polar_distance(const Line& a, const Line& b, const Frame& frame);

/// Representation of `target` (possibly non-canonical, theta shifted by pi
/// and rho negated) nearest to `reference` under the polar_distance metric.
/// Adding the componentwise difference to `reference` and canonicalizing
/// reproduces `target`.
Line nearest_representation(const Line& target, const Line& reference,
                            const Frame& frame);

/// Center of grid pixel (row, col) in centered frame coordinates, for a
/// grid_h x grid_w sampling of the frame.
Point pixel_center(const Frame& frame, int grid_h, int grid_w, int row,
                   int col);

/// One-pixel-thick 8-connected rasterization of a line on a grid_h x grid_w
/// grid covering the frame. Returns sorted row-major pixel indices
/// (row * grid_w + col). Throws NoIntersection when the line misses the
/// frame interior.
std::vector<int> rasterize_line(const Line& line, int grid_h, int grid_w,
                                const Frame& frame);

}  // namespace slcd
