#include "slcd/arrangement.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace slcd {

namespace {

constexpr double kMinCellArea = 1e-9;
constexpr double kDuplicateTol = 1e-9;
constexpr int kMaxLines = 32;

}  // namespace

double polygon_area(const std::vector<Point>& poly) {
    double twice = 0.0;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Point& p = poly[i];
        const Point& q = poly[(i + 1) % n];
        twice += p.x * q.y - q.x * p.y;
    }
    return 0.5 * twice;
}

double ConvexCell::area() const { return std::abs(polygon_area(vertices)); }

Point ConvexCell::centroid() const {
    // Area-weighted polygon centroid.
    double twice = 0.0, cx = 0.0, cy = 0.0;
    const size_t n = vertices.size();
    for (size_t i = 0; i < n; ++i) {
        const Point& p = vertices[i];
        const Point& q = vertices[(i + 1) % n];
        const double cross = p.x * q.y - q.x * p.y;
        twice += cross;
        cx += (p.x + q.x) * cross;
        cy += (p.y + q.y) * cross;
    }
    if (std::abs(twice) < kMinCellArea) {
        // Degenerate: fall back to the vertex mean.
        Point m{};
        for (const Point& p : vertices) m = m + p;
        return (1.0 / double(n)) * m;
    }
    return {cx / (3.0 * twice), cy / (3.0 * twice)};
}

std::vector<Point> clip_polygon(const std::vector<Point>& poly,
                                const Line& line, int side) {
    std::vector<Point> out;
    const size_t n = poly.size();
    if (n == 0) return out;
    out.reserve(n + 2);

    auto keep = [&](double d) { return side > 0 ? d >= 0.0 : d <= 0.0; };

    for (size_t i = 0; i < n; ++i) {
        const Point& cur = poly[i];
        const Point& nxt = poly[(i + 1) % n];
        const double dc = signed_distance(line, cur);
        const double dn = signed_distance(line, nxt);
        if (keep(dc)) out.push_back(cur);
        if ((dc < 0.0) != (dn < 0.0) && dc != dn) {
            const double t = dc / (dc - dn);
            out.push_back(cur + t * (nxt - cur));
        }
    }
    return out;
}

RegionPartition partition_rectangle(const std::vector<Line>& lines,
                                    const Frame& frame) {
    if (lines.size() > kMaxLines) {
        throw SpecInvalid("partition_rectangle: more than 32 lines");
    }
    for (size_t i = 0; i < lines.size(); ++i) {
        for (size_t j = i + 1; j < lines.size(); ++j) {
            if (polar_distance(lines[i], lines[j], frame) < kDuplicateTol) {
                throw DuplicateLines("partition_rectangle: lines " +
                                     std::to_string(i) + " and " +
                                     std::to_string(j) + " coincide");
            }
        }
    }

    const double hw = frame.half_width();
    const double hh = frame.half_height();
    ConvexCell rect;
    rect.vertices = {{-hw, -hh}, {-hw, hh}, {hw, hh}, {hw, -hh}};
    if (polygon_area(rect.vertices) < 0) {
        std::reverse(rect.vertices.begin(), rect.vertices.end());
    }

    std::vector<ConvexCell> cells{rect};
    for (size_t k = 0; k < lines.size(); ++k) {
        std::vector<ConvexCell> next;
        next.reserve(cells.size() * 2);
        for (ConvexCell& cell : cells) {
            for (int side : {-1, 1}) {
                std::vector<Point> piece =
                    clip_polygon(cell.vertices, lines[k], side);
                if (piece.size() < 3 ||
                    std::abs(polygon_area(piece)) <= kMinCellArea) {
                    continue;
                }
                ConvexCell c;
                c.vertices = std::move(piece);
                c.sign_vector = cell.sign_vector;
                c.sign_vector.push_back(int8_t(side));
                next.push_back(std::move(c));
            }
        }
        cells = std::move(next);
    }

    return RegionPartition{std::move(cells), frame, lines};
}

namespace {

// Deterministic polygon ordering so intersection_area(a, b) clips in the
// same direction regardless of argument order; keeps region_iou exactly
// symmetric.
bool polygon_before(const std::vector<Point>& a, const std::vector<Point>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].x != b[i].x) return a[i].x < b[i].x;
        if (a[i].y != b[i].y) return a[i].y < b[i].y;
    }
    return false;
}

// Area of the intersection of two convex polygons: clip `subject` by every
// edge half-plane of `clipper`. For a counterclockwise polygon the interior
// is to the left of each directed edge.
double clipped_intersection_area(const std::vector<Point>& subject,
                                 const std::vector<Point>& clipper) {
    const double orient = polygon_area(clipper) >= 0 ? 1.0 : -1.0;
    std::vector<Point> inter = subject;
    const size_t n = clipper.size();
    for (size_t i = 0; i < n && inter.size() >= 3; ++i) {
        const Point& p = clipper[i];
        const Point& q = clipper[(i + 1) % n];
        const Point e = q - p;
        auto inside = [&](const Point& x) {
            return orient * (e.x * (x.y - p.y) - e.y * (x.x - p.x)) >= 0.0;
        };
        std::vector<Point> out;
        out.reserve(inter.size() + 2);
        for (size_t j = 0; j < inter.size(); ++j) {
            const Point& cur = inter[j];
            const Point& nxt = inter[(j + 1) % inter.size()];
            const bool cin = inside(cur);
            const bool nin = inside(nxt);
            if (cin) out.push_back(cur);
            if (cin != nin) {
                const double dc =
                    orient * (e.x * (cur.y - p.y) - e.y * (cur.x - p.x));
                const double dn =
                    orient * (e.x * (nxt.y - p.y) - e.y * (nxt.x - p.x));
                const double t = dc / (dc - dn);
                out.push_back(cur + t * (nxt - cur));
            }
        }
        inter = std::move(out);
    }
    return inter.size() >= 3 ? std::abs(polygon_area(inter)) : 0.0;
}

}  // namespace

double region_iou(const ConvexCell& a, const ConvexCell& b) {
    const bool a_first = polygon_before(a.vertices, b.vertices);
    const double ai =
        a_first ? clipped_intersection_area(a.vertices, b.vertices)
                : clipped_intersection_area(b.vertices, a.vertices);
    const double uni = a.area() + b.area() - ai;
    if (uni <= 0.0) return 0.0;
    return std::min(1.0, ai / uni);
}

double hiou(const std::vector<Line>& detected,
            const std::vector<Line>& ground_truth, const Frame& frame) {
    const RegionPartition ps = partition_rectangle(detected, frame);
    const RegionPartition pt = partition_rectangle(ground_truth, frame);
    const size_t n = ps.cells.size();
    const size_t m = pt.cells.size();

    std::vector<double> best_s(n, 0.0), best_t(m, 0.0);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < m; ++j) {
            const double v = region_iou(ps.cells[i], pt.cells[j]);
            best_s[i] = std::max(best_s[i], v);
            best_t[j] = std::max(best_t[j], v);
        }
    }
    // per-side sums first, so swapping the arguments reproduces the exact
    // same additions
    double sum_s = 0.0, sum_t = 0.0;
    for (double v : best_s) sum_s += v;
    for (double v : best_t) sum_t += v;
    return (sum_s + sum_t) / double(n + m);
}

PixelLabelMap pixel_label_map(const std::vector<Line>& lines, int grid_h,
                              int grid_w, const Frame& frame) {
    PixelLabelMap out;
    out.grid_h = grid_h;
    out.grid_w = grid_w;
    out.labels.assign(size_t(grid_h) * grid_w, -1);

    std::map<std::vector<int8_t>, int> seen;
    for (int r = 0; r < grid_h; ++r) {
        for (int c = 0; c < grid_w; ++c) {
            std::vector<int8_t> key(lines.size());
            const Point p = pixel_center(frame, grid_h, grid_w, r, c);
            for (size_t k = 0; k < lines.size(); ++k) {
                const int s = side_of_line(lines[k], p);
                key[k] = int8_t(s == 0 ? 1 : s);  // on-line pixels -> +1
            }
            auto [it, inserted] = seen.emplace(std::move(key), int(seen.size()));
            out.labels[size_t(r) * grid_w + c] = it->second;
        }
    }
    out.label_count = int(seen.size());
    return out;
}

}  // namespace slcd
